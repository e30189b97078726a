#include <catch2/catch_amalgamated.hpp>

#include "kakeya/bush.hpp"

#include <cmath>
#include <numbers>

using namespace kakeya;
using namespace kakeya::geom;
using namespace kakeya::maximal;
using namespace kakeya::bush;

namespace {

/// Folded net directions, sorted by angle, greedily thinned to pairwise
/// folded separation > min_sep. Deterministic.
std::vector<Direction<2>> sparse_directions(const SphericalNet<2>& net, double min_sep) {
    auto folded = fold_to_hemisphere(net.dirs);
    std::sort(folded.begin(), folded.end(), [](const Direction<2>& a, const Direction<2>& b) {
        return std::atan2(a.v[1], a.v[0]) < std::atan2(b.v[1], b.v[0]);
    });
    std::vector<Direction<2>> out;
    for (const auto& d : folded) {
        bool ok = true;
        for (const auto& kept : out)
            if (folded_chord_distance(d, kept) <= min_sep) { ok = false; break; }
        if (ok) out.push_back(d);
    }
    return out;
}

struct BushFixture {
    double delta;
    double lambda;
    SphericalNet<2> net;
    AABB<2> box;
    VoxelSet<2> E;
    std::vector<std::vector<Tube<2>>> families;

    BushFixture(double d, double lam, double halfwidth, std::uint64_t seed)
        : delta(d), lambda(lam), net(greedy_net<2>(d, seed)), box(AABB<2>::cube(halfwidth)),
          E(box, d / 4.0) {}

    void add_bush(const Vec<2>& anchor, const std::vector<Direction<2>>& dirs) {
        std::vector<Tube<2>> fam;
        for (const auto& e : dirs) {
            Tube<2> t(e, anchor, delta);
            rasterize_tube(t, E);
            fam.push_back(t);
        }
        families.push_back(std::move(fam));
    }
};

}  // namespace

TEST_CASE("pigeonhole ball") {
    const double delta = 1.0 / 32.0;
    const MidpointSet<2> A{{Vec<2>{}}, Rat(0)};

    SECTION("all candidates equal") {
        std::vector<Vec<2>> mids(7, Vec<2>{{0.21, -0.13}});
        const auto [center, members] = pigeonhole_ball(A, mids, delta);
        CHECK(members.size() == 7);
        CHECK(dist(center, mids[0]) <= delta / 3.0);
    }
    SECTION("spread lattice has no concentration") {
        std::vector<Vec<2>> mids;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) mids.push_back(Vec<2>{{0.2 * i, 0.2 * j}});
        const auto [center, members] = pigeonhole_ball(A, mids, delta);
        CHECK(members.size() == 1);
        (void)center;
    }
    SECTION("sixty candidates packed into one ball dominate") {
        auto rng = make_rng(5);
        std::uniform_real_distribution<double> u(-delta / 20.0, delta / 20.0);
        std::vector<Vec<2>> mids;
        for (int i = 0; i < 60; ++i) mids.push_back(Vec<2>{{0.4 + u(rng), 0.4 + u(rng)}});
        std::uniform_real_distribution<double> far(-0.9, -0.1);
        for (int i = 0; i < 40; ++i) mids.push_back(Vec<2>{{far(rng), far(rng)}});
        const auto [center, members] = pigeonhole_ball(A, mids, delta);
        CHECK(members.size() >= 60);
        CHECK(dist(center, Vec<2>{{0.4, 0.4}}) < delta);
    }
    SECTION("pigeonhole count property: fullest ball >= candidates / balls hit") {
        auto rng = make_rng(6);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        std::vector<Vec<2>> mids;
        for (int i = 0; i < 200; ++i) mids.push_back(Vec<2>{{u(rng), u(rng)}});
        const auto [center, members] = pigeonhole_ball(A, mids, delta);
        // count distinct cells the same way the cover does
        const double cell = 2.0 * delta / (3.0 * std::sqrt(2.0));
        std::set<std::pair<long, long>> hit;
        for (const auto& m : mids)
            hit.insert({static_cast<long>(std::floor(m[0] / cell)),
                        static_cast<long>(std::floor(m[1] / cell))});
        CHECK(members.size() * hit.size() >= mids.size());
        (void)center;
    }
    SECTION("empty candidates rejected") {
        CHECK_THROWS_AS(pigeonhole_ball(A, {}, delta), std::invalid_argument);
    }
}

TEST_CASE("extract_bush on a constructed single bush") {
    const double delta = 1.0 / 128.0;
    const double lambda = 0.6;
    BushFixture fx(delta, lambda, 0.6, 1001);
    const auto dirs = sparse_directions(fx.net, 3.0 * 10.0 * delta / lambda);
    REQUIRE(dirs.size() >= 5);
    fx.add_bush(Vec<2>{}, dirs);
    const MidpointSet<2> A{{Vec<2>{}}, Rat(0)};

    const auto b = extract_bush(fx.E, A, fx.net, delta, lambda);
    REQUIRE(b.has_value());
    CHECK(b->tubes.size() >= (dirs.size() * 9) / 10);
    CHECK(b->tubes.size() <= dirs.size() + 1);
    CHECK(dist(b->anchor, Vec<2>{}) <= delta);
    CHECK(b->anchored());
    CHECK(b->separation_holds());

    // extracted directions sit on the constructed ones
    for (const auto& e : b->dirs) {
        double nearest = 10.0;
        for (const auto& f : dirs) nearest = std::min(nearest, folded_chord_distance(e, f));
        REQUIRE(nearest < 0.5 * delta);
    }
}

TEST_CASE("extract_bush returns nothing on an empty set") {
    const double delta = 1.0 / 32.0;
    BushFixture fx(delta, 0.5, 0.6, 1002);
    const MidpointSet<2> A{{Vec<2>{}}, Rat(0)};
    CHECK_FALSE(extract_bush(fx.E, A, fx.net, delta, 0.5).has_value());
    CHECK_THROWS_AS(extract_bush(fx.E, A, fx.net, delta, 1.5), std::invalid_argument);
}

TEST_CASE("extract_bush at high level keeps only the tube's own direction window") {
    const double delta = 1.0 / 64.0;
    BushFixture fx(delta, 0.9, 0.6, 1003);
    const Direction<2> e0 = fx.net.dirs[17];
    fx.add_bush(Vec<2>{}, {e0});
    const MidpointSet<2> A{{Vec<2>{}}, Rat(0)};

    const auto b = extract_bush(fx.E, A, fx.net, delta, 0.9);
    REQUIRE(b.has_value());
    // averaged overlap model: value > 0.9 forces an angle below ~delta/0.9
    for (const auto& e : b->dirs) REQUIRE(acute_angle(e, e0) <= 1.5 * delta);
    CHECK(b->tubes.size() >= 1);
}

TEST_CASE("decompose: single-bush fixture stops after one extraction") {
    const double delta = 1.0 / 128.0;
    const double lambda = 0.6;
    BushFixture fx(delta, lambda, 0.6, 1004);
    const auto dirs = sparse_directions(fx.net, 3.0 * 10.0 * delta / lambda);
    fx.add_bush(Vec<2>{}, dirs);
    const MidpointSet<2> A{{Vec<2>{}}, Rat(0)};

    const auto d = decompose(fx.E, A, fx.net, delta, lambda);
    REQUIRE(d.stopped);
    REQUIRE(d.bushes.size() == 1);
    CHECK(d.epsilon0 > 0.0);
    CHECK(d.level_measures.size() == 2);
    CHECK(d.level_measures[1] < d.epsilon0 / 4.0);
    CHECK(d.steps[0].density_ratio >= 0.25);
    CHECK(dist(d.bushes[0].anchor, Vec<2>{}) <= delta);
    CHECK(telescoping_holds(d, fx.E));

    const auto rep = verify_stopping_bound(d, fx.E.measure(), 0.0, 16.0);
    CHECK(rep.m == 1);
    CHECK(rep.pass);
}

TEST_CASE("decompose: two far-separated bushes are recovered in order") {
    const double delta = 1.0 / 128.0;
    const double lambda = 0.6;
    BushFixture fx(delta, lambda, 1.15, 1005);
    const auto dirs = sparse_directions(fx.net, 3.0 * 10.0 * delta / lambda);
    REQUIRE(dirs.size() >= 6);
    std::vector<Direction<2>> fam1, fam2;
    for (std::size_t i = 0; i < dirs.size(); ++i) (i % 2 ? fam2 : fam1).push_back(dirs[i]);
    const Vec<2> a1{{-0.55, 0.0}};
    const Vec<2> a2{{0.55, 0.0}};
    fx.add_bush(a1, fam1);
    fx.add_bush(a2, fam2);
    const MidpointSet<2> A{{a1, a2}, Rat(0)};

    const auto d = decompose(fx.E, A, fx.net, delta, lambda);
    REQUIRE(d.stopped);
    REQUIRE(d.bushes.size() == 2);
    std::vector<double> xs{d.bushes[0].anchor[0], d.bushes[1].anchor[0]};
    std::sort(xs.begin(), xs.end());
    CHECK(std::abs(xs[0] - a1[0]) <= delta);
    CHECK(std::abs(xs[1] - a2[0]) <= delta);
    for (const auto& b : d.bushes) {
        CHECK(b.anchored());
        CHECK(b.separation_holds());
    }
    CHECK(telescoping_holds(d, fx.E));
    const auto rep = verify_stopping_bound(d, fx.E.measure(), 0.0, 16.0);
    CHECK(rep.m == 2);
    CHECK(rep.pass);
}

TEST_CASE("decompose: empty set gives a degenerate report") {
    const double delta = 1.0 / 32.0;
    BushFixture fx(delta, 0.5, 0.6, 1006);
    const MidpointSet<2> A{{Vec<2>{}}, Rat(0)};
    const auto d = decompose(fx.E, A, fx.net, delta, 0.5);
    CHECK(d.stopped);
    CHECK(d.bushes.empty());
    CHECK(d.epsilon0 == 0.0);
    const auto rep = verify_stopping_bound(d, 0.0, 0.0);
    CHECK(rep.m == 0);
    CHECK(rep.pass);
}

TEST_CASE("decompose: lambda <= delta reports the trivial volume bound") {
    const double delta = 1.0 / 16.0;
    BushFixture fx(delta, 0.5, 0.6, 1007);
    rasterize_tube(Tube<2>(fx.net.dirs[0], Vec<2>{}, delta), fx.E);
    const MidpointSet<2> A{{Vec<2>{}}, Rat(0)};
    const auto d = decompose(fx.E, A, fx.net, delta, delta / 2.0);
    CHECK(d.case1);
    CHECK_FALSE(d.stopped);
    CHECK(d.bushes.empty());
    CHECK(d.trivial_bound == (delta / 2.0) * delta);
    // the witness inequality |E| >= c lambda delta^{n-1} holds with c = 1
    CHECK(fx.E.measure() >= d.trivial_bound);
    CHECK_THROWS_AS(verify_stopping_bound(d, fx.E.measure(), 0.0), std::invalid_argument);
}

TEST_CASE("decompose is deterministic") {
    const double delta = 1.0 / 64.0;
    const double lambda = 0.6;
    BushFixture fx(delta, lambda, 0.6, 1008);
    const auto dirs = sparse_directions(fx.net, 3.0 * 10.0 * delta / lambda);
    fx.add_bush(Vec<2>{}, dirs);
    const MidpointSet<2> A{{Vec<2>{}}, Rat(0)};

    const auto d1 = decompose(fx.E, A, fx.net, delta, lambda);
    const auto d2 = decompose(fx.E, A, fx.net, delta, lambda);
    REQUIRE(d1.bushes.size() == d2.bushes.size());
    REQUIRE(d1.level_measures == d2.level_measures);
    for (std::size_t i = 0; i < d1.bushes.size(); ++i) {
        REQUIRE(d1.bushes[i].anchor == d2.bushes[i].anchor);
        REQUIRE(d1.bushes[i].dirs.size() == d2.bushes[i].dirs.size());
        for (std::size_t j = 0; j < d1.bushes[i].dirs.size(); ++j)
            REQUIRE(d1.bushes[i].dirs[j].v == d2.bushes[i].dirs[j].v);
    }
}

TEST_CASE("bush density check") {
    const double delta = 1.0 / 64.0;
    const double lambda = 0.5;
    BushFixture fx(delta, lambda, 0.6, 1009);
    const auto dirs = sparse_directions(fx.net, 3.0 * 10.0 * delta / lambda);
    fx.add_bush(Vec<2>{}, dirs);
    const MidpointSet<2> A{{Vec<2>{}}, Rat(0)};
    const auto b = extract_bush(fx.E, A, fx.net, delta, lambda);
    REQUIRE(b.has_value());

    SECTION("set covering its own bush doubles the level") {
        const auto [ratio, pass] = check_bush_density(*b, fx.E);
        CHECK(ratio >= 1.0 / lambda - 0.2);
        CHECK(pass);
    }
    SECTION("adversarial empty set flags inconsistency") {
        VoxelSet<2> empty(fx.box, delta / 4.0);
        const auto [ratio, pass] = check_bush_density(*b, empty);
        CHECK(ratio == 0.0);
        CHECK_FALSE(pass);
    }
}

TEST_CASE("disjoint cores") {
    const double delta = 1.0 / 64.0;
    const double lambda = 0.5;
    const auto box = AABB<2>::cube(0.6);

    SECTION("single tube") {
        Bush<2> b;
        b.anchor = Vec<2>{};
        b.lambda = lambda;
        b.delta = delta;
        b.separation = 10.0 * delta / lambda;
        b.tubes.emplace_back(Direction<2>(Vec<2>{{1.0, 0.0}}), Vec<2>{}, delta);
        b.dirs.push_back(b.tubes[0].dir);
        VoxelSet<2> E(box, delta / 4.0);
        rasterize_tube(b.tubes[0], E);
        CHECK(check_disjoint_cores(b, E, 0.5));
    }
    SECTION("two tubes at the pruning separation have cores split by c = 1/2") {
        // strip model: intersection diameter <= 4 delta / theta = 2 lambda / 5
        const double angle = 0.33;  // just above the 10 delta/lambda chord 0.3125
        Bush<2> b;
        b.anchor = Vec<2>{};
        b.lambda = lambda;
        b.delta = delta;
        b.separation = 10.0 * delta / lambda;
        b.tubes.emplace_back(Direction<2>(Vec<2>{{1.0, 0.0}}), Vec<2>{}, delta);
        b.tubes.emplace_back(Direction<2>(Vec<2>{{std::cos(angle), std::sin(angle)}}), Vec<2>{},
                             delta);
        for (const auto& t : b.tubes) b.dirs.push_back(t.dir);
        REQUIRE(b.separation_holds());
        VoxelSet<2> E(box, delta / 4.0);
        for (const auto& t : b.tubes) rasterize_tube(t, E);
        CHECK(check_disjoint_cores(b, E, 0.5));
    }
    SECTION("negative control: tubes at angle delta overlap far from the anchor") {
        Bush<2> b;
        b.anchor = Vec<2>{};
        b.lambda = lambda;
        b.delta = delta;
        b.separation = 10.0 * delta / lambda;
        b.tubes.emplace_back(Direction<2>(Vec<2>{{1.0, 0.0}}), Vec<2>{}, delta);
        b.tubes.emplace_back(Direction<2>(Vec<2>{{std::cos(delta), std::sin(delta)}}), Vec<2>{},
                             delta);
        for (const auto& t : b.tubes) b.dirs.push_back(t.dir);
        CHECK_FALSE(b.separation_holds());
        VoxelSet<2> E(box, delta / 4.0);
        for (const auto& t : b.tubes) rasterize_tube(t, E);
        CHECK_FALSE(check_disjoint_cores(b, E, 0.5));
    }
}
