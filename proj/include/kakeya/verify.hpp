#pragma once

#include "kakeya/bush.hpp"
#include "kakeya/fractals.hpp"
#include "kakeya/io.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace kakeya::verify {

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckLine> lines;

    bool pass() const {
        for (const auto& l : lines)
            if (!l.pass) return false;
        return true;
    }
    void add(const std::string& name, bool ok, const std::string& detail) {
        lines.push_back({name, ok, detail});
    }
};

inline std::string format_report(const SuiteReport& rep) {
    std::ostringstream os;
    os << "suite " << rep.suite << "\n";
    for (const auto& l : rep.lines)
        os << "  [" << (l.pass ? "pass" : "FAIL") << "] " << l.name << "  " << l.detail << "\n";
    os << (rep.pass() ? "PASS" : "FAIL") << " " << rep.suite << "\n";
    return os.str();
}

namespace detail {

inline double regression_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

template <int N>
std::pair<double, double> tube_pair_constants(double delta, long pairs, long samples,
                                              std::uint64_t seed) {
    auto rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> mid(-0.2, 0.2);
    std::uniform_real_distribution<double> off(-3.0 * delta, 3.0 * delta);
    const auto unit = [&] {
        Vec<N> v;
        do {
            for (int i = 0; i < N; ++i) v[i] = gauss(rng);
        } while (norm(v) < 1e-6);
        return geom::Direction<N>(v);
    };
    double cmax = 0.0, cdiam = 0.0;
    for (long rep = 0; rep < pairs; ++rep) {
        Vec<N> m1, m2;
        for (int i = 0; i < N; ++i) m1[i] = mid(rng);
        for (int i = 0; i < N; ++i) m2[i] = m1[i] + off(rng);
        const geom::Tube<N> t1(unit(), m1, delta);
        const geom::Tube<N> t2(unit(), m2, delta);
        const auto st = geom::intersection_stats(t1, t2, samples, derive_seed(seed, "mc") + rep);
        cmax = std::max(cmax, st.measure * (st.theta + delta) / std::pow(delta, N));
        cdiam = std::max(cdiam, st.diameter * (st.theta + delta) / delta);
    }
    return {cmax, cdiam};
}

/// Hemisphere bush family through the origin, pruned to folded
/// delta-separation.
inline std::vector<geom::Tube<2>> origin_bush_family(double delta, std::uint64_t seed) {
    const auto net = geom::greedy_net<2>(delta, seed);
    auto folded = geom::fold_to_hemisphere(net.dirs);
    std::vector<geom::Direction<2>> dirs;
    for (const auto& d : folded) {
        bool ok = true;
        for (const auto& kept : dirs)
            if (geom::folded_chord_distance(d, kept) <= delta) { ok = false; break; }
        if (ok) dirs.push_back(d);
    }
    std::vector<geom::Tube<2>> tubes;
    tubes.reserve(dirs.size());
    for (const auto& d : dirs) tubes.emplace_back(d, Vec<2>{}, delta);
    return tubes;
}

inline std::vector<geom::Direction<2>> sparse_directions(const geom::SphericalNet<2>& net,
                                                         double min_sep) {
    auto folded = geom::fold_to_hemisphere(net.dirs);
    std::sort(folded.begin(), folded.end(),
              [](const geom::Direction<2>& a, const geom::Direction<2>& b) {
                  return std::atan2(a.v[1], a.v[0]) < std::atan2(b.v[1], b.v[0]);
              });
    std::vector<geom::Direction<2>> out;
    for (const auto& d : folded) {
        bool ok = true;
        for (const auto& kept : out)
            if (geom::folded_chord_distance(d, kept) <= min_sep) { ok = false; break; }
        if (ok) out.push_back(d);
    }
    return out;
}

}  // namespace detail

/// Tube-pair intersection bounds: per (n, delta) the empirical constants in
/// measure <= C delta^n/(theta+delta) and diam <= C' delta/(theta+delta)
/// must exist and stay within a factor 2 across the two scales.
inline SuiteReport suite_tubes(std::uint64_t seed, long pairs = 200, long samples = 20000) {
    SuiteReport rep;
    rep.suite = "tubes";
    const double d5 = std::pow(2.0, -5), d7 = std::pow(2.0, -7);

    const auto run = [&](auto dim_tag, const char* label) {
        constexpr int N = decltype(dim_tag)::dim;
        const auto [c5, p5] = detail::tube_pair_constants<N>(d5, pairs, samples, derive_seed(seed, "a"));
        const auto [c7, p7] = detail::tube_pair_constants<N>(d7, pairs, samples, derive_seed(seed, "b"));
        std::ostringstream os;
        os << "C(" << label << ",2^-5)=" << c5 << " C(" << label << ",2^-7)=" << c7
           << " C'(2^-5)=" << p5 << " C'(2^-7)=" << p7;
        const bool exists = c5 > 0 && c7 > 0 && p5 > 0 && p7 > 0;
        const bool stable = std::max(c5, c7) <= 2.0 * std::min(c5, c7) &&
                            std::max(p5, p7) <= 2.0 * std::min(p5, p7);
        rep.add(std::string("measure/diameter constants n=") + label, exists && stable, os.str());
    };
    run(Vec<2>{}, "2");
    run(Vec<3>{}, "3");
    return rep;
}

/// Overlap norm of maximal origin bush families: the ratio
/// ||sum chi_T||_2^2 / (log(1/delta) sum |T|) stays within a factor 4 over
/// delta = 2^-5..2^-8 (planar tube-sum inequality with h = 0, p' = 2).
inline SuiteReport suite_cordoba(std::uint64_t seed) {
    SuiteReport rep;
    rep.suite = "cordoba";
    std::vector<double> ratios;
    std::ostringstream detail_os;
    for (int k = 5; k <= 8; ++k) {
        const double delta = std::pow(2.0, -k);
        const auto tubes = detail::origin_bush_family(delta, derive_seed(seed, "net") + k);
        const auto g = geom::GridSpec<2>::from_box(geom::AABB<2>::cube(0.58), delta / 4.0);
        const double n2 = maximal::tube_sum_norm<2>(tubes, Rat(2), g);
        double total = 0.0;
        for (const auto& t : tubes) total += t.volume();
        const double ratio = n2 * n2 / (std::log(1.0 / delta) * total);
        ratios.push_back(ratio);
        detail_os << "2^-" << k << ":" << ratio << " ";
    }
    const double lo = *std::min_element(ratios.begin(), ratios.end());
    const double hi = *std::max_element(ratios.begin(), ratios.end());
    rep.add("L2 overlap ratio stable across delta", hi <= 4.0 * lo,
            detail_os.str() + " spread=" + io::g17(hi / lo));
    return rep;
}

/// Bush decomposition fixtures: single bush (m = 1, density >= 1/4), two far
/// bushes (m = 2, anchors within delta), lattice midpoints (stopping bound at
/// the empirical working-scale dimension). Logged constants: suite C = 16,
/// b = 4, c = 1/4 reference values, pruning separation 10 delta / lambda.
inline SuiteReport suite_bush(std::uint64_t seed) {
    SuiteReport rep;
    rep.suite = "bush";
    const double suite_c = 16.0;

    {  // single bush
        const double delta = 1.0 / 128.0, lambda = 0.6;
        const auto net = geom::greedy_net<2>(delta, derive_seed(seed, "single"));
        const auto dirs = detail::sparse_directions(net, 30.0 * delta / lambda);
        geom::VoxelSet<2> E(geom::AABB<2>::cube(0.6), delta / 4.0);
        for (const auto& e : dirs) geom::rasterize_tube(geom::Tube<2>(e, Vec<2>{}, delta), E);
        const maximal::MidpointSet<2> A{{Vec<2>{}}, Rat(0)};
        const auto d = bush::decompose(E, A, net, delta, lambda);
        const bool m1 = d.stopped && d.bushes.size() == 1;
        const bool dense = !d.steps.empty() && d.steps[0].density_ratio >= 0.25;
        const auto stop = bush::verify_stopping_bound(d, E.measure(), 0.0, suite_c);
        std::ostringstream os;
        os << "m=" << d.bushes.size() << " density=" << (d.steps.empty() ? 0.0 : d.steps[0].density_ratio)
           << " bound=" << stop.bound << " C=" << suite_c;
        rep.add("single-bush fixture", m1 && dense && stop.pass, os.str());
        bool sep = true, anchored = true;
        for (const auto& b : d.bushes) {
            sep = sep && b.separation_holds();
            anchored = anchored && b.anchored();
        }
        rep.add("single-bush separation/anchoring", sep && anchored,
                "pruning separation 10*delta/lambda");
    }
    {  // two bushes
        const double delta = 1.0 / 128.0, lambda = 0.6;
        const auto net = geom::greedy_net<2>(delta, derive_seed(seed, "two"));
        const auto dirs = detail::sparse_directions(net, 30.0 * delta / lambda);
        std::vector<geom::Direction<2>> fam1, fam2;
        for (std::size_t i = 0; i < dirs.size(); ++i) (i % 2 ? fam2 : fam1).push_back(dirs[i]);
        const Vec<2> a1{{-0.55, 0.0}}, a2{{0.55, 0.0}};
        geom::VoxelSet<2> E(geom::AABB<2>::cube(1.15), delta / 4.0);
        for (const auto& e : fam1) geom::rasterize_tube(geom::Tube<2>(e, a1, delta), E);
        for (const auto& e : fam2) geom::rasterize_tube(geom::Tube<2>(e, a2, delta), E);
        const maximal::MidpointSet<2> A{{a1, a2}, Rat(0)};
        const auto d = bush::decompose(E, A, net, delta, lambda);
        bool ok = d.stopped && d.bushes.size() == 2;
        double anchor_err = 1.0;
        if (ok) {
            std::vector<double> xs{d.bushes[0].anchor[0], d.bushes[1].anchor[0]};
            std::sort(xs.begin(), xs.end());
            anchor_err = std::max(std::abs(xs[0] - a1[0]), std::abs(xs[1] - a2[0]));
            ok = anchor_err <= delta;
        }
        const auto stop = bush::verify_stopping_bound(d, E.measure(), 0.0, suite_c);
        std::ostringstream os;
        os << "m=" << d.bushes.size() << " anchor_err=" << anchor_err << " bound=" << stop.bound;
        rep.add("two-bush fixture", ok && stop.pass, os.str());
        rep.add("telescoping removed <= |E|", bush::telescoping_holds(d, E), "");
    }
    {  // lattice midpoints at the empirical working-scale dimension
        const double delta = 1.0 / 16.0, lambda = 0.6;
        const auto net = geom::greedy_net<2>(delta, derive_seed(seed, "lattice"));
        fractal::FractalSpec spec;
        spec.kind = fractal::FractalSpec::Kind::lattice;
        spec.step = 0.25;
        spec.target_dim = Rat(0);
        const auto A = fractal::generate<2>(spec, delta, geom::AABB<2>::cube(0.26));
        const auto box = geom::AABB<2>::cube(0.85);
        const auto E = fractal::build_restricted_kakeya(A, net, delta, box,
                                                        fractal::AssignmentRule::random,
                                                        derive_seed(seed, "assign"));
        const double s_emp = std::log(static_cast<double>(fractal::covering_number(A, delta))) /
                             std::log(1.0 / delta);
        const auto d = bush::decompose(E, A, net, delta, lambda, s_emp);
        const auto stop = bush::verify_stopping_bound(d, E.measure(), s_emp, suite_c);
        std::ostringstream os;
        os << "m=" << stop.m << " s_emp=" << s_emp << " bound=" << stop.bound << " C=" << suite_c;
        rep.add("lattice fixture stopping bound", d.stopped && stop.pass, os.str());
        bool density = true;
        for (const auto& s : d.steps) density = density && s.density_ratio >= 0.1;
        rep.add("lattice fixture densities >= 1/10", density,
                "reference constants b=4 c=1/4");
    }
    return rep;
}

/// Box-dimension estimator: middle-thirds Cantor slope within 0.05 of
/// log2/log3 over delta = 3^-3..3^-7; dyadic unit segment slope within 0.05
/// of 1.
inline SuiteReport suite_boxdim(std::uint64_t) {
    SuiteReport rep;
    rep.suite = "boxdim";
    const geom::AABB<2> unit{Vec<2>{{0.0, 0.0}}, Vec<2>{{1.0, 1.0}}};
    {
        fractal::FractalSpec spec;
        spec.kind = fractal::FractalSpec::Kind::cantor_product;
        spec.ratio = 1.0 / 3.0;
        spec.axes = 1;
        spec.target_dim = Rat(63, 100);
        const auto A = fractal::generate<2>(spec, std::pow(3.0, -9), unit);
        std::vector<double> scales;
        for (int k = 3; k <= 7; ++k) scales.push_back(std::pow(3.0, -k));
        const auto fit = fractal::box_dimension_fit(A, scales);
        const double target = std::log(2.0) / std::log(3.0);
        rep.add("Cantor slope within 0.05 of log2/log3", std::abs(fit.slope - target) <= 0.05,
                "slope=" + io::g17(fit.slope) + " target=" + io::g17(target) +
                    " r2=" + io::g17(fit.r2));
    }
    {
        fractal::FractalSpec spec;
        spec.kind = fractal::FractalSpec::Kind::cantor_product;
        spec.ratio = 0.499999999;
        spec.axes = 1;
        spec.target_dim = Rat(1);
        const auto A = fractal::generate<2>(spec, std::pow(2.0, -10), unit);
        std::vector<double> scales;
        for (int k = 3; k <= 8; ++k) scales.push_back(std::pow(2.0, -k));
        const auto fit = fractal::box_dimension_fit(A, scales);
        rep.add("unit segment slope within 0.05 of 1", std::abs(fit.slope - 1.0) <= 0.05,
                "slope=" + io::g17(fit.slope) + " r2=" + io::g17(fit.r2));
    }
    return rep;
}

/// Point-restricted Kakeya union at s = 0 in the plane: box dimension of the
/// union >= 1.9 at delta = 2^-8, and the normalized weak-norm scaling
/// exponent stays within [-0.2, 0.2] of the predicted 0.
inline SuiteReport suite_maximal(std::uint64_t seed) {
    SuiteReport rep;
    rep.suite = "maximal";
    std::vector<double> xs, ys;
    std::vector<io::WeakNormRow> rows;
    for (int k = 5; k <= 8; ++k) {
        const double delta = std::pow(2.0, -k);
        const auto net = geom::greedy_net<2>(delta, derive_seed(seed, "net") + k);
        const maximal::MidpointSet<2> A{{Vec<2>{}}, Rat(0)};
        const auto K = fractal::build_restricted_kakeya(A, net, delta, geom::AABB<2>::cube(0.6));
        const auto prof = maximal::restricted_maximal_profile(K, A, delta, net);
        double lam = 0.0;
        const double nrm = maximal::weak_norm(prof, 2.0, &lam);
        rows.push_back({delta, nrm, lam});
        xs.push_back(std::log(1.0 / delta));
        ys.push_back(std::log(nrm / std::sqrt(K.measure())));
        if (k == 8) {
            std::vector<double> scales;
            for (int j = 5; j <= 8; ++j) scales.push_back(std::pow(2.0, -j));
            const auto fit = fractal::box_dimension_fit(K, scales);
            rep.add("point bush box dimension >= 1.9 at 2^-8", fit.slope >= 1.9,
                    "slope=" + io::g17(fit.slope) + " r2=" + io::g17(fit.r2));
        }
    }
    const double slope = detail::regression_slope(xs, ys);
    std::ostringstream os;
    os << "slope=" << slope << " norms=";
    for (const auto& r : rows) os << r.norm << " ";
    rep.add("weak-norm scaling exponent within [-0.2, 0.2]", std::abs(slope) <= 0.2, os.str());
    return rep;
}

inline SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
    if (name == "tubes") return suite_tubes(seed);
    if (name == "cordoba") return suite_cordoba(seed);
    if (name == "bush") return suite_bush(seed);
    if (name == "boxdim") return suite_boxdim(seed);
    if (name == "maximal") return suite_maximal(seed);
    throw std::invalid_argument("unknown suite '" + name +
                                "' (expected tubes|cordoba|bush|boxdim|maximal)");
}

}  // namespace kakeya::verify
