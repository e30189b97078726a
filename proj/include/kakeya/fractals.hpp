#pragma once

#include "kakeya/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

namespace kakeya::fractal {

using geom::AABB;
using geom::Direction;
using geom::SphericalNet;
using geom::Tube;
using geom::VoxelSet;
using maximal::MidpointSet;

/// Generator recipes for midpoint sets with a prescribed upper box dimension.
/// Target dimensions by kind (documented formulas):
///   single_point            0
///   lattice(step)           n at scales >= step (0 in the limit)
///   cantor_product(r, k)    k * log 2 / log(1/r)
///   random_self_similar     log(maps) / log(1/ratio)
struct FractalSpec {
    enum class Kind { single_point, lattice, cantor_product, random_self_similar };
    Kind kind = Kind::single_point;
    double step = 0.125;     // lattice
    double ratio = 1.0 / 3;  // cantor_product, random_self_similar
    int axes = 1;            // cantor_product
    int maps = 2;            // random_self_similar
    std::uint64_t seed = 0;  // random_self_similar
    Rat target_dim{0};

    bool operator==(const FractalSpec&) const = default;

    void validate(int n) const {
        if (target_dim < 0 || target_dim > Rat(n)) throw std::invalid_argument("target_dim outside [0, n]");
        switch (kind) {
            case Kind::single_point: break;
            case Kind::lattice:
                if (!(step > 0.0)) throw std::invalid_argument("lattice step must be positive");
                break;
            case Kind::cantor_product:
                if (!(ratio > 0.0 && ratio < 0.5))
                    throw std::invalid_argument("cantor ratio must lie in (0, 1/2)");
                if (axes < 1 || axes > n) throw std::invalid_argument("cantor axes outside [1, n]");
                break;
            case Kind::random_self_similar:
                if (!(ratio > 0.0 && ratio < 1.0))
                    throw std::invalid_argument("contraction ratio must lie in (0, 1)");
                if (maps < 1) throw std::invalid_argument("need at least one map");
                break;
        }
    }
};

namespace detail {

/// Left endpoints of the level-k construction intervals of the two-map
/// Cantor set {x -> r x, x -> r x + (1 - r)} in [0, 1].
inline std::vector<double> cantor_level(double ratio, int level) {
    std::vector<double> pts{0.0};
    for (int l = 0; l < level; ++l) {
        std::vector<double> next;
        next.reserve(pts.size() * 2);
        const double shift = (1.0 - ratio) * std::pow(ratio, l);
        for (double p : pts) {
            next.push_back(p);
            next.push_back(p + shift);
        }
        pts = std::move(next);
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

}  // namespace detail

/// Finite delta-resolution approximation of the recipe inside bbox.
/// Deterministic given the recipe's seed.
template <int N>
MidpointSet<N> generate(const FractalSpec& spec, double delta, const AABB<N>& bbox) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta outside (0, 1)");
    spec.validate(N);

    MidpointSet<N> out;
    out.declared_dim = spec.target_dim;
    Vec<N> center;
    for (int i = 0; i < N; ++i) center[i] = 0.5 * (bbox.lo[i] + bbox.hi[i]);

    switch (spec.kind) {
        case FractalSpec::Kind::single_point: {
            out.points.push_back(center);
            break;
        }
        case FractalSpec::Kind::lattice: {
            std::array<std::int64_t, N> counts{};
            std::int64_t total = 1;
            for (int i = 0; i < N; ++i) {
                counts[i] =
                    static_cast<std::int64_t>(std::floor((bbox.hi[i] - bbox.lo[i]) / spec.step + 1e-9)) +
                    1;
                total *= counts[i];
            }
            std::array<std::int64_t, N> idx{};
            for (std::int64_t k = 0; k < total; ++k) {
                Vec<N> p;
                for (int i = 0; i < N; ++i)
                    p[i] = bbox.lo[i] + static_cast<double>(idx[i]) * spec.step;
                out.points.push_back(p);
                int axis = N - 1;
                while (axis >= 0) {
                    if (++idx[axis] < counts[axis]) break;
                    idx[axis] = 0;
                    --axis;
                }
            }
            break;
        }
        case FractalSpec::Kind::cantor_product: {
            const int level =
                static_cast<int>(std::ceil(std::log(1.0 / delta) / std::log(1.0 / spec.ratio) - 1e-9));
            const auto line = detail::cantor_level(spec.ratio, level);
            std::vector<Vec<N>> pts{center};
            for (int axis = 0; axis < spec.axes; ++axis) {
                std::vector<Vec<N>> next;
                next.reserve(pts.size() * line.size());
                for (const auto& p : pts)
                    for (double c : line) {
                        Vec<N> q = p;
                        q[axis] = bbox.lo[axis] + c * (bbox.hi[axis] - bbox.lo[axis]);
                        next.push_back(q);
                    }
                pts = std::move(next);
            }
            out.points = std::move(pts);
            break;
        }
        case FractalSpec::Kind::random_self_similar: {
            const int level =
                static_cast<int>(std::ceil(std::log(1.0 / delta) / std::log(1.0 / spec.ratio) - 1e-9));
            double count = 1.0;
            int capped_level = 0;
            while (capped_level < level && count * spec.maps <= (1 << 20)) {
                count *= spec.maps;
                ++capped_level;
            }
            auto rng = make_rng(spec.seed);
            std::uniform_real_distribution<double> u(0.0, 1.0 - spec.ratio);
            std::vector<Vec<N>> shifts(static_cast<std::size_t>(spec.maps));
            for (auto& s : shifts)
                for (int i = 0; i < N; ++i) s[i] = u(rng);
            std::vector<Vec<N>> pts{Vec<N>{}};
            for (int l = 0; l < capped_level; ++l) {
                std::vector<Vec<N>> next;
                next.reserve(pts.size() * shifts.size());
                for (const auto& p : pts)
                    for (const auto& s : shifts) next.push_back(s + spec.ratio * p);
                pts = std::move(next);
            }
            for (auto& p : pts)
                for (int i = 0; i < N; ++i)
                    p[i] = bbox.lo[i] + p[i] * (bbox.hi[i] - bbox.lo[i]);
            out.points = std::move(pts);
            break;
        }
    }
    return out;
}

/// Occupied-cell count of a grid of side delta/sqrt(n); each cell has
/// diameter delta, so this is a two-sided surrogate for the covering number
/// (within dimensional factors).
template <int N>
std::int64_t covering_number(const MidpointSet<N>& A, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    const double cell = delta / std::sqrt(static_cast<double>(N));
    std::set<std::array<std::int64_t, N>> seen;
    for (const auto& p : A.points) {
        std::array<std::int64_t, N> key;
        for (int i = 0; i < N; ++i) key[i] = static_cast<std::int64_t>(std::floor(p[i] / cell));
        seen.insert(key);
    }
    return static_cast<std::int64_t>(seen.size());
}

/// Same surrogate evaluated on an occupancy grid.
template <int N>
std::int64_t covering_number(const VoxelSet<N>& E, double delta) {
    return E.covering_count(delta / std::sqrt(static_cast<double>(N)));
}

struct DimensionFit {
    std::vector<double> scales;
    std::vector<std::int64_t> counts;
    double slope = 0.0;
    double r2 = 0.0;
};

namespace detail {

inline DimensionFit fit_counts(std::vector<double> scales, std::vector<std::int64_t> counts) {
    if (scales.size() < 3) throw std::invalid_argument("need at least 3 scales");
    // sort coarse -> fine and insist on monotone counts
    std::vector<std::size_t> order(scales.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scales[a] > scales[b]; });
    DimensionFit fit;
    for (std::size_t i : order) {
        fit.scales.push_back(scales[i]);
        fit.counts.push_back(counts[i]);
    }
    for (std::size_t i = 0; i + 1 < fit.counts.size(); ++i)
        if (fit.counts[i + 1] < fit.counts[i])
            throw std::logic_error("covering counts decreased at a finer scale");

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = static_cast<double>(fit.scales.size());
    for (std::size_t i = 0; i < fit.scales.size(); ++i) {
        const double x = std::log(1.0 / fit.scales[i]);
        const double y = std::log(static_cast<double>(std::max<std::int64_t>(1, fit.counts[i])));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    const double ss_tot = syy - sy * sy / n;
    const double ss_res = ss_tot - fit.slope * (sxy - sx * sy / n);
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace detail

/// Least-squares slope of log N_delta against log(1/delta).
template <int N>
DimensionFit box_dimension_fit(const MidpointSet<N>& A, const std::vector<double>& scales) {
    std::vector<std::int64_t> counts;
    counts.reserve(scales.size());
    for (double d : scales) counts.push_back(covering_number(A, d));
    return detail::fit_counts(scales, counts);
}

template <int N>
DimensionFit box_dimension_fit(const VoxelSet<N>& E, const std::vector<double>& scales) {
    std::vector<std::int64_t> counts;
    counts.reserve(scales.size());
    for (double d : scales) counts.push_back(covering_number(E, d));
    return detail::fit_counts(scales, counts);
}

/// Midpoint assignment rules for building a restricted Kakeya union: which
/// a(e) in A carries the segment of direction e.
enum class AssignmentRule {
    nearest,      // point of A nearest the box center, ties lexicographic
    random,       // seeded uniform pick per direction
    max_overlap,  // greedy: reuse the midpoint whose tube adds the least new volume
};

/// Rasterized union of one tube per net direction with midpoints chosen from
/// A by the given rule. The fidelity grid step is delta/4.
template <int N>
VoxelSet<N> build_restricted_kakeya(const MidpointSet<N>& A, const SphericalNet<N>& net,
                                    double delta, const AABB<N>& bbox,
                                    AssignmentRule rule = AssignmentRule::nearest,
                                    std::uint64_t seed = 0) {
    if (A.points.empty()) throw std::invalid_argument("empty midpoint set");
    VoxelSet<N> out(bbox, delta / 4.0);

    Vec<N> center;
    for (int i = 0; i < N; ++i) center[i] = 0.5 * (bbox.lo[i] + bbox.hi[i]);

    if (rule == AssignmentRule::nearest) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < A.points.size(); ++i) {
            const double di = dist(A.points[i], center);
            const double db = dist(A.points[best], center);
            if (di < db || (di == db && lex_less(A.points[i], A.points[best]))) best = i;
        }
        for (const auto& e : net.dirs) geom::rasterize_tube(Tube<N>(e, A.points[best], delta), out);
        return out;
    }
    if (rule == AssignmentRule::random) {
        auto rng = make_rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, A.points.size() - 1);
        for (const auto& e : net.dirs)
            geom::rasterize_tube(Tube<N>(e, A.points[pick(rng)], delta), out);
        return out;
    }
    // max_overlap: for each direction choose the midpoint whose tube marks
    // the fewest new cells, probing on a copy
    for (const auto& e : net.dirs) {
        std::size_t best = 0;
        std::int64_t best_new = -1;
        for (std::size_t i = 0; i < A.points.size(); ++i) {
            const Tube<N> t(e, A.points[i], delta);
            std::int64_t fresh = 0;
            geom::for_each_cell_in_tube(out.grid(), t,
                                        [&](const std::array<std::int64_t, N>& idx, const Vec<N>&) {
                                            if (!out.test(out.grid().linear(idx))) ++fresh;
                                        });
            if (best_new < 0 || fresh < best_new) {
                best_new = fresh;
                best = i;
            }
        }
        geom::rasterize_tube(Tube<N>(e, A.points[best], delta), out);
    }
    return out;
}

}  // namespace kakeya::fractal
