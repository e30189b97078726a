#pragma once

#include "kakeya/parallel.hpp"
#include "kakeya/rational.hpp"
#include "kakeya/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace kakeya::maximal {

using geom::CountGrid;
using geom::Direction;
using geom::GridSpec;
using geom::SphericalNet;
using geom::Tube;
using geom::VoxelSet;

/// The midpoint set A at working resolution, with its declared upper box
/// dimension. For finite sets the suites use the empirical dimension at the
/// working scale instead of the declared one.
template <int N>
struct MidpointSet {
    std::vector<Vec<N>> points;
    Rat declared_dim{0};
};

/// Per-direction tube averages of an indicator: value(e) in [0, 1].
template <int N>
struct MaximalProfile {
    SphericalNet<N> net;
    std::vector<double> values;
    double delta = 0.0;
    std::optional<MidpointSet<N>> restricted_to;

    bool restricted() const { return restricted_to.has_value(); }

    /// Equal quadrature mass per direction of a maximal net.
    double direction_weight() const {
        return geom::sphere_surface_measure(N) / static_cast<double>(net.size());
    }
    double max_value() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, v);
        return m;
    }
};

/// Restricted maximal profile: value(e) = max over a in A of
/// |E ∩ T^delta_e(a)| / |T|, computed by voxel quadrature and clamped to 1.
template <int N>
MaximalProfile<N> restricted_maximal_profile(const VoxelSet<N>& E, const MidpointSet<N>& A,
                                             double delta, const SphericalNet<N>& net) {
    if (A.points.empty()) throw std::invalid_argument("empty midpoint set");
    if (std::abs(net.separation - delta) > 1e-12)
        throw std::invalid_argument("net separation must equal delta");
    if (E.h() > delta / 4.0 + 1e-15)
        throw std::invalid_argument("profile needs grid resolution h <= delta/4");

    MaximalProfile<N> prof;
    prof.net = net;
    prof.delta = delta;
    prof.restricted_to = A;
    prof.values.assign(net.size(), 0.0);
    const double tv = geom::tube_volume(delta, N);
    parallel_for(net.size(), [&](std::size_t i) {
        double best = 0.0;
        for (const auto& a : A.points) {
            const Tube<N> t(net.dirs[i], a, delta);
            best = std::max(best, geom::measure_tube_intersection(E, t) / tv);
        }
        prof.values[i] = std::min(1.0, best);
    });
    return prof;
}

/// Unrestricted profile: the sup over midpoints runs over a lattice of the
/// bounding box (step <= delta/2). Lattice points sit at lo + i*step, so
/// halving the step keeps every previous midpoint and values never decrease.
template <int N>
MaximalProfile<N> unrestricted_maximal_profile(const VoxelSet<N>& E, double delta,
                                               const SphericalNet<N>& net, double lattice_step) {
    if (!(lattice_step > 0.0) || lattice_step > delta / 2.0 + 1e-15)
        throw std::invalid_argument("lattice step must lie in (0, delta/2]");
    const auto box = E.grid().box();
    std::vector<Vec<N>> lattice;
    std::array<std::int64_t, N> counts{};
    std::int64_t total = 1;
    for (int i = 0; i < N; ++i) {
        counts[i] = static_cast<std::int64_t>(std::floor((box.hi[i] - box.lo[i]) / lattice_step)) + 1;
        total *= counts[i];
    }
    if (total <= 0) throw std::invalid_argument("empty midpoint lattice");
    lattice.reserve(static_cast<std::size_t>(total));
    std::array<std::int64_t, N> idx{};
    for (std::int64_t k = 0; k < total; ++k) {
        Vec<N> p;
        for (int i = 0; i < N; ++i) p[i] = box.lo[i] + static_cast<double>(idx[i]) * lattice_step;
        lattice.push_back(p);
        int axis = N - 1;
        while (axis >= 0) {
            if (++idx[axis] < counts[axis]) break;
            idx[axis] = 0;
            --axis;
        }
    }

    MaximalProfile<N> prof;
    prof.net = net;
    prof.delta = delta;
    prof.values.assign(net.size(), 0.0);
    const double tv = geom::tube_volume(delta, N);
    parallel_for(net.size(), [&](std::size_t i) {
        double best = 0.0;
        for (const auto& a : lattice) {
            const Tube<N> t(net.dirs[i], a, delta);
            best = std::max(best, geom::measure_tube_intersection(E, t) / tv);
        }
        prof.values[i] = std::min(1.0, best);
    });
    return prof;
}

struct LevelSetReport {
    double lambda = 0.0;
    long direction_count = 0;
    double measure_estimate = 0.0;
};

/// Counts net directions with value > lambda; the measure estimate assigns
/// equal sphere mass to each direction of the maximal net.
template <int N>
LevelSetReport level_set_measure(const MaximalProfile<N>& prof, double lambda) {
    LevelSetReport rep;
    rep.lambda = lambda;
    for (double v : prof.values)
        if (v > lambda) ++rep.direction_count;
    rep.measure_estimate = static_cast<double>(rep.direction_count) * prof.direction_weight();
    return rep;
}

/// Weak L^{q,inf} norm: sup over a geometric grid of 64 levels between the
/// smallest positive value and the largest value of lambda * |{v >= lambda}|^{1/q}.
/// Counting with >= at grid points leaves the sup unchanged and keeps
/// exactly-saturated profiles at the full-sphere value.
template <int N>
double weak_norm(const MaximalProfile<N>& prof, double q, double* lambda_star = nullptr) {
    if (q < 1.0) throw std::invalid_argument("weak norm needs q >= 1");
    double vmin = 0.0, vmax = 0.0;
    for (double v : prof.values) {
        if (v > 0.0) vmin = (vmin == 0.0) ? v : std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    if (lambda_star) *lambda_star = 0.0;
    if (vmax <= 0.0) return 0.0;

    const double w = prof.direction_weight();
    double best = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double lam = vmin * std::pow(vmax / vmin, static_cast<double>(i) / 63.0);
        long count = 0;
        for (double v : prof.values)
            if (v >= lam) ++count;
        const double val = lam * std::pow(static_cast<double>(count) * w, 1.0 / q);
        if (val > best) {
            best = val;
            if (lambda_star) *lambda_star = lam;
        }
    }
    return best;
}

/// L^{p'} norm of the tube overlap count field sum_k chi_{T_k} under voxel
/// quadrature. The family must be delta-separated in direction.
template <int N>
double tube_sum_norm(const std::vector<Tube<N>>& tubes, const Rat& p_prime, const GridSpec<N>& g) {
    if (tubes.empty()) throw std::invalid_argument("empty tube family");
    const Rat one(1);
    if (p_prime < one) throw std::invalid_argument("tube_sum_norm needs p' >= 1");
    const double delta = tubes.front().radius;
    for (std::size_t i = 0; i < tubes.size(); ++i) {
        if (std::abs(tubes[i].radius - delta) > 1e-15)
            throw std::invalid_argument("tube family must share one radius");
        for (std::size_t j = i + 1; j < tubes.size(); ++j)
            if (geom::chord_distance(tubes[i].dir, tubes[j].dir) <= delta)
                throw std::invalid_argument("tube directions must be delta-separated");
    }
    CountGrid<N> counts(g);
    for (const auto& t : tubes) counts.add_tube(t);
    return counts.lp_norm(to_double(p_prime));
}

}  // namespace kakeya::maximal
