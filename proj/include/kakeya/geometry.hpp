#pragma once

#include "kakeya/rng.hpp"
#include "kakeya/vec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace kakeya::geom {

inline double unit_ball_volume(int k) {
    // pi^{k/2} / Gamma(k/2 + 1)
    return std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

inline double sphere_surface_measure(int n) {
    // |S^{n-1}| = n * v_n
    return n * unit_ball_volume(n);
}

/// Volume of the delta-neighbourhood of a unit segment in R^n:
/// cylinder of length 1 plus two half-ball caps.
inline double tube_volume(double delta, int n) {
    return unit_ball_volume(n - 1) * std::pow(delta, n - 1) + unit_ball_volume(n) * std::pow(delta, n);
}

template <int N>
struct Direction {
    Vec<N> v;

    Direction() { v[0] = 1.0; }
    explicit Direction(const Vec<N>& raw) : v(raw) {
        const double r = norm(v);
        if (!(r > 1e-300)) throw std::invalid_argument("zero direction vector");
        for (int i = 0; i < N; ++i) v[i] /= r;
    }

    bool unit_within(double tol = 1e-12) const { return std::abs(norm(v) - 1.0) <= tol; }
};

template <int N>
double chord_distance(const Direction<N>& a, const Direction<N>& b) {
    return dist(a.v, b.v);
}

/// Distance after identifying e with -e; the natural metric for tubes, which
/// are invariant under flipping the direction.
template <int N>
double folded_chord_distance(const Direction<N>& a, const Direction<N>& b) {
    return std::min(dist(a.v, b.v), norm(a.v + b.v));
}

/// Acute angle in [0, pi/2].
template <int N>
double acute_angle(const Direction<N>& a, const Direction<N>& b) {
    const double c = std::min(1.0, std::abs(dot(a.v, b.v)));
    return std::acos(c);
}

template <int N>
struct AABB {
    Vec<N> lo, hi;

    bool contains(const AABB& inner) const {
        for (int i = 0; i < N; ++i)
            if (inner.lo[i] < lo[i] || inner.hi[i] > hi[i]) return false;
        return true;
    }
    static AABB cube(double halfwidth) {
        AABB box;
        for (int i = 0; i < N; ++i) {
            box.lo[i] = -halfwidth;
            box.hi[i] = halfwidth;
        }
        return box;
    }
};

/// Delta-neighbourhood of the unit segment {mid + t dir : |t| <= 1/2}.
template <int N>
struct Tube {
    Direction<N> dir;
    Vec<N> mid;
    double radius = 0.0;

    Tube() = default;
    Tube(const Direction<N>& e, const Vec<N>& a, double delta) : dir(e), mid(a), radius(delta) {
        if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("tube radius outside (0, 1)");
    }

    double axis_parameter(const Vec<N>& x) const {
        return std::clamp(dot(x - mid, dir.v), -0.5, 0.5);
    }
    double distance_to_segment(const Vec<N>& x) const {
        const double t = axis_parameter(x);
        return dist(x, mid + t * dir.v);
    }
    bool contains(const Vec<N>& x) const { return distance_to_segment(x) <= radius; }

    double volume() const { return tube_volume(radius, N); }

    AABB<N> aabb() const {
        AABB<N> box;
        for (int i = 0; i < N; ++i) {
            const double e = 0.5 * std::abs(dir.v[i]) + radius;
            box.lo[i] = mid[i] - e;
            box.hi[i] = mid[i] + e;
        }
        return box;
    }
};

// ---------------------------------------------------------------------------
// spherical nets

namespace detail {

/// Uniform-grid hash for near-neighbour queries among unit vectors.
template <int N>
class DirectionHash {
  public:
    explicit DirectionHash(double cell) : cell_(cell) {}

    void insert(const Vec<N>& v) {
        pts_.push_back(v);
        cells_[key(v)].push_back(static_cast<int>(pts_.size()) - 1);
    }

    /// True if some stored vector is within `r` of v (Euclidean).
    bool any_within(const Vec<N>& v, double r) const {
        std::array<std::int64_t, N> base;
        for (int i = 0; i < N; ++i) base[i] = coord(v[i]);
        std::array<std::int64_t, N> idx;
        return scan(v, r, base, idx, 0);
    }

    std::size_t size() const { return pts_.size(); }

  private:
    bool scan(const Vec<N>& v, double r, const std::array<std::int64_t, N>& base,
              std::array<std::int64_t, N>& idx, int axis) const {
        if (axis == N) {
            const auto it = cells_.find(pack(idx));
            if (it == cells_.end()) return false;
            for (int slot : it->second)
                if (dist(pts_[static_cast<std::size_t>(slot)], v) <= r) return true;
            return false;
        }
        for (std::int64_t d = -1; d <= 1; ++d) {
            idx[axis] = base[axis] + d;
            if (scan(v, r, base, idx, axis + 1)) return true;
        }
        return false;
    }

    std::int64_t coord(double x) const { return static_cast<std::int64_t>(std::floor((x + 2.0) / cell_)); }
    std::uint64_t key(const Vec<N>& v) const {
        std::array<std::int64_t, N> idx;
        for (int i = 0; i < N; ++i) idx[i] = coord(v[i]);
        return pack(idx);
    }
    static std::uint64_t pack(const std::array<std::int64_t, N>& idx) {
        std::uint64_t k = 0;
        for (int i = 0; i < N; ++i) k = k * 0x100000ull + static_cast<std::uint64_t>(idx[i] & 0xfffff);
        return k;
    }

    double cell_;
    std::vector<Vec<N>> pts_;
    std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

template <int N>
std::vector<Vec<N>> candidate_stream(double delta, std::uint64_t seed);

/// n=2: equal-angle stream with a small seeded jitter.
template <>
inline std::vector<Vec<2>> candidate_stream<2>(double delta, std::uint64_t seed) {
    const double tau = 2.0 * std::numbers::pi;
    const std::size_t m = std::max<std::size_t>(512, static_cast<std::size_t>(std::ceil(tau / delta)) * 4);
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    std::vector<Vec<2>> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double phi = tau * (static_cast<double>(i) + 0.5 + jitter(rng)) / static_cast<double>(m);
        out.push_back(Vec<2>{{std::cos(phi), std::sin(phi)}});
    }
    return out;
}

/// n=3: Halton(2,3) mapped area-preservingly onto S^2.
template <>
inline std::vector<Vec<3>> candidate_stream<3>(double delta, std::uint64_t seed) {
    const std::size_t m =
        std::max<std::size_t>(4096, static_cast<std::size_t>(std::ceil(64.0 / (delta * delta))));
    const std::uint64_t offset = splitmix64(seed) % 8192;
    std::vector<Vec<3>> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::uint64_t idx = offset + 1 + i;
        const double z = 1.0 - 2.0 * radical_inverse(idx, 2);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = 2.0 * std::numbers::pi * radical_inverse(idx, 3);
        out.push_back(Vec<3>{{r * std::cos(phi), r * std::sin(phi), z}});
    }
    return out;
}

/// n=4: Halton(2,3,5) through the area-preserving chart of S^3
/// (psi has density sin^2, inverted by Newton; theta/phi as on S^2).
template <>
inline std::vector<Vec<4>> candidate_stream<4>(double delta, std::uint64_t seed) {
    const std::size_t m = std::max<std::size_t>(
        8192, static_cast<std::size_t>(std::ceil(128.0 / (delta * delta * delta))));
    const std::uint64_t offset = splitmix64(seed) % 8192;
    std::vector<Vec<4>> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::uint64_t idx = offset + 1 + i;
        const double u = radical_inverse(idx, 2);
        // solve (2 psi - sin 2 psi) / (2 pi) = u
        double psi = std::numbers::pi * u + 0.5;
        for (int it = 0; it < 40; ++it) {
            const double f = (2.0 * psi - std::sin(2.0 * psi)) / (2.0 * std::numbers::pi) - u;
            const double df = (2.0 - 2.0 * std::cos(2.0 * psi)) / (2.0 * std::numbers::pi);
            if (df < 1e-14) break;
            const double step = f / df;
            psi -= step;
            psi = std::clamp(psi, 0.0, std::numbers::pi);
            if (std::abs(step) < 1e-14) break;
        }
        const double ct = 1.0 - 2.0 * radical_inverse(idx, 3);
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        const double phi = 2.0 * std::numbers::pi * radical_inverse(idx, 5);
        const double sp = std::sin(psi);
        out.push_back(Vec<4>{{sp * st * std::cos(phi), sp * st * std::sin(phi), sp * ct, std::cos(psi)}});
    }
    return out;
}

}  // namespace detail

/// A family of directions with pairwise Euclidean distance > separation.
template <int N>
struct SphericalNet {
    std::vector<Direction<N>> dirs;
    double separation = 0.0;
    bool maximal = false;
    double packing_constant = 0.0;  // |dirs| * separation^{n-1}, recorded by the generator
    std::uint64_t seed = 0;

    std::size_t size() const { return dirs.size(); }

    bool separation_holds() const {
        for (std::size_t i = 0; i < dirs.size(); ++i)
            for (std::size_t j = i + 1; j < dirs.size(); ++j)
                if (chord_distance(dirs[i], dirs[j]) <= separation) return false;
        return true;
    }
};

/// Greedy maximal delta-separated net over a seeded quasi-uniform candidate
/// stream. The 2N signed axis directions are fed first so that nets exist for
/// any delta < 2; identical seeds produce identical nets.
template <int N>
SphericalNet<N> greedy_net(double delta, std::uint64_t seed) {
    static_assert(N >= 2 && N <= 4, "nets are provided for n = 2, 3, 4");
    if (!(delta > 0.0)) throw std::domain_error("net separation must be positive");
    if (delta >= 2.0) throw std::domain_error("no two unit vectors are more than 2 apart");

    std::vector<Vec<N>> candidates;
    for (int i = 0; i < N; ++i) {
        Vec<N> plus{}, minus{};
        plus[i] = 1.0;
        minus[i] = -1.0;
        candidates.push_back(plus);
        candidates.push_back(minus);
    }
    const auto stream = detail::candidate_stream<N>(delta, seed);
    candidates.insert(candidates.end(), stream.begin(), stream.end());

    detail::DirectionHash<N> accepted(delta);
    SphericalNet<N> net;
    net.separation = delta;
    net.seed = seed;
    for (const auto& c : candidates) {
        if (!accepted.any_within(c, delta)) {
            accepted.insert(c);
            net.dirs.push_back(Direction<N>(c));
        }
    }
    net.maximal = true;
    net.packing_constant = static_cast<double>(net.dirs.size()) * std::pow(delta, N - 1);
    return net;
}

/// Keeps one representative per antipodal pair (tubes are sign-invariant).
template <int N>
std::vector<Direction<N>> fold_to_hemisphere(const std::vector<Direction<N>>& dirs) {
    std::vector<Direction<N>> out;
    for (const auto& d : dirs) {
        bool keep = false;
        for (int i = 0; i < N; ++i) {
            if (d.v[i] > 0) { keep = true; break; }
            if (d.v[i] < 0) break;
        }
        if (!keep) continue;
        bool dup = false;
        for (const auto& o : out)
            if (folded_chord_distance(d, o) < 1e-12) { dup = true; break; }
        if (!dup) out.push_back(d);
    }
    return out;
}

// ---------------------------------------------------------------------------
// tube intersection statistics

template <int N>
std::array<Vec<N>, N - 1> orthonormal_complement(const Direction<N>& d) {
    std::array<Vec<N>, N> basis;
    basis[0] = d.v;
    // seed with the axes least aligned with d, then Gram-Schmidt
    std::array<int, N> order{};
    for (int i = 0; i < N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(d.v[a]) < std::abs(d.v[b]); });
    int filled = 1;
    for (int k = 0; k < N && filled < N; ++k) {
        Vec<N> v{};
        v[order[k]] = 1.0;
        for (int j = 0; j < filled; ++j) v = v - dot(v, basis[j]) * basis[j];
        const double r = norm(v);
        if (r > 1e-9) {
            basis[filled] = (1.0 / r) * v;
            ++filled;
        }
    }
    std::array<Vec<N>, N - 1> out;
    for (int i = 0; i < N - 1; ++i) out[i] = basis[i + 1];
    return out;
}

struct IntersectionStats {
    double measure = 0.0;
    double stderr_measure = 0.0;
    double diameter = 0.0;
    double theta = 0.0;
    long hits = 0;
};

/// Monte Carlo measure and diameter of T1 ∩ T2, sampling uniformly in the
/// cylinder enclosing T1 (whose volume is known in closed form).
template <int N>
IntersectionStats intersection_stats(const Tube<N>& t1, const Tube<N>& t2, long samples,
                                     std::uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("need at least 1000 samples");
    if (std::abs(t1.radius - t2.radius) > 1e-15)
        throw std::invalid_argument("tubes must share the same radius");

    IntersectionStats out;
    out.theta = acute_angle(t1.dir, t2.dir);

    const double delta = t1.radius;
    const double len = 1.0 + 2.0 * delta;
    const double cyl_volume = len * unit_ball_volume(N - 1) * std::pow(delta, N - 1);
    const auto frame = orthonormal_complement(t1.dir);

    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    std::vector<Vec<N>> hits;
    long hit_count = 0;
    for (long i = 0; i < samples; ++i) {
        const double t = len * (uni(rng) - 0.5);
        Vec<N> x = t1.mid + t * t1.dir.v;
        if constexpr (N == 2) {
            x += (delta * (2.0 * uni(rng) - 1.0)) * frame[0];
        } else if constexpr (N == 3) {
            const double r = delta * std::sqrt(uni(rng));
            const double phi = 2.0 * std::numbers::pi * uni(rng);
            x += (r * std::cos(phi)) * frame[0] + (r * std::sin(phi)) * frame[1];
        } else {
            const double r = delta * std::cbrt(uni(rng));
            const double z = 2.0 * uni(rng) - 1.0;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = 2.0 * std::numbers::pi * uni(rng);
            x += (r * rho * std::cos(phi)) * frame[0] + (r * rho * std::sin(phi)) * frame[1] +
                 (r * z) * frame[2];
        }
        if (!t1.contains(x) || !t2.contains(x)) continue;
        ++hit_count;
        if (hits.size() < 4096) hits.push_back(x);
    }
    const double phat = static_cast<double>(hit_count) / static_cast<double>(samples);
    out.hits = hit_count;
    out.measure = cyl_volume * phat;
    out.stderr_measure =
        cyl_volume * std::sqrt(std::max(0.0, phat * (1.0 - phat) / static_cast<double>(samples)));
    for (std::size_t i = 0; i < hits.size(); ++i)
        for (std::size_t j = i + 1; j < hits.size(); ++j)
            out.diameter = std::max(out.diameter, dist(hits[i], hits[j]));
    return out;
}

// ---------------------------------------------------------------------------
// exact planar core intersection (caps ignored; used as an oracle)

namespace detail {

inline std::vector<Vec<2>> clip_halfplane(const std::vector<Vec<2>>& poly, const Vec<2>& p,
                                          const Vec<2>& normal_in) {
    std::vector<Vec<2>> out;
    const auto inside = [&](const Vec<2>& q) { return dot(q - p, normal_in) >= 0.0; };
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec<2>& a = poly[i];
        const Vec<2>& b = poly[(i + 1) % n];
        const bool ia = inside(a), ib = inside(b);
        if (ia) out.push_back(a);
        if (ia != ib) {
            const double da = dot(a - p, normal_in);
            const double db = dot(b - p, normal_in);
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

inline double polygon_area(const std::vector<Vec<2>>& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec<2>& a = poly[i];
        const Vec<2>& b = poly[(i + 1) % n];
        s += a[0] * b[1] - b[0] * a[1];
    }
    return 0.5 * std::abs(s);
}

}  // namespace detail

/// Area of the intersection of the two rectangular tube cores (length-1
/// rectangles of width 2*delta). End caps are not modelled, so this is exact
/// only when the true intersection stays away from the segment endpoints.
inline double rect_intersection_area(const Tube<2>& t1, const Tube<2>& t2) {
    const auto corners = [](const Tube<2>& t) {
        const Vec<2> u = t.dir.v;
        const Vec<2> n{{-u[1], u[0]}};
        std::vector<Vec<2>> c;
        c.push_back(t.mid + 0.5 * u + t.radius * n);
        c.push_back(t.mid + 0.5 * u - t.radius * n);
        c.push_back(t.mid - 0.5 * u - t.radius * n);
        c.push_back(t.mid - 0.5 * u + t.radius * n);
        return c;
    };
    std::vector<Vec<2>> poly = corners(t1);
    const Vec<2> u = t2.dir.v;
    const Vec<2> nrm{{-u[1], u[0]}};
    poly = detail::clip_halfplane(poly, t2.mid + 0.5 * u, -1.0 * u);
    poly = detail::clip_halfplane(poly, t2.mid - 0.5 * u, u);
    poly = detail::clip_halfplane(poly, t2.mid + t2.radius * nrm, -1.0 * nrm);
    poly = detail::clip_halfplane(poly, t2.mid - t2.radius * nrm, nrm);
    if (poly.size() < 3) return 0.0;
    return detail::polygon_area(poly);
}

// ---------------------------------------------------------------------------
// parallelogram slabs

/// Delta-neighbourhood of the parallelogram spanned by the unit segments
/// I_dir(x1) and I_dir(x2).
template <int N>
struct ParallelogramSlab {
    Direction<N> dir;
    Vec<N> x1, x2;
    double radius = 0.0;
};

template <int N>
double distance_to_parallelogram(const ParallelogramSlab<N>& s, const Vec<N>& x) {
    const Vec<N> w = s.x2 - s.x1;
    const Vec<N> e = s.dir.v;
    const Vec<N> r = x - s.x1;

    const auto point_at = [&](double u, double t) { return s.x1 + u * w + t * e; };
    double best = std::numeric_limits<double>::infinity();

    // interior critical point of the quadratic, if the 2x2 system is regular
    const double ww = dot(w, w), we = dot(w, e);
    const double det = ww * 1.0 - we * we;
    if (det > 1e-14 * std::max(1.0, ww)) {
        const double bw = dot(w, r), be = dot(e, r);
        const double u = (bw - we * be) / det;
        const double t = be - we * u;
        if (u >= 0.0 && u <= 1.0 && t >= -0.5 && t <= 0.5)
            best = std::min(best, dist(x, point_at(u, t)));
    }

    // the four edges (u or t clamped); each is a point-to-segment distance
    const auto edge = [&](Vec<N> a, Vec<N> b) {
        const Vec<N> d = b - a;
        const double dd = dot(d, d);
        double t = dd > 0 ? std::clamp(dot(x - a, d) / dd, 0.0, 1.0) : 0.0;
        best = std::min(best, dist(x, a + t * d));
    };
    edge(point_at(0.0, -0.5), point_at(0.0, 0.5));
    edge(point_at(1.0, -0.5), point_at(1.0, 0.5));
    edge(point_at(0.0, -0.5), point_at(1.0, -0.5));
    edge(point_at(0.0, 0.5), point_at(1.0, 0.5));
    return best;
}

template <int N>
bool slab_membership(const ParallelogramSlab<N>& s, const Vec<N>& x) {
    return distance_to_parallelogram(s, x) <= s.radius;
}

}  // namespace kakeya::geom
