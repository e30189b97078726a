#pragma once

#include "kakeya/geometry.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace kakeya::geom {

/// Shared cell geometry for occupancy bitmaps and overlap-count fields.
/// Cell i covers [lo + i h, lo + (i+1) h); the sample point is the center.
template <int N>
struct GridSpec {
    Vec<N> lo;
    double h = 0.0;
    std::array<std::int64_t, N> dims{};

    static GridSpec from_box(const AABB<N>& box, double h) {
        if (!(h > 0)) throw std::invalid_argument("cell size must be positive");
        GridSpec g;
        g.lo = box.lo;
        g.h = h;
        std::int64_t total = 1;
        for (int i = 0; i < N; ++i) {
            const double extent = box.hi[i] - box.lo[i];
            if (!(extent > 0)) throw std::invalid_argument("degenerate bounding box");
            g.dims[i] = static_cast<std::int64_t>(std::ceil(extent / h - 1e-12));
            total *= g.dims[i];
        }
        if (total > (std::int64_t(1) << 33))
            throw std::invalid_argument("grid would exceed 2^33 cells; coarsen h or shrink the box");
        return g;
    }

    std::int64_t cell_count() const {
        std::int64_t n = 1;
        for (int i = 0; i < N; ++i) n *= dims[i];
        return n;
    }

    std::int64_t linear(const std::array<std::int64_t, N>& idx) const {
        std::int64_t k = 0;
        for (int i = 0; i < N; ++i) k = k * dims[i] + idx[i];
        return k;
    }

    Vec<N> center(const std::array<std::int64_t, N>& idx) const {
        Vec<N> c;
        for (int i = 0; i < N; ++i) c[i] = lo[i] + (static_cast<double>(idx[i]) + 0.5) * h;
        return c;
    }

    AABB<N> box() const {
        AABB<N> b;
        b.lo = lo;
        for (int i = 0; i < N; ++i) b.hi[i] = lo[i] + static_cast<double>(dims[i]) * h;
        return b;
    }

    double cell_volume() const { return std::pow(h, N); }

    bool same_geometry(const GridSpec& o) const {
        return lo == o.lo && h == o.h && dims == o.dims;
    }
};

/// Visits every grid cell whose center lies inside the tube, restricted to
/// the tube's bounding box clipped to the grid. Returns false if the tube
/// had to be clipped.
template <int N, class F>
bool for_each_cell_in_tube(const GridSpec<N>& g, const Tube<N>& t, F&& fn) {
    const AABB<N> tb = t.aabb();
    std::array<std::int64_t, N> lo{}, hi{};
    bool clipped = false;
    for (int i = 0; i < N; ++i) {
        double l = (tb.lo[i] - g.lo[i]) / g.h;
        double u = (tb.hi[i] - g.lo[i]) / g.h;
        if (l < 0.0 || u > static_cast<double>(g.dims[i])) clipped = true;
        lo[i] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(l)));
        hi[i] = std::min<std::int64_t>(g.dims[i] - 1, static_cast<std::int64_t>(std::floor(u)));
        if (lo[i] > hi[i]) return !clipped;
    }

    std::array<std::int64_t, N> idx = lo;
    while (true) {
        const Vec<N> c = g.center(idx);
        if (t.contains(c)) fn(idx, c);
        int axis = N - 1;
        while (axis >= 0) {
            if (++idx[axis] <= hi[axis]) break;
            idx[axis] = lo[axis];
            --axis;
        }
        if (axis < 0) break;
    }
    return !clipped;
}

/// Occupancy bitmap over a grid; the discrete carrier for set measures and
/// covering-number queries.
template <int N>
class VoxelSet {
  public:
    VoxelSet() = default;
    VoxelSet(const AABB<N>& box, double h)
        : grid_(GridSpec<N>::from_box(box, h)),
          words_(static_cast<std::size_t>((grid_.cell_count() + 63) / 64), 0ull) {}
    explicit VoxelSet(const GridSpec<N>& g)
        : grid_(g), words_(static_cast<std::size_t>((g.cell_count() + 63) / 64), 0ull) {}

    const GridSpec<N>& grid() const { return grid_; }
    double h() const { return grid_.h; }
    int clip_warnings() const { return clip_warnings_; }

    bool test(std::int64_t k) const {
        return (words_[static_cast<std::size_t>(k >> 6)] >> (k & 63)) & 1ull;
    }
    void set(std::int64_t k) { words_[static_cast<std::size_t>(k >> 6)] |= (1ull << (k & 63)); }
    void clear(std::int64_t k) { words_[static_cast<std::size_t>(k >> 6)] &= ~(1ull << (k & 63)); }

    bool test(const std::array<std::int64_t, N>& idx) const { return test(grid_.linear(idx)); }
    void set(const std::array<std::int64_t, N>& idx) { set(grid_.linear(idx)); }

    std::int64_t occupied_count() const {
        std::int64_t n = 0;
        for (std::uint64_t w : words_) n += std::popcount(w);
        return n;
    }
    double measure() const { return static_cast<double>(occupied_count()) * grid_.cell_volume(); }
    bool empty() const {
        for (std::uint64_t w : words_)
            if (w) return false;
        return true;
    }

    /// Union merge; exactly order-independent (bitwise OR).
    void or_with(const VoxelSet& o) {
        require_same_grid(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    }
    void and_not(const VoxelSet& o) {
        require_same_grid(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    }
    std::int64_t and_count(const VoxelSet& o) const {
        require_same_grid(o);
        std::int64_t n = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) n += std::popcount(words_[i] & o.words_[i]);
        return n;
    }
    bool superset_of(const VoxelSet& o) const {
        require_same_grid(o);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (o.words_[i] & ~words_[i]) return false;
        return true;
    }
    bool operator==(const VoxelSet& o) const {
        return grid_.same_geometry(o.grid_) && words_ == o.words_;
    }

    template <class F>
    void for_each_occupied(F&& fn) const {
        std::array<std::int64_t, N> idx{};
        const std::int64_t total = grid_.cell_count();
        for (std::int64_t k = 0; k < total; ++k) {
            if (test(k)) fn(idx, grid_.center(idx));
            int axis = N - 1;
            while (axis >= 0) {
                if (++idx[axis] < grid_.dims[axis]) break;
                idx[axis] = 0;
                --axis;
            }
        }
    }

    void fill_all() {
        for (auto& w : words_) w = ~0ull;
        const std::int64_t total = grid_.cell_count();
        const int tail = static_cast<int>(total & 63);
        if (tail) words_.back() = (1ull << tail) - 1ull;
    }

    void fill_ball(const Vec<N>& center, double r) {
        std::array<std::int64_t, N> lo{}, hi{};
        for (int i = 0; i < N; ++i) {
            lo[i] = std::max<std::int64_t>(
                0, static_cast<std::int64_t>(std::floor((center[i] - r - grid_.lo[i]) / grid_.h)));
            hi[i] = std::min<std::int64_t>(
                grid_.dims[i] - 1,
                static_cast<std::int64_t>(std::floor((center[i] + r - grid_.lo[i]) / grid_.h)));
            if (lo[i] > hi[i]) return;
        }
        std::array<std::int64_t, N> idx = lo;
        while (true) {
            if (dist(grid_.center(idx), center) <= r) set(grid_.linear(idx));
            int axis = N - 1;
            while (axis >= 0) {
                if (++idx[axis] <= hi[axis]) break;
                idx[axis] = lo[axis];
                --axis;
            }
            if (axis < 0) break;
        }
    }

    /// Number of occupied coarse cells of side `scale`, anchored at the grid
    /// origin. Standard two-sided surrogate for the covering number.
    std::int64_t covering_count(double scale) const {
        std::unordered_set<std::uint64_t> seen;
        for_each_occupied([&](const std::array<std::int64_t, N>&, const Vec<N>& c) {
            std::uint64_t key = 0;
            for (int i = 0; i < N; ++i) {
                const auto q = static_cast<std::int64_t>(std::floor((c[i] - grid_.lo[i]) / scale));
                key = key * 0x200000ull + static_cast<std::uint64_t>(q & 0x1fffff);
            }
            seen.insert(key);
        });
        return static_cast<std::int64_t>(seen.size());
    }

    void note_clip() { ++clip_warnings_; }

    const std::vector<std::uint64_t>& words() const { return words_; }

  private:
    void require_same_grid(const VoxelSet& o) const {
        if (!grid_.same_geometry(o.grid_))
            throw std::invalid_argument("voxel sets live on different grids");
    }

    GridSpec<N> grid_;
    std::vector<std::uint64_t> words_;
    int clip_warnings_ = 0;
};

/// Marks exactly the cells whose centers lie in the tube. Requires
/// h <= radius/2; a tube leaving the box is clipped and counted as a warning.
template <int N>
std::int64_t rasterize_tube(const Tube<N>& t, VoxelSet<N>& g) {
    if (g.h() > 0.5 * t.radius + 1e-15)
        throw std::invalid_argument("cell size must satisfy h <= radius/2");
    std::int64_t marked = 0;
    const bool inside = for_each_cell_in_tube(
        g.grid(), t, [&](const std::array<std::int64_t, N>& idx, const Vec<N>&) {
            g.set(g.grid().linear(idx));
            ++marked;
        });
    if (!inside) g.note_clip();
    return marked;
}

/// Voxel measure of E ∩ T.
template <int N>
double measure_tube_intersection(const VoxelSet<N>& e, const Tube<N>& t) {
    std::int64_t count = 0;
    for_each_cell_in_tube(e.grid(), t, [&](const std::array<std::int64_t, N>& idx, const Vec<N>&) {
        if (e.test(e.grid().linear(idx))) ++count;
    });
    return static_cast<double>(count) * e.grid().cell_volume();
}

/// Integer overlap-count field for sums of tube indicators.
template <int N>
class CountGrid {
  public:
    explicit CountGrid(const GridSpec<N>& g)
        : grid_(g), counts_(static_cast<std::size_t>(g.cell_count()), 0u) {}

    const GridSpec<N>& grid() const { return grid_; }

    void add_tube(const Tube<N>& t) {
        for_each_cell_in_tube(grid_, t, [&](const std::array<std::int64_t, N>& idx, const Vec<N>&) {
            ++counts_[static_cast<std::size_t>(grid_.linear(idx))];
        });
    }

    /// L^p norm of the count field under cell quadrature.
    double lp_norm(double p) const {
        double acc = 0.0;
        for (std::uint32_t c : counts_)
            if (c) acc += std::pow(static_cast<double>(c), p);
        return std::pow(acc * grid_.cell_volume(), 1.0 / p);
    }

    double sum_measure() const {
        double acc = 0.0;
        for (std::uint32_t c : counts_) acc += c;
        return acc * grid_.cell_volume();
    }

    std::uint32_t max_count() const {
        std::uint32_t m = 0;
        for (std::uint32_t c : counts_) m = std::max(m, c);
        return m;
    }

  private:
    GridSpec<N> grid_;
    std::vector<std::uint32_t> counts_;
};

// ---------------------------------------------------------------------------
// run-length-encoded occupancy export (bit-exact round trip)

template <int N>
void write_voxelset(std::ostream& os, const VoxelSet<N>& v) {
    const auto& g = v.grid();
    os << "KAKEYA-VOXELSET 1\n";
    os << "n " << N << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", g.h);
    os << "h " << buf << "\n";
    os << "lo";
    for (int i = 0; i < N; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", g.lo[i]);
        os << " " << buf;
    }
    os << "\n";
    os << "dims";
    for (int i = 0; i < N; ++i) os << " " << g.dims[i];
    os << "\n";
    os << "clipped " << v.clip_warnings() << "\n";

    // runs of equal bits over the linearized index, last axis fastest
    std::vector<std::pair<int, std::int64_t>> runs;
    const std::int64_t total = g.cell_count();
    int bit = total > 0 ? (v.test(std::int64_t(0)) ? 1 : 0) : 0;
    std::int64_t len = 0;
    for (std::int64_t k = 0; k < total; ++k) {
        const int b = v.test(k) ? 1 : 0;
        if (b == bit) {
            ++len;
        } else {
            runs.emplace_back(bit, len);
            bit = b;
            len = 1;
        }
    }
    if (len > 0) runs.emplace_back(bit, len);
    os << "runs " << runs.size() << "\n";
    for (const auto& [b, l] : runs) os << b << " " << l << "\n";
    os << "END\n";
}

template <int N>
VoxelSet<N> read_voxelset(std::istream& is) {
    std::string tag;
    int version = 0;
    is >> tag >> version;
    if (tag != "KAKEYA-VOXELSET" || version != 1)
        throw std::runtime_error("not a voxel set stream");
    int n = 0;
    is >> tag >> n;
    if (tag != "n" || n != N) throw std::runtime_error("voxel set dimension mismatch");
    GridSpec<N> g;
    is >> tag >> g.h;
    is >> tag;
    for (int i = 0; i < N; ++i) is >> g.lo[i];
    is >> tag;
    for (int i = 0; i < N; ++i) is >> g.dims[i];
    int clipped = 0;
    is >> tag >> clipped;
    std::size_t run_count = 0;
    is >> tag >> run_count;
    VoxelSet<N> v(g);
    std::int64_t k = 0;
    for (std::size_t r = 0; r < run_count; ++r) {
        int bit = 0;
        std::int64_t len = 0;
        is >> bit >> len;
        if (bit)
            for (std::int64_t i = 0; i < len; ++i) v.set(k + i);
        k += len;
    }
    is >> tag;
    if (tag != "END" || k != g.cell_count()) throw std::runtime_error("corrupt voxel set stream");
    return v;
}

// ---------------------------------------------------------------------------
// annulus decomposition of a bush around its anchor

/// Voxel measures of the recentred bush in the dyadic shells
/// [2^k delta, 2^{k+1} delta), k = 0 .. ceil(log2(1/delta)).
template <int N>
std::vector<std::pair<int, double>> annulus_slices(const std::vector<Tube<N>>& bush_tubes,
                                                   const Vec<N>& x0, double delta) {
    if (bush_tubes.empty()) throw std::invalid_argument("empty bush");
    for (const auto& t : bush_tubes)
        if (!t.contains(x0))
            throw std::invalid_argument("every bush tube must contain the anchor point");

    AABB<N> box = bush_tubes.front().aabb();
    for (const auto& t : bush_tubes) {
        const AABB<N> b = t.aabb();
        for (int i = 0; i < N; ++i) {
            box.lo[i] = std::min(box.lo[i], b.lo[i] - delta);
            box.hi[i] = std::max(box.hi[i], b.hi[i] + delta);
        }
    }
    VoxelSet<N> v(box, delta / 4.0);
    for (const auto& t : bush_tubes) rasterize_tube(t, v);

    const int kmax = static_cast<int>(std::ceil(std::log2(1.0 / delta)));
    std::vector<double> shell(static_cast<std::size_t>(kmax) + 1, 0.0);
    const double cell = v.grid().cell_volume();
    v.for_each_occupied([&](const std::array<std::int64_t, N>&, const Vec<N>& c) {
        const double rho = dist(c, x0);
        if (rho < delta) return;  // core ball, not part of any shell
        const int k = static_cast<int>(std::floor(std::log2(rho / delta)));
        if (k >= 0 && k <= kmax) shell[static_cast<std::size_t>(k)] += cell;
    });
    std::vector<std::pair<int, double>> out;
    for (int k = 0; k <= kmax; ++k) out.emplace_back(k, shell[static_cast<std::size_t>(k)]);
    return out;
}

}  // namespace kakeya::geom
