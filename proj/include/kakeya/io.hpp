#pragma once

#include "kakeya/bounds.hpp"
#include "kakeya/bush.hpp"
#include "kakeya/fractals.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kakeya::io {

/// Shortest-exact double formatting: %.17g round-trips bit-for-bit.
inline std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
}

// ---------------------------------------------------------------------------
// nets and point sets: CSV of coordinates, 17 significant digits

template <int N>
std::string net_csv(const geom::SphericalNet<N>& net) {
    std::ostringstream os;
    for (int i = 0; i < N; ++i) os << (i ? "," : "") << "x" << (i + 1);
    os << "\n";
    for (const auto& d : net.dirs) {
        for (int i = 0; i < N; ++i) os << (i ? "," : "") << g17(d.v[i]);
        os << "\n";
    }
    return os.str();
}

template <int N>
geom::SphericalNet<N> read_net_csv(std::istream& is, double separation) {
    geom::SphericalNet<N> net;
    net.separation = separation;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty net file");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        Vec<N> v;
        std::stringstream ss(line);
        std::string tok;
        for (int i = 0; i < N; ++i) {
            if (!std::getline(ss, tok, ',')) throw std::runtime_error("short net row");
            v[i] = std::stod(tok);
        }
        net.dirs.push_back(geom::Direction<N>(v));
    }
    return net;
}

template <int N>
std::string points_csv(const std::vector<Vec<N>>& pts) {
    std::ostringstream os;
    for (int i = 0; i < N; ++i) os << (i ? "," : "") << "x" << (i + 1);
    os << "\n";
    for (const auto& p : pts) {
        for (int i = 0; i < N; ++i) os << (i ? "," : "") << g17(p[i]);
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// bounds module exports

/// Curve CSV `s,bound,piece_index`; rationals print as exact decimals when
/// terminating, otherwise num/den.
inline std::string curve_csv(const bounds::PiecewiseBound& curve, const Rat& step) {
    std::ostringstream os;
    os << "s,bound,piece_index\n";
    for (Rat s(0); s <= Rat(curve.n); s += step) {
        os << to_exact_string(s) << "," << to_exact_string(curve.evaluate(s)) << ","
           << curve.piece_index(s) << "\n";
    }
    return os.str();
}

/// Component curves `s,trivial,transfer` so both figure lines re-plot.
inline std::string curve_components_csv(int n, const bounds::BaseEstimateLibrary& lib,
                                        const Rat& step) {
    const Rat pmax = lib.base_for(n).p;
    std::ostringstream os;
    os << "s,trivial,transfer\n";
    for (Rat s(0); s <= Rat(n); s += step) {
        const Rat trivial = Rat(n) - s;
        const Rat transfer = Rat(n) - (Rat(n - 1) - s) / pmax - (s - 1);
        os << to_exact_string(s) << "," << to_exact_string(trivial) << ","
           << to_exact_string(transfer) << "\n";
    }
    return os.str();
}

inline std::string catalog_csv(const bounds::BaseEstimateLibrary& lib) {
    std::ostringstream os;
    os << "name,dim,p,q,h\n";
    for (const auto& e : lib.catalog) {
        os << e.source << "," << e.ambient_dim << "," << to_exact_string_as_fraction(e.p) << ","
           << to_exact_string_as_fraction(e.q) << "," << to_exact_string_as_fraction(e.h) << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// maximal / bush / fractal exports

template <int N>
std::string profile_csv(const maximal::MaximalProfile<N>& prof) {
    std::ostringstream os;
    for (int i = 0; i < N; ++i) os << "e" << (i + 1) << ",";
    os << "value\n";
    for (std::size_t k = 0; k < prof.values.size(); ++k) {
        for (int i = 0; i < N; ++i) os << g17(prof.net.dirs[k].v[i]) << ",";
        os << g17(prof.values[k]) << "\n";
    }
    return os.str();
}

struct WeakNormRow {
    double delta = 0.0;
    double norm = 0.0;
    double lambda_star = 0.0;
};

inline std::string weak_norm_csv(const std::vector<WeakNormRow>& rows) {
    std::ostringstream os;
    os << "delta,norm,lambda_star\n";
    for (const auto& r : rows)
        os << g17(r.delta) << "," << g17(r.norm) << "," << g17(r.lambda_star) << "\n";
    return os.str();
}

template <int N>
std::string decomposition_csv(const bush::BushDecomposition<N>& d) {
    std::ostringstream os;
    os << "step,level_measure,bush_size,bush_measure,density_ratio\n";
    for (const auto& s : d.steps) {
        os << s.step << "," << g17(s.level_measure) << "," << s.bush_size << ","
           << g17(s.bush_measure) << "," << g17(s.density_ratio) << "\n";
    }
    return os.str();
}

template <int N>
std::string bushes_csv(const bush::BushDecomposition<N>& d) {
    std::ostringstream os;
    os << "bush";
    for (int i = 0; i < N; ++i) os << ",e" << (i + 1);
    for (int i = 0; i < N; ++i) os << ",a" << (i + 1);
    os << ",radius\n";
    for (std::size_t b = 0; b < d.bushes.size(); ++b) {
        for (const auto& t : d.bushes[b].tubes) {
            os << b;
            for (int i = 0; i < N; ++i) os << "," << g17(t.dir.v[i]);
            for (int i = 0; i < N; ++i) os << "," << g17(t.mid[i]);
            os << "," << g17(t.radius) << "\n";
        }
    }
    return os.str();
}

/// `delta,count` rows plus a trailing one-line fit summary comment.
inline std::string dimension_fit_csv(const fractal::DimensionFit& fit) {
    std::ostringstream os;
    os << "delta,count\n";
    for (std::size_t i = 0; i < fit.scales.size(); ++i)
        os << g17(fit.scales[i]) << "," << fit.counts[i] << "\n";
    os << "# slope=" << g17(fit.slope) << " r2=" << g17(fit.r2) << "\n";
    return os.str();
}

}  // namespace kakeya::io
