#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace kakeya {

/// Fixed-dimension point/vector in R^N. Plain value type, double coordinates.
template <int N>
struct Vec {
    std::array<double, N> c{};

    static constexpr int dim = N;

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    friend Vec operator+(Vec a, const Vec& b) {
        for (int i = 0; i < N; ++i) a.c[i] += b.c[i];
        return a;
    }
    friend Vec operator-(Vec a, const Vec& b) {
        for (int i = 0; i < N; ++i) a.c[i] -= b.c[i];
        return a;
    }
    friend Vec operator*(double t, Vec a) {
        for (int i = 0; i < N; ++i) a.c[i] *= t;
        return a;
    }
    friend Vec operator*(Vec a, double t) { return t * a; }
    Vec operator-() const {
        Vec r = *this;
        for (int i = 0; i < N; ++i) r.c[i] = -r.c[i];
        return r;
    }
    Vec& operator+=(const Vec& b) {
        for (int i = 0; i < N; ++i) c[i] += b.c[i];
        return *this;
    }

    bool operator==(const Vec&) const = default;
};

template <int N>
double dot(const Vec<N>& a, const Vec<N>& b) {
    double s = 0;
    for (int i = 0; i < N; ++i) s += a.c[i] * b.c[i];
    return s;
}

template <int N>
double norm2(const Vec<N>& a) { return dot(a, a); }

template <int N>
double norm(const Vec<N>& a) { return std::sqrt(norm2(a)); }

template <int N>
double dist(const Vec<N>& a, const Vec<N>& b) { return norm(a - b); }

/// Lexicographic strict order; used for deterministic tie-breaking only.
template <int N>
bool lex_less(const Vec<N>& a, const Vec<N>& b) {
    for (int i = 0; i < N; ++i) {
        if (a.c[i] < b.c[i]) return true;
        if (a.c[i] > b.c[i]) return false;
    }
    return false;
}

}  // namespace kakeya
