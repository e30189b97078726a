#pragma once

#include "kakeya/rational.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace kakeya::bounds {

enum class EstimateFlavor { strong, weak, restricted_weak };

inline const char* flavor_name(EstimateFlavor f) {
    switch (f) {
        case EstimateFlavor::strong: return "strong";
        case EstimateFlavor::weak: return "weak";
        case EstimateFlavor::restricted_weak: return "restricted-weak";
    }
    return "?";
}

/// An exponent triple asserting a Kakeya maximal inequality in a given
/// ambient dimension:
///   ||(f)*_delta||_{L^q(sphere)} <~ delta^{-h} ||f||_{L^p}
/// For flavor restricted_weak the pair is (p, beta) with beta stored in h,
/// i.e. a weak-type L^{p,inf} bound for the restricted maximal operator.
/// All eps-losses are dropped (eps -> 0) and remembered via epsilon_loss.
struct MaximalEstimate {
    int ambient_dim = 2;
    Rat p{1};
    Rat q{1};
    Rat h{0};
    EstimateFlavor flavor = EstimateFlavor::strong;
    bool epsilon_loss = true;
    std::string source;
};

/// Necessary condition for an unrestricted estimate in ambient dimension m:
/// m <= (1 + h) p, exact arithmetic, eps -> 0 limit.
inline bool validate_necessary_condition(const MaximalEstimate& est) {
    return Rat(est.ambient_dim) <= (Rat(1) + est.h) * est.p;
}

inline void check_estimate(const MaximalEstimate& est) {
    if (est.ambient_dim < 2) throw std::domain_error("ambient dimension must be >= 2");
    if (est.flavor != EstimateFlavor::restricted_weak) {
        if (est.p < 1 || est.p > est.q) throw std::domain_error("need 1 <= p <= q");
    }
    if (est.h < 0) throw std::domain_error("delta-power loss must be >= 0");
}

/// p' = p/(p-1); exact involution.
inline Rat dual_exponent(const Rat& p) {
    if (p <= 1) throw std::domain_error("dual exponent needs p > 1");
    return p / (p - 1);
}

/// Hickman-Rogers-Zhang exponent for ambient dimension m:
///   w(m) = 1 + min_{2<=t<=m} max( 2m / ((m-1)m + (t-1)t), 1/(m+1-t) ).
inline Rat w_exponent(int m) {
    if (m < 2) throw std::domain_error("w_exponent needs m >= 2");
    const Rat mm(m);
    Rat best;
    bool have = false;
    for (int t = 2; t <= m; ++t) {
        const Rat first = Rat(2 * m) / Rat((m - 1) * m + (t - 1) * t);
        const Rat second = Rat(1, m + 1 - t);
        const Rat inner = std::max(first, second);
        if (!have || inner < best) {
            best = inner;
            have = true;
        }
    }
    return Rat(1) + best;
}

/// Catalog of base estimates usable as the (n-1)-dimensional input of the
/// restricted transfer. Every entry satisfies h = m/p - 1 (so the necessary
/// condition holds with equality) and p = q.
struct BaseEstimateLibrary {
    std::vector<MaximalEstimate> catalog;

    static MaximalEstimate cordoba() {
        return {2, Rat(2), Rat(2), Rat(0), EstimateFlavor::strong, true, "Cordoba n=2"};
    }
    static MaximalEstimate wolff() {
        return {3, Rat(5, 2), Rat(5, 2), Rat(1, 5), EstimateFlavor::strong, true, "Wolff n=3"};
    }
    static MaximalEstimate hrz(int m) {
        if (m < 2) throw std::domain_error("HRZ entry needs ambient dimension >= 2");
        const Rat w = w_exponent(m);
        const Rat p = dual_exponent(w);       // p_{n-1} = w(n-1)'
        const Rat h = Rat(m - 1) - Rat(m) / w;  // (n-2) - (n-1)/p'
        return {m, p, p, h, EstimateFlavor::strong, true, "HRZ n=" + std::to_string(m)};
    }

    static BaseEstimateLibrary standard(int max_ambient = 16) {
        BaseEstimateLibrary lib;
        lib.catalog.push_back(cordoba());
        lib.catalog.push_back(wolff());
        for (int m = 4; m <= max_ambient; ++m) lib.catalog.push_back(hrz(m));
        return lib;
    }

    /// Base estimate used for the transfer into R^n. Wolff beats the general
    /// entry in R^3 (5/2 > 7/3), so n=4 uses Wolff.
    const MaximalEstimate& base_for(int n) const {
        if (n < 3) throw std::domain_error("no transfer base below dimension 3");
        const int m = n - 1;
        const char* want = nullptr;
        if (m == 2) want = "Cordoba n=2";
        else if (m == 3) want = "Wolff n=3";
        for (const auto& e : catalog) {
            if (want != nullptr ? e.source == want
                                : (e.ambient_dim == m && e.source.rfind("HRZ", 0) == 0))
                return e;
        }
        throw std::domain_error("no catalog entry for ambient dimension " + std::to_string(m));
    }
};

/// Interpolation against the trivial L^1 -> L^inf estimate: a base with
/// p0 = q0 and h = n/p0 - 1 yields, for 1 < p <= p0,
///   q = q0 (1 - 1/p0)/(1 - 1/p),  h = n/p - 1.
inline MaximalEstimate interpolate(const MaximalEstimate& base, const Rat& target_p) {
    if (base.p != base.q) throw std::domain_error("interpolation base needs p0 = q0");
    const Rat n(base.ambient_dim);
    if (base.h != n / base.p - 1)
        throw std::domain_error("interpolation base must satisfy h = n/p0 - 1");
    if (target_p <= 1 || target_p > base.p)
        throw std::domain_error("target exponent outside (1, p0]");
    MaximalEstimate out = base;
    out.p = target_p;
    out.q = base.q * (Rat(1) - Rat(1) / base.p) / (Rat(1) - Rat(1) / target_p);
    out.h = n / target_p - 1;
    out.source = "interpolated(" + base.source + ")";
    return out;
}

/// Transfer of an estimate in dimension n-1 to a restricted weak-type
/// estimate in dimension n for midpoint sets of upper box dimension <= s:
///   p    = (p- + n(p- - 1) + 1) / p-
///   beta = (h- p- + s p- - s) / (p- + n(p- - 1) + 1)
/// The result carries (p, beta) with beta in the h field.
inline MaximalEstimate transfer_to_restricted(const MaximalEstimate& base, int n, const Rat& s) {
    if (base.p <= 1) throw std::domain_error("transfer base needs p > 1");
    if (base.ambient_dim != n - 1)
        throw std::domain_error("transfer base must live in dimension n-1");
    if (s < 0 || s > n) throw std::domain_error("s outside [0, n]");
    const Rat pm = base.p;
    const Rat hm = base.h;
    const Rat denom = pm + Rat(n) * (pm - 1) + 1;
    MaximalEstimate out;
    out.ambient_dim = n;
    out.p = denom / pm;
    out.q = out.p;
    out.h = (hm * pm + s * pm - s) / denom;
    out.flavor = EstimateFlavor::restricted_weak;
    out.epsilon_loss = true;
    out.source = "transferred(" + base.source + ")";
    return out;
}

/// g_n(s) = (h- p- + s p- - s) / p- = h- + s/p-'. The transferred estimate
/// yields the dimension bound n - g_n(s).
inline Rat g_function(const MaximalEstimate& base, const Rat& s) {
    if (base.p <= 1) throw std::domain_error("g_function base needs p > 1");
    return (base.h * base.p + s * base.p - s) / base.p;
}

/// Hausdorff dimension lower bound n - beta p from a restricted weak-type
/// estimate carrying (p, beta).
inline Rat dimension_bound_from_estimate(const MaximalEstimate& est, int n) {
    return Rat(n) - est.h * est.p;
}

namespace detail {
/// The transferred affine bound n - (n-1-s)/p - (s-1) at base exponent p.
inline Rat transfer_affine(int n, const Rat& s, const Rat& p) {
    return Rat(n) - (Rat(n - 1) - s) / p - (s - 1);
}
}  // namespace detail

/// Best known lower bound for dim_H K_A in R^n at midpoint dimension s:
/// max(n - s, sup_{1<=p<=p_max} transfer_affine, 2). The sup is attained at
/// p = p_max for s <= n-1 and at p = 1 (value 2) beyond; the closed form is
/// re-verified by sampling 64 exponents, and a discrepancy is a hard error.
inline Rat best_lower_bound(int n, const Rat& s, const BaseEstimateLibrary& lib) {
    if (n < 2) throw std::domain_error("best_lower_bound needs n >= 2");
    if (s < 0 || s > n) throw std::domain_error("s outside [0, n]");
    if (n == 2) return Rat(2);  // planar maximal estimate already gives full dimension

    const Rat pmax = lib.base_for(n).p;
    Rat value = Rat(n) - s;
    value = std::max(value, detail::transfer_affine(n, s, pmax));
    value = std::max(value, Rat(2));

    for (int i = 0; i < 64; ++i) {
        const Rat p = Rat(1) + (pmax - 1) * Rat(i, 63);
        if (detail::transfer_affine(n, s, p) > value)
            throw std::logic_error("closed-form maximum over p contradicted by sampling");
    }
    return value;
}

/// One affine piece f(s) = a + b s on [s_lo, s_hi).
struct Piece {
    Rat s_lo, s_hi, a, b;
    Rat eval(const Rat& s) const { return a + b * s; }
};

/// Exact piecewise-affine lower-bound curve s -> f(n, s) on [0, n].
struct PiecewiseBound {
    int n = 0;
    std::vector<Piece> pieces;

    const Piece& piece_at(const Rat& s) const {
        if (pieces.empty()) throw std::logic_error("empty curve");
        if (s < 0 || s > Rat(n)) throw std::domain_error("s outside [0, n]");
        for (const auto& p : pieces)
            if (s >= p.s_lo && s < p.s_hi) return p;
        return pieces.back();  // s == n
    }

    Rat evaluate(const Rat& s) const { return piece_at(s).eval(s); }

    int piece_index(const Rat& s) const {
        const Piece* p = &piece_at(s);
        return static_cast<int>(p - pieces.data());
    }

    /// Structural invariants: partition of [0, n], exact continuity,
    /// f(n,0) = n, non-increasing, and f >= n - s.
    void check() const {
        if (pieces.empty()) throw std::logic_error("empty curve");
        if (pieces.front().s_lo != 0) throw std::logic_error("curve must start at 0");
        if (pieces.back().s_hi != Rat(n)) throw std::logic_error("curve must end at n");
        for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
            if (pieces[i].s_hi != pieces[i + 1].s_lo)
                throw std::logic_error("pieces must partition [0, n]");
            if (pieces[i].eval(pieces[i].s_hi) != pieces[i + 1].eval(pieces[i + 1].s_lo))
                throw std::logic_error("curve discontinuous at a breakpoint");
        }
        if (evaluate(Rat(0)) != Rat(n)) throw std::logic_error("f(n, 0) != n");
        for (const auto& p : pieces) {
            if (p.b > 0) throw std::logic_error("curve must be non-increasing");
            if (p.eval(p.s_lo) < Rat(n) - p.s_lo || p.eval(p.s_hi) < Rat(n) - p.s_hi)
                throw std::logic_error("curve drops below n - s");
        }
    }

    std::vector<Rat> breakpoints() const {
        std::vector<Rat> out;
        for (std::size_t i = 0; i + 1 < pieces.size(); ++i) out.push_back(pieces[i].s_hi);
        return out;
    }
};

/// The exact lower-bound curve: n - s up to the crossover s1 = n-1-p_max,
/// the transferred affine bound up to n-1, and the constant 2 beyond.
inline PiecewiseBound piecewise_curve(int n, const BaseEstimateLibrary& lib) {
    if (n < 3) throw std::domain_error("piecewise_curve needs n >= 3");
    const Rat pmax = lib.base_for(n).p;
    const Rat s1 = Rat(n - 1) - pmax;

    PiecewiseBound curve;
    curve.n = n;
    if (s1 > 0) curve.pieces.push_back({Rat(0), s1, Rat(n), Rat(-1)});
    curve.pieces.push_back(
        {std::max(Rat(0), s1), Rat(n - 1), Rat(n + 1) - Rat(n - 1) / pmax, Rat(1) / pmax - 1});
    curve.pieces.push_back({Rat(n - 1), Rat(n), Rat(2), Rat(0)});
    curve.check();
    return curve;
}

}  // namespace kakeya::bounds
