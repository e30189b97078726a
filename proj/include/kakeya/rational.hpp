#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kakeya {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational with arbitrary-precision numerator/denominator.
/// Every exponent computation in the bounds module runs on this type;
/// doubles appear only at the presentation layer.
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    return Rat(BigInt(num), BigInt(den));
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

/// Base-10 big integer parse; immune to the octal/hex prefix rules of the
/// cpp_int string constructor (e.g. "015625" stays decimal).
inline BigInt parse_bigint_dec(std::string s) {
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("malformed integer literal: " + s);
    BigInt v = 0;
    for (char ch : s) v = v * 10 + (ch - '0');
    return neg ? -v : v;
}

/// Parses "19/5", "-3", "0.25" (and "2.6e-2"-free plain decimals) exactly.
inline Rat parse_rational(const std::string& text) {
    std::string s = text;
    // trim
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    if (a == std::string::npos) throw std::invalid_argument("empty rational literal");
    s = s.substr(a, b - a + 1);

    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num = parse_bigint_dec(s.substr(0, slash));
        BigInt den = parse_bigint_dec(s.substr(slash + 1));
        if (den == 0) throw std::domain_error("rational with zero denominator");
        return Rat(num, den);
    }
    const auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string head = s.substr(0, dot);
        std::string tail = s.substr(dot + 1);
        if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("malformed decimal literal: " + text);
        bool neg = !head.empty() && head[0] == '-';
        if (neg || (!head.empty() && head[0] == '+')) head = head.substr(1);
        if (head.empty()) head = "0";
        BigInt num = parse_bigint_dec(head);
        BigInt scale = 1;
        for (std::size_t i = 0; i < tail.size(); ++i) {
            num = num * 10 + (tail[i] - '0');
            scale *= 10;
        }
        if (neg) num = -num;
        return Rat(num, scale);
    }
    return Rat(parse_bigint_dec(s));
}

/// Exact decimal expansion when the reduced denominator is 2^a 5^b, else "num/den".
inline std::string to_exact_string(const Rat& r) {
    BigInt num = numerator(r);
    BigInt den = denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;

    BigInt d = den;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) {
        // non-terminating decimal: keep the exact fraction
        return (neg ? "-" : "") + num.str() + "/" + den.str();
    }
    int digits = std::max(twos, fives);
    BigInt scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    BigInt scaled = num * scale / den;  // exact by construction
    BigInt ip = scaled / scale;
    BigInt frac = scaled % scale;
    std::string out = (neg ? "-" : "") + ip.str();
    if (frac != 0) {
        std::string f = frac.str();
        f.insert(f.begin(), digits - static_cast<int>(f.size()), '0');
        while (!f.empty() && f.back() == '0') f.pop_back();
        out += "." + f;
    }
    return out;
}

/// Canonical "num/den" (or plain integer) form.
inline std::string to_exact_string_as_fraction(const Rat& r) {
    if (is_integer(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Pretty form of an affine map s ↦ a + b·s, e.g. "19/5 - 3/5 s", "4 - s", "2".
inline std::string format_affine(const Rat& a, const Rat& b) {
    if (b == 0) return to_exact_string_as_fraction(a);
    std::string out = to_exact_string_as_fraction(a);
    Rat mag = b < 0 ? Rat(-b) : b;
    out += (b < 0) ? " - " : " + ";
    if (mag != 1) out += to_exact_string_as_fraction(mag) + " ";
    out += "s";
    return out;
}

}  // namespace kakeya
