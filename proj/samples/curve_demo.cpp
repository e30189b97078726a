// Prints the exact dimension lower-bound curves for dimensions 4 and 10 and
// evaluates them on a coarse grid.

#include "kakeya/bounds.hpp"

#include <iostream>

using namespace kakeya;

int main() {
    const auto lib = bounds::BaseEstimateLibrary::standard(16);
    for (int n : {4, 10}) {
        const auto curve = bounds::piecewise_curve(n, lib);
        std::cout << "n = " << n << "\n";
        for (const auto& p : curve.pieces)
            std::cout << "  [" << to_exact_string_as_fraction(p.s_lo) << ", "
                      << to_exact_string_as_fraction(p.s_hi) << ")  f(s) = "
                      << format_affine(p.a, p.b) << "\n";
        for (Rat s(0); s <= Rat(n); s += Rat(n, 8)) {
            std::cout << "  f(" << to_exact_string_as_fraction(s)
                      << ") = " << to_exact_string_as_fraction(curve.evaluate(s)) << "\n";
        }
    }
    return 0;
}
