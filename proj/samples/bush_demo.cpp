// Builds two separated bushes, runs the iterative decomposition, and prints
// the per-step report.

#include "kakeya/bush.hpp"

#include <cmath>
#include <iostream>

using namespace kakeya;
using namespace kakeya::geom;

int main() {
    const double delta = 1.0 / 128.0;
    const double lambda = 0.6;
    const auto net = greedy_net<2>(delta, 2024);

    // thin the folded net to a sparse family, then split it across two anchors
    auto folded = fold_to_hemisphere(net.dirs);
    std::sort(folded.begin(), folded.end(), [](const Direction<2>& a, const Direction<2>& b) {
        return std::atan2(a.v[1], a.v[0]) < std::atan2(b.v[1], b.v[0]);
    });
    std::vector<Direction<2>> sparse;
    for (const auto& d : folded) {
        bool ok = true;
        for (const auto& kept : sparse)
            if (folded_chord_distance(d, kept) <= 30.0 * delta / lambda) { ok = false; break; }
        if (ok) sparse.push_back(d);
    }

    const Vec<2> a1{{-0.55, 0.0}}, a2{{0.55, 0.0}};
    VoxelSet<2> E(AABB<2>::cube(1.15), delta / 4.0);
    for (std::size_t i = 0; i < sparse.size(); ++i)
        rasterize_tube(Tube<2>(sparse[i], i % 2 ? a2 : a1, delta), E);

    const maximal::MidpointSet<2> A{{a1, a2}, Rat(0)};
    const auto d = bush::decompose(E, A, net, delta, lambda);

    std::cout << "epsilon0 = " << d.epsilon0 << ", stopped = " << d.stopped << "\n";
    for (const auto& s : d.steps)
        std::cout << "step " << s.step << ": level measure " << s.level_measure << ", bush of "
                  << s.bush_size << " tubes, density ratio " << s.density_ratio << "\n";
    for (std::size_t b = 0; b < d.bushes.size(); ++b)
        std::cout << "bush " << b << " anchored at (" << d.bushes[b].anchor[0] << ", "
                  << d.bushes[b].anchor[1] << ")\n";
    const auto stop = bush::verify_stopping_bound(d, E.measure(), 0.0, 16.0);
    std::cout << "stopping bound " << stop.bound << " (m = " << stop.m << ", "
              << (stop.pass ? "pass" : "fail") << ")\n";
    return 0;
}
