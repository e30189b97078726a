#pragma once

#include "kakeya/config.hpp"
#include "kakeya/verify.hpp"

#include <filesystem>
#include <sstream>

namespace kakeya::experiment {

struct Summary {
    int n = 0;
    double delta = 0.0;
    std::size_t midpoints = 0;
    double empirical_s = 0.0;
    double kakeya_measure = 0.0;
    double kakeya_boxdim = 0.0;
    Rat dimension_bound{0};
    long bushes = 0;
    bool stopping_pass = true;
    std::filesystem::path outdir;
};

namespace detail {

template <int N>
Summary run_impl(const config::ExperimentConfig& cfg, const std::filesystem::path& outdir) {
    namespace fs = std::filesystem;
    fs::create_directories(outdir);

    const double delta = cfg.delta;
    const auto box = geom::AABB<N>::cube(cfg.bbox_halfwidth);
    const auto net = geom::greedy_net<N>(delta, cfg.net_seed());

    auto spec = cfg.spec;
    if (spec.kind == fractal::FractalSpec::Kind::random_self_similar && spec.seed == 0)
        spec.seed = cfg.fixture_seed();
    // midpoints live well inside the box so tubes stay clear of the boundary
    auto inner = geom::AABB<N>::cube(std::max(0.05, cfg.bbox_halfwidth - 0.5 - 2.0 * delta));
    const auto A = fractal::generate<N>(spec, delta, inner);

    const auto K = fractal::build_restricted_kakeya(A, net, delta, box, cfg.assignment,
                                                    cfg.sampling_seed());
    const auto prof = maximal::restricted_maximal_profile(K, A, delta, net);
    double lambda_star = 0.0;
    const double nrm = maximal::weak_norm(prof, static_cast<double>(N), &lambda_star);

    const double s_emp =
        std::log(static_cast<double>(fractal::covering_number(A, delta))) / std::log(1.0 / delta);
    const double suite_c = bush::suite_constant(N);
    const auto decomposition = bush::decompose(K, A, net, delta, cfg.lambda, s_emp, suite_c);
    const auto stopping =
        decomposition.stopped
            ? bush::verify_stopping_bound(decomposition, K.measure(), s_emp, suite_c)
            : bush::StoppingReport{};

    std::vector<double> scales;
    for (int j = 0; j < 4; ++j) scales.push_back(delta * std::pow(2.0, 3 - j));
    const auto fit_a = fractal::box_dimension_fit(A, scales);
    const auto fit_k = fractal::box_dimension_fit(K, scales);

    // dimension bound at the empirical working-scale dimension (rounded to
    // an exact rational on a 1/1024 grid and clamped to [0, n])
    const auto lib = bounds::BaseEstimateLibrary::standard();
    Rat s_rat(static_cast<long>(std::lround(std::max(0.0, s_emp) * 1024.0)), 1024);
    if (s_rat > Rat(N)) s_rat = Rat(N);
    const Rat bound = bounds::best_lower_bound(N, s_rat, lib);

    io::write_file(outdir / "config.txt", config::serialize(cfg));
    io::write_file(outdir / "net.csv", io::net_csv(net));
    io::write_file(outdir / "midpoints.csv", io::points_csv<N>(A.points));
    {
        std::ostringstream os;
        geom::write_voxelset(os, K);
        io::write_file(outdir / "kakeya.rle", os.str());
    }
    io::write_file(outdir / "profile.csv", io::profile_csv(prof));
    io::write_file(outdir / "weak_norm.csv", io::weak_norm_csv({{delta, nrm, lambda_star}}));
    io::write_file(outdir / "decomposition.csv", io::decomposition_csv(decomposition));
    io::write_file(outdir / "bushes.csv", io::bushes_csv(decomposition));
    io::write_file(outdir / "boxdim_midpoints.csv", io::dimension_fit_csv(fit_a));
    io::write_file(outdir / "boxdim_kakeya.csv", io::dimension_fit_csv(fit_k));

    std::ostringstream sum;
    sum << "n " << N << "\n";
    sum << "delta " << io::g17(delta) << "\n";
    sum << "lambda " << io::g17(cfg.lambda) << "\n";
    sum << "midpoints " << A.points.size() << "\n";
    sum << "covering_number_at_delta " << fractal::covering_number(A, delta) << "\n";
    sum << "empirical_s " << io::g17(s_emp) << "\n";
    sum << "kakeya_measure " << io::g17(K.measure()) << "\n";
    sum << "kakeya_clip_warnings " << K.clip_warnings() << "\n";
    sum << "kakeya_boxdim_slope " << io::g17(fit_k.slope) << "\n";
    sum << "kakeya_boxdim_r2 " << io::g17(fit_k.r2) << "\n";
    sum << "midpoint_boxdim_slope " << io::g17(fit_a.slope) << "\n";
    sum << "dimension_lower_bound " << to_exact_string_as_fraction(bound) << " ("
        << to_exact_string(bound) << ")\n";
    sum << "weak_norm " << io::g17(nrm) << " lambda_star " << io::g17(lambda_star) << "\n";
    sum << "decomposition_case1 " << (decomposition.case1 ? 1 : 0) << "\n";
    sum << "decomposition_stopped " << (decomposition.stopped ? 1 : 0) << "\n";
    sum << "decomposition_bushes " << decomposition.bushes.size() << "\n";
    sum << "decomposition_epsilon0 " << io::g17(decomposition.epsilon0) << "\n";
    if (decomposition.stopped) {
        sum << "stopping_bound " << io::g17(stopping.bound) << " suite_constant "
            << io::g17(suite_c) << "\n";
        sum << "stopping_pass " << (stopping.pass ? 1 : 0) << "\n";
    }
    io::write_file(outdir / "summary.txt", sum.str());

    Summary out;
    out.n = N;
    out.delta = delta;
    out.midpoints = A.points.size();
    out.empirical_s = s_emp;
    out.kakeya_measure = K.measure();
    out.kakeya_boxdim = fit_k.slope;
    out.dimension_bound = bound;
    out.bushes = static_cast<long>(decomposition.bushes.size());
    out.stopping_pass = !decomposition.stopped || stopping.pass;
    out.outdir = outdir;
    return out;
}

}  // namespace detail

inline Summary run(const config::ExperimentConfig& cfg, const std::filesystem::path& outdir) {
    cfg.validate();
    switch (cfg.n) {
        case 2: return detail::run_impl<2>(cfg, outdir);
        case 3: return detail::run_impl<3>(cfg, outdir);
        case 4: return detail::run_impl<4>(cfg, outdir);
        default: throw config::ConfigError("n must be 2, 3 or 4");
    }
}

inline Summary run(const config::ExperimentConfig& cfg) {
    return run(cfg, std::filesystem::path(cfg.output_dir));
}

}  // namespace kakeya::experiment
