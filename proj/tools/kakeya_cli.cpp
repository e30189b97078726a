// Command-line front end: exact dimension-bound curves, verification suites,
// net generation, box-dimension fits, and full experiment runs.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/config error.

#include "kakeya/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

constexpr const char* kVersion = "kakeya 1.0.0";

using namespace kakeya;

int cmd_bounds(int n, const std::string& s_text) {
    const Rat s = parse_rational(s_text);
    const auto lib = bounds::BaseEstimateLibrary::standard(std::max(16, n));
    const Rat value = bounds::best_lower_bound(n, s, lib);

    std::string piece_text;
    if (n >= 3) {
        const auto curve = bounds::piecewise_curve(n, lib);
        const auto& piece = curve.piece_at(s);
        piece_text = format_affine(piece.a, piece.b);
    } else {
        piece_text = "2";
    }
    std::cout << to_exact_string_as_fraction(value);
    if (!is_integer(value)) std::cout << " (= " << to_exact_string(value) << ")";
    std::cout << ", piece: " << piece_text << "\n";
    return 0;
}

int cmd_curve(int n, const std::string& step_text, const std::string& out_path) {
    const Rat step = parse_rational(step_text);
    if (step <= 0) throw std::domain_error("step must be positive");
    const auto lib = bounds::BaseEstimateLibrary::standard(std::max(16, n));
    const auto curve = bounds::piecewise_curve(n, lib);

    io::write_file(out_path, io::curve_csv(curve, step));
    const auto components = std::filesystem::path(out_path).replace_extension(".components.csv");
    io::write_file(components, io::curve_components_csv(n, lib, step));
    const auto catalog = std::filesystem::path(out_path).replace_extension(".catalog.csv");
    io::write_file(catalog, io::catalog_csv(lib));

    std::cout << "curve n=" << n << " -> " << out_path << ", " << components.string() << ", "
              << catalog.string() << "\n";
    std::cout << "breakpoints:";
    for (const auto& b : curve.breakpoints()) std::cout << " " << to_exact_string_as_fraction(b);
    std::cout << "\npieces:";
    for (std::size_t i = 0; i < curve.pieces.size(); ++i) {
        const auto& p = curve.pieces[i];
        const bool last = i + 1 == curve.pieces.size();
        std::cout << "  [" << to_exact_string_as_fraction(p.s_lo) << ","
                  << to_exact_string_as_fraction(p.s_hi) << (last ? "]: " : "): ")
                  << format_affine(p.a, p.b);
    }
    std::cout << "\n";
    // reference constants for unrestricted Kakeya sets, for plot overlays
    if (n == 4) std::cout << "reference: unrestricted lower bound 3.059 (Katz-Zahl)\n";
    if (n >= 5)
        std::cout << "reference: unrestricted lower bound "
                  << (2.0 - std::sqrt(2.0)) * (n - 4) + 3.0 << " ((2-sqrt2)(n-4)+3, Katz-Tao)\n";
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
    const auto rep = verify::run_suite(suite, seed);
    std::cout << verify::format_report(rep);
    return rep.pass() ? 0 : 1;
}

int cmd_experiment(const std::string& config_path, const std::string& out_override) {
    auto cfg = config::parse_file(config_path);
    const std::filesystem::path outdir(out_override.empty() ? cfg.output_dir : out_override);
    const auto summary = experiment::run(cfg, outdir);
    std::cout << "experiment -> " << summary.outdir.string() << "\n";
    std::cout << "  midpoints " << summary.midpoints << ", empirical s "
              << io::g17(summary.empirical_s) << "\n";
    std::cout << "  union measure " << io::g17(summary.kakeya_measure) << ", box-dim slope "
              << io::g17(summary.kakeya_boxdim) << "\n";
    std::cout << "  dimension lower bound "
              << to_exact_string_as_fraction(summary.dimension_bound) << " (= "
              << to_exact_string(summary.dimension_bound) << ")\n";
    std::cout << "  bushes " << summary.bushes << ", stopping bound "
              << (summary.stopping_pass ? "pass" : "FAIL") << "\n";
    return summary.stopping_pass ? 0 : 1;
}

template <int N>
int net_impl(double delta, std::uint64_t seed, const std::string& out_path) {
    const auto net = geom::greedy_net<N>(delta, seed);
    if (out_path.empty())
        std::cout << io::net_csv(net);
    else
        io::write_file(out_path, io::net_csv(net));
    std::cerr << "net n=" << N << " delta=" << io::g17(delta) << " size=" << net.size()
              << " packing_constant=" << io::g17(net.packing_constant) << "\n";
    return 0;
}

int cmd_net(int n, const std::string& delta_text, std::uint64_t seed, const std::string& out_path) {
    const double delta = config::detail::parse_number(delta_text);
    switch (n) {
        case 2: return net_impl<2>(delta, seed, out_path);
        case 3: return net_impl<3>(delta, seed, out_path);
        case 4: return net_impl<4>(delta, seed, out_path);
        default: throw std::domain_error("net generation supports n = 2, 3, 4");
    }
}

int cmd_boxdim(const std::string& kind, const std::string& ratio_text, int axes, double base,
               int kmin, int kmax, int gen_level, std::uint64_t seed,
               const std::string& out_path) {
    const double ratio = config::detail::parse_number(ratio_text);
    if (kmax - kmin + 1 < 3) throw std::domain_error("need at least 3 scales (kmax - kmin >= 2)");
    fractal::FractalSpec spec;
    if (kind == "cantor") {
        spec.kind = fractal::FractalSpec::Kind::cantor_product;
        spec.ratio = ratio;
        spec.axes = axes;
    } else if (kind == "point") {
        spec.kind = fractal::FractalSpec::Kind::single_point;
    } else if (kind == "lattice") {
        spec.kind = fractal::FractalSpec::Kind::lattice;
        spec.step = std::pow(base, -gen_level);
    } else if (kind == "self_similar") {
        spec.kind = fractal::FractalSpec::Kind::random_self_similar;
        spec.ratio = ratio;
        spec.maps = axes;
        spec.seed = seed;
    } else {
        throw std::domain_error("kind must be cantor|point|lattice|self_similar");
    }
    const geom::AABB<2> unit{Vec<2>{{0.0, 0.0}}, Vec<2>{{1.0, 1.0}}};
    const auto A = fractal::generate<2>(spec, std::pow(base, -gen_level), unit);
    std::vector<double> scales;
    for (int k = kmin; k <= kmax; ++k) scales.push_back(std::pow(base, -k));
    const auto fit = fractal::box_dimension_fit(A, scales);
    const std::string csv = io::dimension_fit_csv(fit);
    if (out_path.empty())
        std::cout << csv;
    else
        io::write_file(out_path, csv);
    std::cerr << "slope " << io::g17(fit.slope) << " r2 " << io::g17(fit.r2) << " points "
              << A.points.size() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"restricted Kakeya set laboratory"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // bounds
    auto* sc_bounds = app.add_subcommand("bounds", "best dimension lower bound at one (n, s)");
    int b_n = 4;
    std::string b_s = "0";
    sc_bounds->add_option("--n", b_n, "ambient dimension")->required();
    sc_bounds->add_option("--s", b_s, "midpoint dimension (rational, e.g. 1/2)")->required();

    // curve
    auto* sc_curve = app.add_subcommand("curve", "emit the piecewise lower-bound curve as CSV");
    int c_n = 4;
    std::string c_step = "1/100";
    std::string c_out = "curve.csv";
    sc_curve->add_option("--n", c_n, "ambient dimension (>= 3)")->required();
    sc_curve->add_option("--step", c_step, "sampling step (rational)");
    sc_curve->add_option("--out", c_out, "output CSV path");

    // verify
    auto* sc_verify = app.add_subcommand("verify", "run a verification suite");
    std::string v_suite;
    std::uint64_t v_seed = 7;
    sc_verify->add_option("suite", v_suite, "tubes|cordoba|bush|boxdim|maximal")->required();
    sc_verify->add_option("--seed", v_seed, "suite seed");

    // experiment
    auto* sc_exp = app.add_subcommand("experiment", "run a configured experiment");
    std::string e_config;
    std::string e_out;
    sc_exp->add_option("--config", e_config, "flat key-value config file")->required();
    sc_exp->add_option("--out", e_out, "override the config's output directory");

    // net
    auto* sc_net = app.add_subcommand("net", "generate a maximal delta-separated net");
    int n_n = 2;
    std::string n_delta = "1/32";
    std::uint64_t n_seed = 7;
    std::string n_out;
    sc_net->add_option("--n", n_n, "ambient dimension (2, 3 or 4)")->required();
    sc_net->add_option("--delta", n_delta, "separation (rational or decimal)")->required();
    sc_net->add_option("--seed", n_seed, "stream seed");
    sc_net->add_option("--out", n_out, "output CSV path (stdout when omitted)");

    // boxdim
    auto* sc_box = app.add_subcommand("boxdim", "box-dimension fit of a generated set");
    std::string x_kind = "cantor";
    std::string x_ratio = "1/3";
    int x_axes = 1;
    double x_base = 3.0;
    int x_kmin = 3, x_kmax = 7, x_gen = 9;
    std::uint64_t x_seed = 7;
    std::string x_out;
    sc_box->add_option("--kind", x_kind, "cantor|point|lattice|self_similar");
    sc_box->add_option("--ratio", x_ratio, "contraction ratio (rational or decimal)");
    sc_box->add_option("--axes", x_axes, "product axes (or map count for self_similar)");
    sc_box->add_option("--base", x_base, "scale ladder base");
    sc_box->add_option("--kmin", x_kmin, "coarsest exponent");
    sc_box->add_option("--kmax", x_kmax, "finest exponent");
    sc_box->add_option("--gen-level", x_gen, "generation exponent (finer than kmax)");
    sc_box->add_option("--seed", x_seed, "generator seed");
    sc_box->add_option("--out", x_out, "output CSV path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sc_bounds->parsed()) return cmd_bounds(b_n, b_s);
        if (sc_curve->parsed()) return cmd_curve(c_n, c_step, c_out);
        if (sc_verify->parsed()) return cmd_verify(v_suite, v_seed);
        if (sc_exp->parsed()) return cmd_experiment(e_config, e_out);
        if (sc_net->parsed()) return cmd_net(n_n, n_delta, n_seed, n_out);
        if (sc_box->parsed())
            return cmd_boxdim(x_kind, x_ratio, x_axes, x_base, x_kmin, x_kmax, x_gen, x_seed, x_out);
    } catch (const kakeya::config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
