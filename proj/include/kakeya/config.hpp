#pragma once

#include "kakeya/fractals.hpp"
#include "kakeya/io.hpp"
#include "kakeya/rng.hpp"

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kakeya::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key-value experiment description. `serialize` emits a canonical form
/// that parses back to an identical config.
struct ExperimentConfig {
    int n = 2;
    double delta = 1.0 / 64.0;
    double lambda = 0.6;
    std::uint64_t seed = 1;
    double bbox_halfwidth = 0.7;
    int grid_factor = 4;  // h = delta / grid_factor
    std::string output_dir = "out";
    fractal::FractalSpec spec;
    fractal::AssignmentRule assignment = fractal::AssignmentRule::nearest;

    std::uint64_t net_seed() const { return derive_seed(seed, "net"); }
    std::uint64_t sampling_seed() const { return derive_seed(seed, "sampling"); }
    std::uint64_t fixture_seed() const { return derive_seed(seed, "fixtures"); }

    void validate() const {
        if (n < 2 || n > 4) throw ConfigError("n must be 2, 3 or 4");
        if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta outside (0, 1)");
        if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("lambda outside (0, 1)");
        if (!(bbox_halfwidth > 0.5 + delta)) throw ConfigError("bbox too small for unit tubes");
        if (grid_factor < 4) throw ConfigError("grid_factor must be >= 4");
        spec.validate(n);
    }

    bool operator==(const ExperimentConfig&) const = default;
};

inline const char* kind_name(fractal::FractalSpec::Kind k) {
    using K = fractal::FractalSpec::Kind;
    switch (k) {
        case K::single_point: return "single_point";
        case K::lattice: return "lattice";
        case K::cantor_product: return "cantor_product";
        case K::random_self_similar: return "random_self_similar";
    }
    return "?";
}

inline const char* rule_name(fractal::AssignmentRule r) {
    using R = fractal::AssignmentRule;
    switch (r) {
        case R::nearest: return "nearest";
        case R::random: return "random";
        case R::max_overlap: return "max_overlap";
    }
    return "?";
}

inline std::string serialize(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "# restricted Kakeya experiment\n";
    os << "n = " << c.n << "\n";
    os << "delta = " << io::g17(c.delta) << "\n";
    os << "lambda = " << io::g17(c.lambda) << "\n";
    os << "seed = " << c.seed << "\n";
    os << "bbox_halfwidth = " << io::g17(c.bbox_halfwidth) << "\n";
    os << "grid_factor = " << c.grid_factor << "\n";
    os << "output_dir = " << c.output_dir << "\n";
    os << "assignment = " << rule_name(c.assignment) << "\n";
    os << "spec.kind = " << kind_name(c.spec.kind) << "\n";
    os << "spec.step = " << io::g17(c.spec.step) << "\n";
    os << "spec.ratio = " << io::g17(c.spec.ratio) << "\n";
    os << "spec.axes = " << c.spec.axes << "\n";
    os << "spec.maps = " << c.spec.maps << "\n";
    os << "spec.seed = " << c.spec.seed << "\n";
    os << "spec.target_dim = " << to_exact_string_as_fraction(c.spec.target_dim) << "\n";
    return os.str();
}

namespace detail {
/// "a/b" parses exactly through rationals; plain decimals go through strtod,
/// which is correctly rounded, so %.17g output round-trips bit-exactly.
inline double parse_number(const std::string& val) {
    if (val.find('/') != std::string::npos) return to_double(parse_rational(val));
    std::size_t used = 0;
    const double x = std::stod(val, &used);
    if (used != val.size()) throw std::invalid_argument("trailing junk in number: " + val);
    return x;
}
}  // namespace detail

inline ExperimentConfig parse(std::istream& is) {
    ExperimentConfig c;
    std::string line;
    int lineno = 0;
    const auto fail = [&](const std::string& msg) {
        throw ConfigError("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                fail("expected 'key = value'");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) fail("empty value for '" + key + "'");
        try {
            if (key == "n") c.n = std::stoi(val);
            else if (key == "delta") c.delta = detail::parse_number(val);
            else if (key == "lambda") c.lambda = detail::parse_number(val);
            else if (key == "seed") c.seed = std::stoull(val);
            else if (key == "bbox_halfwidth") c.bbox_halfwidth = detail::parse_number(val);
            else if (key == "grid_factor") c.grid_factor = std::stoi(val);
            else if (key == "output_dir") c.output_dir = val;
            else if (key == "assignment") {
                using R = fractal::AssignmentRule;
                if (val == "nearest") c.assignment = R::nearest;
                else if (val == "random") c.assignment = R::random;
                else if (val == "max_overlap") c.assignment = R::max_overlap;
                else fail("unknown assignment rule '" + val + "'");
            } else if (key == "spec.kind") {
                using K = fractal::FractalSpec::Kind;
                if (val == "single_point") c.spec.kind = K::single_point;
                else if (val == "lattice") c.spec.kind = K::lattice;
                else if (val == "cantor_product") c.spec.kind = K::cantor_product;
                else if (val == "random_self_similar") c.spec.kind = K::random_self_similar;
                else fail("unknown spec kind '" + val + "'");
            } else if (key == "spec.step") c.spec.step = detail::parse_number(val);
            else if (key == "spec.ratio") c.spec.ratio = detail::parse_number(val);
            else if (key == "spec.axes") c.spec.axes = std::stoi(val);
            else if (key == "spec.maps") c.spec.maps = std::stoi(val);
            else if (key == "spec.seed") c.spec.seed = std::stoull(val);
            else if (key == "spec.target_dim") c.spec.target_dim = parse_rational(val);
            else fail("unknown key '" + key + "'");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            fail("bad value '" + val + "' for '" + key + "' (" + e.what() + ")");
        }
    }
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("config validation: ") + e.what());
    }
    return c;
}

inline ExperimentConfig parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    return parse(is);
}

}  // namespace kakeya::config
