// Command-line front end: solves densities and eigenproblems, certifies
// ground-state bounds, and runs the verification suite. Exit codes: 0 on
// success/PASS, 1 on FAIL verdicts, 2 on configuration or runtime errors.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hle/closed_forms.hpp"
#include "hle/errors.hpp"
#include "hle/hardy.hpp"
#include "hle/io.hpp"
#include "hle/lane_emden.hpp"
#include "hle/spectral.hpp"
#include "hle/verify.hpp"

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// shape spec string syntax:
//   interval(a,b)
//   rectangle(a0,b0;a1,b1[;a2,b2])
//   ball(c0[,c1[,c2]];r)
//   union(ball(...)|ball(...))
//   slab(half_width;transverse_extent;dim)
//   waveguide(<cross section shape>;axial_extent)
// ---------------------------------------------------------------------------

std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_num(const std::string& s) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw hle::ConfigError("not a number: '" + s + "'");
    }
}

hle::ShapeSpec parse_shape(const std::string& text);

hle::BallSpec parse_ball_args(const std::string& args, int& dim_out) {
    auto parts = split_top(args, ';');
    if (parts.size() != 2) throw hle::ConfigError("ball needs 'center;radius': " + args);
    auto coords = split_top(parts[0], ',');
    if (coords.empty() || coords.size() > 3)
        throw hle::ConfigError("ball center must have 1..3 coordinates");
    hle::BallSpec b;
    for (std::size_t d = 0; d < coords.size(); ++d) b.center[d] = parse_num(coords[d]);
    b.radius = parse_num(parts[1]);
    dim_out = static_cast<int>(coords.size());
    return b;
}

hle::ShapeSpec parse_shape(const std::string& text) {
    auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')')
        throw hle::ConfigError("malformed shape spec: '" + text + "'");
    std::string head = text.substr(0, open);
    std::string args = text.substr(open + 1, text.size() - open - 2);

    if (head == "interval") {
        auto p = split_top(args, ',');
        if (p.size() != 2) throw hle::ConfigError("interval needs 'a,b'");
        return hle::ShapeSpec::interval(parse_num(p[0]), parse_num(p[1]));
    }
    if (head == "rectangle") {
        auto axes = split_top(args, ';');
        if (axes.empty() || axes.size() > 3)
            throw hle::ConfigError("rectangle needs 1..3 'a,b' axis pairs");
        hle::Point lo{}, hi{};
        for (std::size_t d = 0; d < axes.size(); ++d) {
            auto p = split_top(axes[d], ',');
            if (p.size() != 2) throw hle::ConfigError("rectangle axis needs 'a,b'");
            lo[d] = parse_num(p[0]);
            hi[d] = parse_num(p[1]);
        }
        return hle::ShapeSpec::rectangle(static_cast<int>(axes.size()), lo, hi);
    }
    if (head == "ball") {
        int dim = 0;
        hle::BallSpec b = parse_ball_args(args, dim);
        return hle::ShapeSpec::ball(dim, b.center, b.radius);
    }
    if (head == "union") {
        auto parts = split_top(args, '|');
        std::vector<hle::BallSpec> balls;
        int dim = 0;
        for (const auto& part : parts) {
            auto inner_open = part.find('(');
            if (part.substr(0, inner_open) != "ball")
                throw hle::ConfigError("union members must be balls");
            int d = 0;
            balls.push_back(
                parse_ball_args(part.substr(inner_open + 1, part.size() - inner_open - 2), d));
            if (dim && d != dim) throw hle::ConfigError("union members disagree on dimension");
            dim = d;
        }
        return hle::ShapeSpec::union_of_balls(dim, std::move(balls));
    }
    if (head == "slab") {
        auto p = split_top(args, ';');
        if (p.size() != 3) throw hle::ConfigError("slab needs 'half_width;extent;dim'");
        return hle::ShapeSpec::slab(static_cast<int>(parse_num(p[2])), parse_num(p[0]),
                                    parse_num(p[1]));
    }
    if (head == "waveguide") {
        auto p = split_top(args, ';');
        if (p.size() != 2) throw hle::ConfigError("waveguide needs '<cross section>;extent'");
        return hle::ShapeSpec::waveguide(parse_shape(p[0]), parse_num(p[1]));
    }
    throw hle::ConfigError("unknown shape kind: '" + head + "'");
}

// flat key = value file with [section] headers; later keys win
std::map<std::string, std::string> parse_config(const fs::path& path,
                                                const std::string& section) {
    std::ifstream in(path);
    if (!in) throw hle::ConfigError("cannot open config file " + path.string());
    std::map<std::string, std::string> kv;
    std::string line, current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        std::string t = line.substr(first, last - first + 1);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            current = t.substr(1, t.size() - 2);
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw hle::ConfigError(path.string() + ":" + std::to_string(lineno) +
                                   ": expected key = value");
        auto strip = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = strip(t.substr(0, eq));
        std::string value = strip(t.substr(eq + 1));
        if (key.empty())
            throw hle::ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key");
        if (current.empty() || current == section) kv[key] = value;
    }
    return kv;
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "hle_out";
    std::uint64_t seed = 1;
    double h = 0.0;
    double q = 1.0;
    bool quiet = false;
    std::string shape;
    std::string potential;  // per-command default: eigen "none", certify "limit"
    double tol = 0.0;
    std::string deltas = "0.5,1,2,4";
    double gamma = 0.0;
    int dim = 0;
    double scale = 1.0;  // closed-form parameter for 'constants'/potentials
};

void merge_config(CommonArgs& a, const std::string& section,
                  const std::map<std::string, bool>& explicitly_set) {
    if (a.config_path.empty()) return;
    auto kv = parse_config(a.config_path, section);
    auto want = [&](const char* key) {
        return kv.count(key) && !explicitly_set.count(key);
    };
    if (want("shape")) a.shape = kv["shape"];
    if (want("h")) a.h = parse_num(kv["h"]);
    if (want("q")) a.q = parse_num(kv["q"]);
    if (want("tol")) a.tol = parse_num(kv["tol"]);
    if (want("out")) a.out_dir = kv["out"];
    if (want("seed")) a.seed = static_cast<std::uint64_t>(parse_num(kv["seed"]));
    if (want("potential")) a.potential = kv["potential"];
    if (want("deltas")) a.deltas = kv["deltas"];
    if (want("gamma")) a.gamma = parse_num(kv["gamma"]);
}

void validate_potential_source(const std::string& source) {
    if (source.rfind("file:", 0) == 0 && !fs::exists(source.substr(5)))
        throw hle::ConfigError("potential file does not exist: " + source.substr(5));
}

hle::Potential make_potential(const std::string& source, hle::DomainPtr dom,
                              const hle::LaneEmdenDensity& density) {
    if (source == "zero") return hle::Potential(hle::ScalarField(dom, 0.0), "zero");
    if (source.rfind("limit", 0) == 0) {
        double scale = 1.0;
        if (source.size() > 5) {
            if (source[5] != '*') throw hle::ConfigError("potential syntax: limit[*scale]");
            scale = parse_num(source.substr(6));
        }
        hle::Potential base = hle::limit_potential(density);
        if (scale == 1.0) return base;
        hle::ScalarField f = base.field;
        for (double& v : f.values) v *= scale;
        return hle::Potential(std::move(f), "limit*" + std::to_string(scale));
    }
    if (source.rfind("file:", 0) == 0) {
        fs::path csv = source.substr(5);
        fs::path sidecar = csv;
        sidecar.replace_extension(".json");
        hle::ScalarField f = hle::read_field(csv, sidecar);
        if (f.domain->node_count() != dom->node_count())
            throw hle::ConfigError("potential file grid does not match the domain");
        // rebuild on the shared domain so downstream domain checks hold
        hle::ScalarField g(dom);
        g.values = f.values;
        return hle::Potential(std::move(g), source);
    }
    // closed-form name
    hle::ClosedForm cf = hle::ClosedForm::by_name(source, dom->dim, 1.0);
    return hle::Potential(hle::sample(cf, dom), source);
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    for (const auto& tok : split_top(csv, ','))
        if (!tok.empty()) out.push_back(parse_num(tok));
    return out;
}

int cmd_solve(const CommonArgs& args) {
    if (args.shape.empty()) throw hle::ConfigError("solve requires --shape");
    if (!(args.h > 0)) throw hle::ConfigError("solve requires --h > 0");
    double tol = args.tol > 0 ? args.tol : 1e-8;
    hle::DomainPtr dom = hle::build_domain(parse_shape(args.shape), args.h);
    hle::LaneEmdenDensity d = hle::solve_lane_emden(dom, args.q, tol);
    hle::write_density(args.out_dir, "density", d);
    if (!args.quiet) {
        std::cout << "nodes " << dom->node_count() << ", sup " << hle::max_value(d.field)
                  << ", residual " << d.residual << ", iterations " << d.iterations
                  << ", lambda_2q " << hle::lambda_2q_from_density(d) << "\n"
                  << "wrote " << (fs::path(args.out_dir) / "density.csv").string() << "\n";
    }
    return 0;
}

int cmd_eigen(const CommonArgs& args) {
    if (args.shape.empty()) throw hle::ConfigError("eigen requires --shape");
    if (!(args.h > 0)) throw hle::ConfigError("eigen requires --h > 0");
    double tol = args.tol > 0 ? args.tol : 1e-9;
    if (!args.potential.empty()) validate_potential_source(args.potential);
    hle::DomainPtr dom = hle::build_domain(parse_shape(args.shape), args.h);
    fs::create_directories(args.out_dir);
    hle::SpectralResult r;
    if (args.potential.empty() || args.potential == "none") {
        r = hle::principal_eigenvalue(dom, tol);
    } else {
        hle::LaneEmdenDensity d = hle::solve_lane_emden(dom, args.q, 1e-8);
        hle::Potential V = make_potential(args.potential, dom, d);
        r = hle::schrodinger_ground_state(dom, V, tol);
        hle::write_field_csv(fs::path(args.out_dir) / "potential.csv", V.field);
        hle::write_field_sidecar(fs::path(args.out_dir) / "potential.json", V.field);
    }
    hle::write_spectral(args.out_dir, "spectral", r);
    if (!args.quiet)
        std::cout << "eigenvalue " << r.eigenvalue << ", residual " << r.residual
                  << ", iterations " << r.iterations << "\n"
                  << "wrote " << (fs::path(args.out_dir) / "spectral.json").string() << "\n";
    return 0;
}

int cmd_certify(const CommonArgs& args) {
    if (args.shape.empty()) throw hle::ConfigError("certify requires --shape");
    if (!(args.h > 0)) throw hle::ConfigError("certify requires --h > 0");
    hle::CertifyOptions opts;
    opts.deltas = parse_list(args.deltas);
    opts.seed = args.seed;
    if (args.tol > 0) opts.lane_emden_tol = args.tol;
    if (!args.potential.empty()) validate_potential_source(args.potential);

    hle::DomainPtr dom = hle::build_domain(parse_shape(args.shape), args.h);
    // same tolerance as the certification pipeline, so a limit potential is
    // exactly admissible for the re-solved density
    hle::LaneEmdenDensity d = hle::solve_lane_emden(dom, args.q, opts.lane_emden_tol);
    std::string source = args.potential.empty() ? "limit" : args.potential;
    hle::Potential V = make_potential(source, dom, d);
    hle::BoundCertificate cert = hle::certify(dom, args.q, V, opts);
    hle::write_certificate(args.out_dir, "certificate", cert);
    if (!args.quiet) std::cout << hle::certificate_summary(cert);
    if (cert.verdict == hle::Verdict::Pass) return 0;
    return cert.verdict == hle::Verdict::Fail ? 1 : 2;
}

int cmd_verify_suite(const CommonArgs& args) {
    hle::VerifyOptions opts;
    opts.seed = args.seed;
    auto results = hle::run_verify_suite(opts);

    std::ostringstream table;
    table << "# seed " << args.seed
          << "; deterministic per seed, floating point may vary across platforms\n";
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    int failed = 0;
    for (const auto& r : results) {
        failed += !r.pass;
        table << (r.pass ? "PASS " : "FAIL ") << r.name;
        for (std::size_t i = r.name.size(); i < width + 2; ++i) table << ' ';
        table << "(" << std::fixed << std::setprecision(1) << r.seconds << "s) " << r.detail
              << "\n";
        table.unsetf(std::ios::fixed);
        table << std::setprecision(6);
    }
    table << (failed ? "FAILED" : "PASSED") << " " << results.size() - failed << "/"
          << results.size() << " checks\n";

    fs::create_directories(args.out_dir);
    std::ofstream out(fs::path(args.out_dir) / "verify_suite.txt");
    out << table.str();
    if (!args.quiet) std::cout << table.str();
    return failed ? 1 : 0;
}

int cmd_constants(const CommonArgs& args, int N, double gamma) {
    std::optional<double> g;
    if (gamma > 0) g = gamma;
    double q = args.q;
    std::cout << "N " << N << "\n";
    std::cout << "unit ball volume " << hle::unit_ball_volume(N) << "\n";
    if (N >= 3) std::cout << "talenti " << hle::talenti_constant(N) << "\n";
    if (N <= 3) {
        double C = hle::moser_constant(N, q, g);
        std::cout << "moser " << C << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lane-Emden densities, Dirichlet/Schrodinger eigenvalues, and "
                 "certified ground-state lower bounds on uniform grids.\n"
                 "Config files hold key = value lines under a [subcommand] section; "
                 "recognized keys: shape, h, q, tol, out, seed, potential, deltas, gamma. "
                 "Explicit flags override the config."};
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);

    CommonArgs args;
    std::map<std::string, bool> explicit_flags;

    auto add_common = [&](CLI::App* cmd) {
        cmd->set_help_flag("--help", "print help and exit");
        cmd->add_option("--config", args.config_path, "key = value config file");
        cmd->add_option("--out", args.out_dir, "output directory")
            ->each([&](const std::string&) { explicit_flags["out"] = true; });
        cmd->add_option("--seed", args.seed, "seed for random test fields")
            ->each([&](const std::string&) { explicit_flags["seed"] = true; });
        cmd->add_option("--h", args.h, "grid spacing")
            ->each([&](const std::string&) { explicit_flags["h"] = true; });
        cmd->add_option("--q", args.q, "Lane-Emden exponent in [1,2)")
            ->each([&](const std::string&) { explicit_flags["q"] = true; });
        cmd->add_flag("--quiet", args.quiet, "suppress console output");
    };

    auto* solve = app.add_subcommand("solve", "solve the Lane-Emden density");
    add_common(solve);
    solve->add_option("--shape", args.shape, "shape spec, e.g. ball(0,0;1)")
        ->each([&](const std::string&) { explicit_flags["shape"] = true; });
    solve->add_option("--tol", args.tol, "solver tolerance")
        ->each([&](const std::string&) { explicit_flags["tol"] = true; });

    auto* eigen = app.add_subcommand("eigen", "bottom eigenvalue, optionally with potential");
    add_common(eigen);
    eigen->add_option("--shape", args.shape, "shape spec")
        ->each([&](const std::string&) { explicit_flags["shape"] = true; });
    eigen->add_option("--potential", args.potential,
                      "none | zero | limit[*scale] | <closed form> | file:path.csv")
        ->each([&](const std::string&) { explicit_flags["potential"] = true; });
    eigen->add_option("--tol", args.tol, "solver tolerance")
        ->each([&](const std::string&) { explicit_flags["tol"] = true; });

    auto* certify = app.add_subcommand("certify", "assemble a ground-state bound certificate");
    add_common(certify);
    certify->add_option("--shape", args.shape, "shape spec")
        ->each([&](const std::string&) { explicit_flags["shape"] = true; });
    certify->add_option("--potential", args.potential, "potential source (default limit)")
        ->each([&](const std::string&) { explicit_flags["potential"] = true; });
    certify->add_option("--deltas", args.deltas, "comma list of delta values")
        ->each([&](const std::string&) { explicit_flags["deltas"] = true; });
    certify->add_option("--tol", args.tol, "density solver tolerance")
        ->each([&](const std::string&) { explicit_flags["tol"] = true; });

    auto* verify = app.add_subcommand("verify-suite", "run the full verification matrix");
    add_common(verify);

    int const_N = 1;
    double const_gamma = 0.0;
    auto* constants = app.add_subcommand("constants", "print the explicit constants");
    add_common(constants);
    constants->add_option("--N", const_N, "dimension")->required();
    constants->add_option("--gamma", const_gamma, "2d exponent (> 2, default 4)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(solve)) {
            merge_config(args, "solve", explicit_flags);
            return cmd_solve(args);
        }
        if (app.got_subcommand(eigen)) {
            merge_config(args, "eigen", explicit_flags);
            return cmd_eigen(args);
        }
        if (app.got_subcommand(certify)) {
            merge_config(args, "certify", explicit_flags);
            return cmd_certify(args);
        }
        if (app.got_subcommand(verify)) {
            merge_config(args, "verify-suite", explicit_flags);
            return cmd_verify_suite(args);
        }
        if (app.got_subcommand(constants)) {
            merge_config(args, "constants", explicit_flags);
            return cmd_constants(args, const_N, const_gamma);
        }
    } catch (const hle::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const hle::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
