#include "hle/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hle/errors.hpp"

namespace hle {

using nlohmann::json;

namespace {

json shape_to_json(const ShapeSpec& s) {
    json j;
    j["dim"] = s.dim;
    switch (s.kind) {
        case ShapeSpec::Kind::Interval:
            j["kind"] = "interval";
            j["a"] = s.lo[0];
            j["b"] = s.hi[0];
            break;
        case ShapeSpec::Kind::Rectangle: {
            j["kind"] = "rectangle";
            json lo = json::array(), hi = json::array();
            for (int d = 0; d < s.dim; ++d) {
                lo.push_back(s.lo[d]);
                hi.push_back(s.hi[d]);
            }
            j["lo"] = lo;
            j["hi"] = hi;
            break;
        }
        case ShapeSpec::Kind::Ball:
        case ShapeSpec::Kind::UnionOfBalls: {
            j["kind"] = s.kind == ShapeSpec::Kind::Ball ? "ball" : "union_of_balls";
            json balls = json::array();
            for (const auto& b : s.balls) {
                json jb;
                json c = json::array();
                for (int d = 0; d < s.dim; ++d) c.push_back(b.center[d]);
                jb["center"] = c;
                jb["radius"] = b.radius;
                balls.push_back(jb);
            }
            j["balls"] = balls;
            break;
        }
        case ShapeSpec::Kind::Slab:
            j["kind"] = "slab";
            j["half_width"] = s.half_width;
            j["transverse_extent"] = s.extent;
            break;
        case ShapeSpec::Kind::Waveguide:
            j["kind"] = "waveguide";
            j["axial_extent"] = s.extent;
            j["cross_section"] = shape_to_json(*s.cross_section);
            break;
    }
    return j;
}

ShapeSpec shape_from_json(const json& j) {
    const std::string kind = j.at("kind");
    const int dim = j.at("dim");
    if (kind == "interval") return ShapeSpec::interval(j.at("a"), j.at("b"));
    if (kind == "rectangle") {
        Point lo{}, hi{};
        for (int d = 0; d < dim; ++d) {
            lo[d] = j.at("lo")[d];
            hi[d] = j.at("hi")[d];
        }
        return ShapeSpec::rectangle(dim, lo, hi);
    }
    if (kind == "ball" || kind == "union_of_balls") {
        std::vector<BallSpec> balls;
        for (const auto& jb : j.at("balls")) {
            BallSpec b;
            for (int d = 0; d < dim; ++d) b.center[d] = jb.at("center")[d];
            b.radius = jb.at("radius");
            balls.push_back(b);
        }
        if (kind == "ball") return ShapeSpec::ball(dim, balls.at(0).center, balls.at(0).radius);
        return ShapeSpec::union_of_balls(dim, std::move(balls));
    }
    if (kind == "slab") return ShapeSpec::slab(dim, j.at("half_width"), j.at("transverse_extent"));
    if (kind == "waveguide")
        return ShapeSpec::waveguide(shape_from_json(j.at("cross_section")), j.at("axial_extent"));
    throw IoError("unknown shape kind in sidecar: " + kind);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace

std::string shape_to_json_text(const ShapeSpec& spec) { return shape_to_json(spec).dump(); }

ShapeSpec shape_from_json_text(const std::string& text) {
    return shape_from_json(json::parse(text));
}

void write_field_csv(const std::filesystem::path& csv_path, const ScalarField& field) {
    const GridDomain& dom = *field.domain;
    std::ofstream out(csv_path);
    if (!out) throw IoError("cannot open " + csv_path.string() + " for writing");
    static const char* names[3] = {"x", "y", "z"};
    for (int d = 0; d < dom.dim; ++d) out << names[d] << ",";
    out << "value\n";
    char buf[64];
    for (int i = 0; i < field.size(); ++i) {
        Point p = dom.position(i);
        for (int d = 0; d < dom.dim; ++d) {
            std::snprintf(buf, sizeof buf, "%.17g", p[d]);
            out << buf << ",";
        }
        std::snprintf(buf, sizeof buf, "%.17g", field[i]);
        out << buf << "\n";
    }
    if (!out) throw IoError("write failed for " + csv_path.string());
}

void write_field_sidecar(const std::filesystem::path& json_path, const ScalarField& field,
                         const std::map<std::string, double>& extra) {
    json j;
    j["schema"] = "1";
    j["kind"] = "scalar_field";
    j["dim"] = field.domain->dim;
    j["h"] = field.domain->h;
    j["nodes"] = field.size();
    j["shape"] = shape_to_json(field.domain->shape);
    for (const auto& [k, v] : extra) j[k] = v;
    write_text(json_path, j.dump(2) + "\n");
}

ScalarField read_field(const std::filesystem::path& csv_path,
                       const std::filesystem::path& json_path) {
    std::ifstream jin(json_path);
    if (!jin) throw IoError("cannot open " + json_path.string());
    json j = json::parse(jin, nullptr, true);
    ShapeSpec spec = shape_from_json(j.at("shape"));
    double h = j.at("h");
    DomainPtr dom = build_domain(spec, h);

    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open " + csv_path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty field file " + csv_path.string());

    ScalarField f(dom);
    std::vector<bool> seen(f.size(), false);
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        Point p{};
        double value = 0;
        std::string tok;
        for (int d = 0; d < dom->dim; ++d) {
            if (!std::getline(ss, tok, ',')) throw IoError("short row in " + csv_path.string());
            p[d] = std::stod(tok);
        }
        if (!std::getline(ss, tok, ',')) throw IoError("short row in " + csv_path.string());
        value = std::stod(tok);
        std::int32_t node = dom->node_near(p);
        if (node < 0)
            throw IoError("row coordinates do not match an interior node in " +
                          csv_path.string());
        f[node] = value;
        seen[node] = true;
        ++rows;
    }
    if (rows != f.size() || !std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw IoError("field file does not cover the domain: " + csv_path.string());
    for (double v : f.values)
        if (!std::isfinite(v)) throw IoError("non-finite value in " + csv_path.string());
    return f;
}

void write_density(const std::filesystem::path& dir, const std::string& stem,
                   const LaneEmdenDensity& d) {
    std::filesystem::create_directories(dir);
    write_field_csv(dir / (stem + ".csv"), d.field);
    write_field_sidecar(dir / (stem + ".json"), d.field,
                        {{"q", d.q},
                         {"residual", d.residual},
                         {"iterations", static_cast<double>(d.iterations)},
                         {"energy", d.energy}});
}

void write_spectral(const std::filesystem::path& dir, const std::string& stem,
                    const SpectralResult& r) {
    std::filesystem::create_directories(dir);
    json j;
    j["schema"] = "1";
    j["eigenvalue"] = r.eigenvalue;
    j["residual"] = r.residual;
    j["iterations"] = r.iterations;
    j["eigenfunction_csv"] = stem + "_eigenfunction.csv";
    write_text(dir / (stem + ".json"), j.dump(2) + "\n");
    write_field_csv(dir / (stem + "_eigenfunction.csv"), r.eigenfunction);
    write_field_sidecar(dir / (stem + "_eigenfunction.json"), r.eigenfunction);
}

std::string certificate_summary(const BoundCertificate& cert) {
    std::ostringstream os;
    os << "certificate: " << to_string(cert.verdict);
    if (!cert.verdict_reason.empty()) os << " (" << cert.verdict_reason << ")";
    os << "\n";
    os << "  shape           " << cert.shape.describe() << "  h=" << cert.h
       << "  q=" << cert.q << "\n";
    os << "  density sup     " << cert.density_sup << "  (residual " << cert.density_residual
       << ", " << cert.density_iterations << " iterations)\n";
    os << "  lambda1         " << cert.lambda1 << "\n";
    os << "  lambda1(V)      " << cert.lambda1_V << "\n";
    os << "  theorem bound   " << cert.theorem_bound_value << "\n";
    os << "  corollary bound " << cert.corollary_bound_value << "\n";
    os << "  admissible      " << cert.admissible_fraction * 100.0 << "% of nodes\n";
    int passed = 0;
    for (const auto& row : cert.hardy_checks) passed += row.pass;
    os << "  hardy checks    " << passed << "/" << cert.hardy_checks.size() << " passed\n";
    return os.str();
}

void write_certificate(const std::filesystem::path& dir, const std::string& stem,
                       const BoundCertificate& cert) {
    std::filesystem::create_directories(dir);
    json j;
    j["schema"] = "1";
    j["verdict"] = to_string(cert.verdict);
    j["verdict_reason"] = cert.verdict_reason;
    j["q"] = cert.q;
    j["dim"] = cert.dim;
    j["shape"] = shape_to_json(cert.shape);
    j["h"] = cert.h;
    j["slack"] = cert.slack;
    j["density_sup"] = cert.density_sup;
    j["density_residual"] = cert.density_residual;
    j["density_iterations"] = cert.density_iterations;
    j["lambda1"] = cert.lambda1;
    j["lambda1_V"] = cert.lambda1_V;
    j["theorem_bound"] = cert.theorem_bound_value;
    j["corollary_bound"] = cert.corollary_bound_value;
    j["admissible_fraction"] = cert.admissible_fraction;
    j["worst_admissibility_violation"] = cert.worst_admissibility_violation;
    json rows = json::array();
    auto sorted = cert.hardy_checks;
    std::sort(sorted.begin(), sorted.end(), [](const HardyCheckRow& a, const HardyCheckRow& b) {
        return a.delta != b.delta ? a.delta < b.delta : a.test_id < b.test_id;
    });
    for (const auto& r : sorted) {
        rows.push_back({{"delta", r.delta},
                        {"test_id", r.test_id},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"margin", r.margin},
                        {"pass", r.pass}});
    }
    j["hardy_checks"] = rows;
    write_text(dir / (stem + ".json"), j.dump(2) + "\n");
    write_text(dir / (stem + ".txt"), certificate_summary(cert));

    std::ostringstream csv;
    csv << "delta,test_id,lhs,rhs,margin,pass\n";
    char buf[64];
    for (const auto& r : sorted) {
        csv << r.delta << "," << r.test_id << ",";
        std::snprintf(buf, sizeof buf, "%.17g", r.lhs);
        csv << buf << ",";
        std::snprintf(buf, sizeof buf, "%.17g", r.rhs);
        csv << buf << ",";
        std::snprintf(buf, sizeof buf, "%.17g", r.margin);
        csv << buf << "," << (r.pass ? 1 : 0) << "\n";
    }
    write_text(dir / (stem + "_hardy_checks.csv"), csv.str());
}

} // namespace hle
