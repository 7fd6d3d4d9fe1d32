#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hle/errors.hpp"
#include "hle/hardy.hpp"
#include "hle/io.hpp"
#include "hle/lane_emden.hpp"
#include "hle/rng.hpp"
#include "hle/spectral.hpp"

using namespace hle;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("hle_io_test_" + std::to_string(Xorshift64Star(::getpid()).next_u64() % 100000));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("field round trip preserves values exactly") {
    TempDir tmp;
    std::vector<BallSpec> balls{{{0, 0, 0}, 0.7}, {{0.8, 0.1, 0}, 0.6}};
    DomainPtr dom = build_domain(ShapeSpec::union_of_balls(2, balls), 1.0 / 16);
    ScalarField f(dom);
    Xorshift64Star rng(31);
    for (int i = 0; i < f.size(); ++i) f[i] = rng.uniform(-3, 3);

    write_field_csv(tmp.path / "f.csv", f);
    write_field_sidecar(tmp.path / "f.json", f);
    ScalarField g = read_field(tmp.path / "f.csv", tmp.path / "f.json");

    REQUIRE(g.size() == f.size());
    for (int i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
}

TEST_CASE("3d field round trip") {
    TempDir tmp;
    DomainPtr dom = build_domain(ShapeSpec::ball(3, {0, 0, 0}, 0.8), 1.0 / 12);
    ScalarField f(dom);
    Xorshift64Star rng(8);
    for (int i = 0; i < f.size(); ++i) f[i] = rng.uniform(-1, 1);
    write_field_csv(tmp.path / "f.csv", f);
    write_field_sidecar(tmp.path / "f.json", f);
    ScalarField g = read_field(tmp.path / "f.csv", tmp.path / "f.json");
    REQUIRE(g.size() == f.size());
    for (int i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
}

TEST_CASE("density files carry the solve metadata") {
    TempDir tmp;
    DomainPtr dom = build_domain(ShapeSpec::interval(-1, 1), 1.0 / 32);
    LaneEmdenDensity d = solve_lane_emden(dom, 1.25, 1e-9);
    write_density(tmp.path, "density", d);

    std::ifstream in(tmp.path / "density.json");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    CHECK(text.find("\"q\"") != std::string::npos);
    CHECK(text.find("\"residual\"") != std::string::npos);
    CHECK(text.find("\"iterations\"") != std::string::npos);
    CHECK(text.find("\"shape\"") != std::string::npos);

    ScalarField back = read_field(tmp.path / "density.csv", tmp.path / "density.json");
    for (int i = 0; i < back.size(); ++i) CHECK(back[i] == d.field[i]);
}

TEST_CASE("spectral files") {
    TempDir tmp;
    DomainPtr dom = build_domain(ShapeSpec::interval(-1, 1), 1.0 / 32);
    SpectralResult r = principal_eigenvalue(dom, 1e-9);
    write_spectral(tmp.path, "spectral", r);
    CHECK(fs::exists(tmp.path / "spectral.json"));
    CHECK(fs::exists(tmp.path / "spectral_eigenfunction.csv"));
    ScalarField back = read_field(tmp.path / "spectral_eigenfunction.csv",
                                  tmp.path / "spectral_eigenfunction.json");
    for (int i = 0; i < back.size(); ++i) CHECK(back[i] == r.eigenfunction[i]);
}

TEST_CASE("certificate files: schema header and sorted sweep rows") {
    TempDir tmp;
    DomainPtr dom = build_domain(ShapeSpec::ball(2, {0, 0, 0}, 1.0), 1.0 / 16);
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-9);
    CertifyOptions opts;
    opts.n_random_tests = 3;
    BoundCertificate cert = certify(dom, 1.0, limit_potential(d), opts);
    write_certificate(tmp.path, "certificate", cert);

    std::ifstream in(tmp.path / "certificate.json");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("\"schema\": \"1\"") != std::string::npos);
    CHECK(fs::exists(tmp.path / "certificate.txt"));

    std::ifstream csv(tmp.path / "certificate_hardy_checks.csv");
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "delta,test_id,lhs,rhs,margin,pass");
    double prev_delta = -1;
    std::string prev_id;
    while (std::getline(csv, line)) {
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 + 1);
        double delta = std::stod(line.substr(0, c1));
        std::string id = line.substr(c1 + 1, c2 - c1 - 1);
        if (delta == prev_delta)
            CHECK(prev_id <= id);
        else
            CHECK(prev_delta <= delta);
        prev_delta = delta;
        prev_id = id;
    }
}

TEST_CASE("shape specs survive the json round trip") {
    std::vector<ShapeSpec> shapes;
    shapes.push_back(ShapeSpec::interval(-1, 2));
    shapes.push_back(ShapeSpec::rectangle(2, {-1, 0, 0}, {1, 3, 0}));
    shapes.push_back(ShapeSpec::ball(3, {0.1, -0.2, 0.3}, 1.5));
    shapes.push_back(ShapeSpec::union_of_balls(2, {{{0, 0, 0}, 1.0}, {{1.5, 0, 0}, 0.8}}));
    shapes.push_back(ShapeSpec::slab(3, 1.0, 6.0));
    shapes.push_back(ShapeSpec::waveguide(ShapeSpec::ball(2, {0, 0, 0}, 1.0), 8.0));
    for (const auto& s : shapes) {
        ShapeSpec back = shape_from_json_text(shape_to_json_text(s));
        CHECK(back.describe() == s.describe());
    }
}

TEST_CASE("read errors are reported as IoError") {
    TempDir tmp;
    CHECK_THROWS_AS(read_field(tmp.path / "missing.csv", tmp.path / "missing.json"), IoError);

    // row count mismatch
    DomainPtr dom = build_domain(ShapeSpec::interval(-1, 1), 0.25);
    ScalarField f(dom, 1.0);
    write_field_csv(tmp.path / "f.csv", f);
    write_field_sidecar(tmp.path / "f.json", f);
    std::ofstream truncate(tmp.path / "f.csv");
    truncate << "x,value\n0,1\n";
    truncate.close();
    CHECK_THROWS_AS(read_field(tmp.path / "f.csv", tmp.path / "f.json"), IoError);
}
