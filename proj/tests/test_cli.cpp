#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    fs::path out = fs::temp_directory_path() / "hle_cli_capture.txt";
    std::string cmd = std::string(HLE_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, ss.str()};
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("cli: constants for the line") {
    CliResult r = run_cli("constants --N 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("17.8885") != std::string::npos);
}

TEST_CASE("cli: solve writes the density files") {
    fs::path out = fs::temp_directory_path() / "hle_cli_solve";
    fs::remove_all(out);
    CliResult r = run_cli("solve --shape \"interval(-1,1)\" --h 0.015625 --q 1 --out " +
                          out.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out / "density.csv"));
    CHECK(fs::exists(out / "density.json"));
    fs::remove_all(out);
}

TEST_CASE("cli: certify on a coarse disk passes and is deterministic") {
    fs::path out1 = fs::temp_directory_path() / "hle_cli_cert1";
    fs::path out2 = fs::temp_directory_path() / "hle_cli_cert2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    std::string base = "certify --shape \"ball(0,0;1)\" --h 0.0625 --q 1 --seed 5 --out ";
    CliResult r1 = run_cli(base + out1.string());
    CliResult r2 = run_cli(base + out2.string());
    CHECK(r1.exit_code == 0);
    CHECK(r1.output.find("PASS") != std::string::npos);
    CHECK(read_file(out1 / "certificate.json") == read_file(out2 / "certificate.json"));
    fs::remove_all(out1);
    fs::remove_all(out2);
}

TEST_CASE("cli: inadmissible potential fails with exit code 1") {
    fs::path out = fs::temp_directory_path() / "hle_cli_fail";
    fs::remove_all(out);
    CliResult r = run_cli("certify --shape \"ball(0,0;1)\" --h 0.0625 --q 1 "
                          "--potential \"limit*3\" --out " +
                          out.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("FAIL") != std::string::npos);
    CHECK(read_file(out / "certificate.json").find("ADMISSIBILITY") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("cli: config errors exit with code 2") {
    CliResult bad_shape = run_cli("solve --shape \"triangle(1)\" --h 0.1");
    CHECK(bad_shape.exit_code == 2);

    fs::path cfg = fs::temp_directory_path() / "hle_bad.cfg";
    std::ofstream(cfg) << "[solve]\nshape ball(0,0;1)\n";
    CliResult bad_cfg = run_cli("solve --config " + cfg.string());
    CHECK(bad_cfg.exit_code == 2);
    fs::remove(cfg);
}

TEST_CASE("cli: config file drives a solve") {
    fs::path cfg = fs::temp_directory_path() / "hle_solve.cfg";
    fs::path out = fs::temp_directory_path() / "hle_cli_cfg_out";
    fs::remove_all(out);
    std::ofstream(cfg) << "[solve]\n"
                       << "shape = interval(-1,1)\n"
                       << "h = 0.03125\n"
                       << "q = 1.5\n"
                       << "out = " << out.string() << "\n";
    CliResult r = run_cli("solve --config " + cfg.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out / "density.csv"));
    fs::remove(cfg);
    fs::remove_all(out);
}

TEST_CASE("cli: eigen with the limit potential") {
    fs::path out = fs::temp_directory_path() / "hle_cli_eigen";
    fs::remove_all(out);
    CliResult r = run_cli("eigen --shape \"ball(0,0;1)\" --h 0.0625 --q 1 "
                          "--potential limit --out " +
                          out.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out / "spectral.json"));
    fs::remove_all(out);
}
