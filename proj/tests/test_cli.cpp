#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>

// End-to-end tests of the installed CLI binary (path injected by CMake).

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "bsk_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    const fs::path out = scratch_dir() / "stdout.txt";
    const std::string cmd =
        std::string(BSK_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.stdout_text = ss.str();
    return r;
}

json parse_stdout(const RunResult& r) { return json::parse(r.stdout_text); }

}  // namespace

TEST_CASE("selftest exits 0 and reports every invariant") {
    const RunResult r = run_cli("selftest");
    CHECK(r.exit_code == 0);
    const json rep = parse_stdout(r);
    CHECK(rep.at("all_pass").get<bool>());
}

TEST_CASE("energy subcommand: identity at c=2") {
    const RunResult r = run_cli("energy --map identity --c 2 --res 16 12 12");
    CHECK(r.exit_code == 0);
    const json rep = parse_stdout(r);
    CHECK(rep.at("E").get<double>() == doctest::Approx(4 * kPi * kPi).epsilon(1e-9));
    CHECK(rep.at("ratio").get<double>() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("spectrum subcommand: K=2 contains {mu:4, multiplicity:15}") {
    const RunResult r = run_cli("spectrum --max-degree 2");
    CHECK(r.exit_code == 0);
    const json rep = parse_stdout(r);
    bool found = false;
    for (const auto& c : rep.at("clusters"))
        if (c.at("mu_int") == 4 && c.at("multiplicity") == 15) found = true;
    CHECK(found);
    CHECK(rep.at("rankG") == 42);
}

TEST_CASE("check subcommand: suspension(1) pointwise passes, CSV side file written") {
    const fs::path csv = scratch_dir() / "profile.csv";
    const RunResult r = run_cli("check --map suspension --a 1 --coupling pointwise "
                                "--res 16 12 12 --csv " +
                                csv.string());
    CHECK(r.exit_code == 0);
    const json rep = parse_stdout(r);
    CHECK(rep.at("all_pass").get<bool>());

    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "s,beta_sq,c_pt,lambda1_sq,lambda2_sq,lambda3_sq");
    std::string row;
    std::getline(in, row);
    CHECK(!row.empty());
}

TEST_CASE("deterministic output: identical reports modulo the timestamp") {
    const std::string args = "energy --map fourier_test --seed 5 --c 2 --res 12 8 8";
    json a = parse_stdout(run_cli(args));
    json b = parse_stdout(run_cli(args));
    a.erase("timestamp");
    b.erase("timestamp");
    CHECK(a.dump() == b.dump());
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("energy --no-such-flag").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);  // a subcommand is required
    CHECK(run_cli("spectrum --max-degree 99").exit_code == 2);  // over the size cap
}

TEST_CASE("config file supplies defaults, flags override") {
    const fs::path cfg = scratch_dir() / "config.json";
    {
        std::ofstream f(cfg);
        f << R"({"map":"suspension","a":2.0,"c":2.0,"res":[12,8,8]})";
    }
    const json rep = parse_stdout(run_cli("energy --config " + cfg.string()));
    CHECK(rep.at("map").get<std::string>().find("suspension") == 0);
    CHECK(rep.at("grid") == json::array({12, 8, 8}));

    // Explicit flag wins over the config value.
    const json rep2 = parse_stdout(run_cli("energy --config " + cfg.string() + " --map identity"));
    CHECK(rep2.at("map") == "identity");
}

TEST_CASE("flow subcommand smoke run with CSV side files") {
    const fs::path prefix = scratch_dir() / "flowrun";
    const RunResult r = run_cli("flow --B 1 --c 2 --nodes 8 --res 12 8 8 --max-iter 3 "
                                "--init perturbed --csv-prefix " +
                                prefix.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(prefix.string() + "_profile.csv"));
    CHECK(fs::exists(prefix.string() + "_trace.csv"));
}

TEST_CASE("convergence subcommand emits three resolutions") {
    const RunResult r = run_cli("convergence --map identity --c 2 --res 16 12 12");
    CHECK(r.exit_code == 0);
    const json rep = parse_stdout(r);
    CHECK(rep.at("resolutions").size() == 3);
}
