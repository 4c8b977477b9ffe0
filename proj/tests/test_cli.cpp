#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli_bin() { return std::getenv("HARDY_CLI_BIN"); }

int run(const std::string& args, const fs::path& out) {
    const std::string cmd =
        std::string(cli_bin()) + " " + args + " > " + out.string() + " 2> " + out.string() + ".err";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

fs::path tmpdir() {
    const fs::path dir = fs::temp_directory_path() / "hardy_cli_test";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("cli runs end to end") {
    if (!cli_bin()) {
        MESSAGE("HARDY_CLI_BIN not set; skipping");
        return;
    }
    const fs::path dir = tmpdir();

    SUBCASE("constants command prints the assembled value") {
        const fs::path out = dir / "constants.json";
        const int rc = run("constants --regime T12_1 --d 1 --p 2 --s 0.25 --delta 0.5", out);
        CHECK(rc == 0);
        const auto j = nlohmann::json::parse(slurp(out));
        CHECK(j.at("value").get<double>() == doctest::Approx(64.0));
        CHECK(j.at("K").get<int>() == 5);
        CHECK(j.at("assembly").size() >= 1);
    }

    SUBCASE("verify is byte-identical across runs and thread counts") {
        const fs::path a = dir / "a.jsonl";
        const fs::path b = dir / "b.jsonl";
        const fs::path c = dir / "c.jsonl";
        const std::string args =
            "verify --regime T11_3 --d 1 --p 2 --N 16 --trials 100 --seed 7 --out ";
        CHECK(run(args + a.string(), dir / "ignore1") == 0);
        CHECK(run(args + b.string(), dir / "ignore2") == 0);
        CHECK(run("--threads 1 " + args + c.string(), dir / "ignore3") == 0);
        const std::string sa = slurp(a);
        CHECK(!sa.empty());
        CHECK(sa == slurp(b));
        CHECK(sa == slurp(c));
        // every line parses back
        std::istringstream is(sa);
        std::string line;
        int lines = 0;
        while (std::getline(is, line)) {
            CHECK_NOTHROW(nlohmann::json::parse(line));
            ++lines;
        }
        CHECK(lines == 102); // header + 100 records + summary
    }

    SUBCASE("testfn tabulates exact values against the bounds") {
        const fs::path out = dir / "testfn.json";
        CHECK(run("testfn --family vn --d 2 --t 1 --p 2 --n 4", out) == 0);
        const auto j = nlohmann::json::parse(slurp(out));
        CHECK(j.at("lhs_lower_bound").get<double>() == doctest::Approx(2.0 / 3.0));
        CHECK(j.at("exact_lhs").get<double>() == doctest::Approx(2.4583333).epsilon(1e-6));
        CHECK(j.at("lhs_ok").get<bool>());
        CHECK(j.at("energy_ok").get<bool>());
    }

    SUBCASE("probe emits a ratio series") {
        const fs::path out = dir / "probe.json";
        CHECK(run("probe --regime T11_2 --d 2 --p 2 --t 1.5 --family vn --n-list 8,16,32,64", out) ==
              0);
        const auto j = nlohmann::json::parse(slurp(out));
        CHECK(j.at("series").size() == 4);
        CHECK(j.at("verdict").get<std::string>() == "SHARP");
    }

    SUBCASE("census respects the bound") {
        const fs::path out = dir / "census.json";
        CHECK(run("census --n 2 --k 1 --d 2 --beta all", out) == 0);
        const auto j = nlohmann::json::parse(slurp(out));
        CHECK(j.at("within_bound").get<bool>());
    }

    SUBCASE("optimize reports an estimate") {
        const fs::path out = dir / "opt.json";
        CHECK(run("optimize --regime T11_3 --d 1 --p 2 --N 64", out) == 0);
        const auto j = nlohmann::json::parse(slurp(out));
        CHECK(j.at("estimate").get<double>() > 1.0);
        CHECK(j.at("estimate").get<double>() < 2.0);
    }

    SUBCASE("sweep crosses grids and skips invalid cells") {
        const fs::path out = dir / "sweep.jsonl";
        CHECK(run("sweep --regime T12_3 --d 1 --p 2 --s 2 --d-list 1,2 --p-list 1,2 "
                  "--N-list 6 --trials 5 --margin 6",
                  out) == 0);
        std::istringstream is(slurp(out));
        std::string line;
        int rows = 0, skipped = 0;
        while (std::getline(is, line)) {
            const auto j = nlohmann::json::parse(line);
            if (j.contains("skipped")) ++skipped;
            ++rows;
        }
        CHECK(rows == 5); // header + 4 grid cells
        CHECK(skipped == 1); // d = 2, p = 1, s = 2 sits on sp = d
    }

    SUBCASE("config errors exit with code 2") {
        const fs::path out = dir / "bad.json";
        CHECK(run("constants --regime T11_3 --d 3 --p 2", out) == 2);
        const std::string err = slurp(fs::path(out.string() + ".err"));
        CHECK(err.find("validation") != std::string::npos);
    }

    SUBCASE("capacity errors exit with code 3") {
        const fs::path out = dir / "cap.json";
        CHECK(run("census --n 4 --k 3 --d 4", out) == 3);
    }
}
