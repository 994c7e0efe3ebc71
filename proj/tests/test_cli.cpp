#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "tdl/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string err;
};

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / fmt::format("tdl_cli_{}", ::getpid());
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Runs the real binary; `env` is prepended to the shell command.
Outcome tdl_exec(const std::string& args, const std::string& env = "") {
    const auto err_file = scratch() / "stderr.txt";
    const std::string cmd = fmt::format("{} '{}' {} >/dev/null 2>'{}'", env, TDL_BINARY, args, err_file.string());
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err_file)};
}

const fs::path& synth_files() {
    static const fs::path trips = [] {
        const auto p = scratch() / "trips.csv";
        const auto r = tdl_exec(fmt::format("synth --out '{}' --stations-out '{}' --trips-per-day 2000", p.string(),
                                            (scratch() / "stations.csv").string()));
        REQUIRE(r.code == 0);
        return p;
    }();
    return trips;
}

}  // namespace

TEST_CASE("simulate with defaults writes a JSON result pair") {
    const auto out = scratch() / "sim.json";
    REQUIRE(tdl_exec(fmt::format("simulate --out '{}'", out.string())).code == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("command") == "simulate");
    CHECK(j.contains("fixed"));
    CHECK(j.contains("dynamic"));
}

TEST_CASE("exit codes partition failure classes") {
    const auto missing = tdl_exec("forecast --trips /nonexistent/missing.csv");
    CHECK(missing.code == 2);
    CHECK(missing.err.find("/nonexistent/missing.csv") != std::string::npos);
    CHECK(missing.err.find("forecast") != std::string::npos);

    CHECK(tdl_exec("").code == 1);
    CHECK(tdl_exec("teleport").code == 1);
    CHECK(tdl_exec("forecast").code == 1);  // --trips is required
    CHECK(tdl_exec("simulate --capacity 0").code == 1);
    CHECK(tdl_exec("simulate --format xml").code == 1);
    CHECK(tdl_exec("synth --noise -1").code == 1);

    // a computation failure: one weekday of data cannot train Mon-Thu
    const auto thin = scratch() / "thin.csv";
    std::ofstream(thin) << "company,datetime,ticket,entry_station,exit_station\n"
                        << "PRIMERO,2019-03-04 07:15:00,electronic,A,B\n";
    const auto failed_out = scratch() / "never.json";
    const auto r = tdl_exec(fmt::format("forecast --trips '{}' --out '{}'", thin.string(), failed_out.string()));
    CHECK(r.code == 3);
    CHECK_FALSE(fs::exists(failed_out));
}

TEST_CASE("sweep is byte-identical across runs") {
    const auto a = scratch() / "sweep_a.csv";
    const auto b = scratch() / "sweep_b.csv";
    REQUIRE(tdl_exec(fmt::format("sweep --f 1.0,1.5,2.0 --seed 7 --format csv --out '{}'", a.string())).code == 0);
    REQUIRE(tdl_exec(fmt::format("sweep --f 1.0,1.5,2.0 --seed 7 --format csv --out '{}'", b.string())).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind("f,buses,fixed_avg_wait,dynamic_avg_wait,reduction_pct,fixed_stranded,dynamic_stranded\n", 0) == 0);
}

TEST_CASE("seed falls back to TDL_SEED") {
    const auto a = scratch() / "seed_flag.csv";
    const auto b = scratch() / "seed_env.csv";
    const auto c = scratch() / "seed_default.csv";
    REQUIRE(tdl_exec(fmt::format("synth --days 1 --trips-per-day 300 --seed 9 --out '{}'", a.string())).code == 0);
    REQUIRE(tdl_exec(fmt::format("synth --days 1 --trips-per-day 300 --out '{}'", b.string()), "TDL_SEED=9").code == 0);
    REQUIRE(tdl_exec(fmt::format("synth --days 1 --trips-per-day 300 --out '{}'", c.string()), "env -u TDL_SEED").code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) != slurp(c));
    CHECK(tdl_exec("synth --days 1", "TDL_SEED=abc").code == 1);
}

TEST_CASE("data commands run on synthetic input") {
    const auto trips = synth_files().string();
    const auto stations = (scratch() / "stations.csv").string();
    const std::vector<std::string> commands{
        fmt::format("ingest --trips '{}'", trips),
        fmt::format("profile --trips '{}' --day Sat", trips),
        fmt::format("rank --trips '{}' --window morning --format csv", trips),
        fmt::format("cluster --trips '{}' --format csv", trips),
        fmt::format("forecast --trips '{}' --holdout", trips),
        fmt::format("explain --trips '{}' --stations '{}'", trips, stations),
    };
    for (const auto& args : commands) {
        CAPTURE(args);
        const auto r = tdl_exec(args);
        CHECK(r.code == 0);
        CHECK(r.err.empty());
    }
    CHECK(tdl_exec(fmt::format("profile --trips '{}' --day Funday", trips)).code == 1);
}

TEST_CASE("in-process run writes to the given stream") {
    std::ostringstream out, err;
    const char* argv[] = {"tdl", "sweep", "--f", "1.5", "--passengers", "6000", "--format", "csv"};
    CHECK(tdl::cli::run(8, argv, out, err) == tdl::cli::kOk);
    std::istringstream lines(out.str());
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK(row.rfind("1.5", 0) == 0);
    CHECK_FALSE(std::getline(lines, extra));
}
