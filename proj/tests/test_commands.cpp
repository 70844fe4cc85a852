#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

#include "dtn/commands.hpp"
#include "dtn/trace.hpp"

using namespace dtn;
namespace fs = std::filesystem;

namespace {

// Run the CLI in-process and capture its stdout.
struct CliResult {
    int rc = 0;
    std::string out;
};

CliResult run_cli(std::vector<std::string> args) {
    std::vector<const char*> argv;
    argv.push_back("dtnlat");
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream captured;
    auto* old = std::cout.rdbuf(captured.rdbuf());
    CliResult r;
    try {
        r.rc = cli::dispatch(static_cast<int>(argv.size()), argv.data());
    } catch (...) {
        std::cout.rdbuf(old);
        throw;
    }
    std::cout.rdbuf(old);
    r.out = captured.str();
    return r;
}

struct TmpDir {
    fs::path path;
    TmpDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("dtnlat_cmd_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TmpDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("trace_from_spec: kinds, aliases, and rejection of junk") {
    const auto homo = cli::trace_from_spec("homogeneous:n=5,rate=0.002,horizon=20000", 3);
    CHECK(homo.node_count() == 5);
    CHECK(!homo.events().empty());

    // lambda is an accepted alias for rate; both at once is ambiguous.
    const auto alias = cli::trace_from_spec("homogeneous:n=5,lambda=0.002,horizon=20000", 3);
    CHECK(alias.events() == homo.events());
    CHECK_THROWS_AS(cli::trace_from_spec("homogeneous:rate=0.002,lambda=0.002", 3),
                    std::invalid_argument);

    // A seed inside the spec beats the root seed argument.
    const auto pinned = cli::trace_from_spec("homogeneous:n=5,rate=0.002,horizon=20000,seed=3", 99);
    CHECK(pinned.events() == homo.events());

    CHECK(cli::trace_from_spec("cyclic", 1).node_count() == 3);
    CHECK(cli::trace_from_spec("clustered:n=12,clusters=2,horizon=30000", 1).node_count() == 12);

    CHECK_THROWS_AS(cli::trace_from_spec("mesh:n=4", 1), std::invalid_argument);
    CHECK_THROWS_AS(cli::trace_from_spec("homogeneous:n=4,teeth=9", 1), std::invalid_argument);
    CHECK_THROWS_AS(cli::trace_from_spec("homogeneous:n=4,n=5", 1), std::invalid_argument);
    CHECK_THROWS_AS(cli::trace_from_spec("homogeneous:n=abc", 1), std::invalid_argument);
    CHECK_THROWS_AS(cli::trace_from_spec("homogeneous:=4", 1), std::invalid_argument);
}

TEST_CASE("full pipeline: gen, fit, predict, simulate, validate, analyze") {
    TmpDir tmp;
    const std::string gen = "homogeneous:n=8,rate=0.002,horizon=40000";

    auto r = run_cli({"gen", "--spec", gen, "--seed", "5", "--out", tmp.file("trace.csv")});
    CHECK(r.rc == 0);
    CHECK(r.out.find("nodes 8") != std::string::npos);
    const auto trace = parse_csv_file(tmp.file("trace.csv"));
    CHECK(trace.node_count() == 8);

    r = run_cli({"fit", "--trace", tmp.file("trace.csv"), "--kind", "mixture", "--runs", "300",
             "--ccdf", tmp.file("steps.csv"), "--out", tmp.file("model.json")});
    CHECK(r.rc == 0);
    const auto model = nlohmann::json::parse(slurp(tmp.file("model.json")));
    CHECK(model.at("kind") == "mixture");
    CHECK(model.at("n") == 8);
    CHECK(slurp(tmp.file("steps.csv")).rfind("i,delta_seconds,ccdf\n", 0) == 0);
    const auto steps_meta = nlohmann::json::parse(slurp(tmp.file("steps.csv.meta.json")));
    CHECK(steps_meta.at("runs") == 300);
    CHECK(steps_meta.at("n") == 8);

    r = run_cli({"predict", "--model", tmp.file("model.json"), "--dt", "5", "--horizon", "5000",
             "--out", tmp.file("curve.csv"), "--ttl", "100", "--ttl", "1000"});
    CHECK(r.rc == 0);
    CHECK(slurp(tmp.file("curve.csv")).rfind("t,F_R\n", 0) == 0);
    // One delivery_ratio line per deadline, in the order given.
    const auto first = r.out.find("delivery_ratio 100 ");
    const auto second = r.out.find("delivery_ratio 1000 ");
    REQUIRE(first != std::string::npos);
    REQUIRE(second != std::string::npos);
    CHECK(first < second);

    r = run_cli({"simulate", "--trace", tmp.file("trace.csv"), "--protocol", "spray", "--copies",
             "4", "--runs", "2", "--out", tmp.file("records.csv"), "--seed", "7"});
    CHECK(r.rc == 0);
    CHECK(slurp(tmp.file("records.csv")).rfind("msg,delivered,latency\n", 0) == 0);
    CHECK(r.out.find("messages ") != std::string::npos);

    r = run_cli({"validate", "--trace", tmp.file("trace.csv"), "--kind", "mixture", "--fit-runs",
             "300", "--sim-runs", "2", "--dt", "5", "--horizon", "5000", "--threshold", "0.5",
             "--out", tmp.file("report")});
    CHECK(r.rc == 0);
    CHECK(r.out.find("result pass") != std::string::npos);
    CHECK(fs::exists(tmp.file("report/model_curve.csv")));
    CHECK(fs::exists(tmp.file("report/homogeneous_curve.csv")));
    CHECK(fs::exists(tmp.file("report/latencies.csv")));
    const auto report = nlohmann::json::parse(slurp(tmp.file("report/report.json")));
    CHECK(report.at("pass") == true);
    CHECK(report.at("ks").get<double>() <= 0.5);
    CHECK(report.at("messages").get<std::size_t>() > 0);

    r = run_cli({"analyze", "--trace", tmp.file("trace.csv"), "--runs", "200",
             "--deltas", tmp.file("deltas.csv"), "--ccdf", tmp.file("ccdf.csv"),
             "--t2", tmp.file("t2.csv"), "--t2-dt", "2", "--means", tmp.file("means.csv"),
             "--correlation", tmp.file("corr.csv"), "--window", "10000",
             "--independence", "2"});
    CHECK(r.rc == 0);
    CHECK(r.out.find("runs 200") != std::string::npos);
    CHECK(r.out.find("t_delta_rho 2 ") != std::string::npos);
    CHECK(r.out.find("corr_nodes ") != std::string::npos);
    for (const char* name : {"deltas.csv", "ccdf.csv", "t2.csv", "means.csv", "corr.csv"}) {
        CHECK(fs::exists(tmp.file(name)));
        const auto meta = nlohmann::json::parse(slurp(tmp.file(std::string(name) + ".meta.json")));
        CHECK(meta.is_object());
    }
    const auto corr_meta = nlohmann::json::parse(slurp(tmp.file("corr.csv.meta.json")));
    CHECK(corr_meta.at("method") == "pearson");
    CHECK(corr_meta.at("nodes") == 8);
    CHECK(slurp(tmp.file("means.csv")).rfind("i,mean_t\n", 0) == 0);
}

TEST_CASE("identical invocations write identical bytes") {
    TmpDir tmp;
    const std::vector<std::string> gen1 = {"gen", "--spec", "clustered:n=9,clusters=3",
                                           "--seed", "2", "--out", tmp.file("a.csv")};
    std::vector<std::string> gen2 = gen1;
    gen2.back() = tmp.file("b.csv");
    CHECK(run_cli(gen1).rc == 0);
    CHECK(run_cli(gen2).rc == 0);
    CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("b.csv")));

    const std::vector<std::string> sim1 = {"simulate", "--trace", tmp.file("a.csv"),
                                           "--runs", "2", "--seed", "4",
                                           "--out", tmp.file("r1.csv")};
    std::vector<std::string> sim2 = sim1;
    sim2.back() = tmp.file("r2.csv");
    CHECK(run_cli(sim1).rc == 0);
    CHECK(run_cli(sim2).rc == 0);
    CHECK(slurp(tmp.file("r1.csv")) == slurp(tmp.file("r2.csv")));
}

TEST_CASE("exit codes separate usage errors from failed validation") {
    TmpDir tmp;
    // Unknown subcommand / missing required option / unreadable input: 2.
    CHECK(run_cli({"transmogrify"}).rc == 2);
    CHECK(run_cli({"gen", "--spec", "homogeneous:n=4"}).rc == 2); // no --out
    CHECK(run_cli({"fit", "--trace", tmp.file("missing.csv"), "--out", tmp.file("m.json")}).rc == 2);
    CHECK(run_cli({"gen", "--spec", "homogeneous:n=1", "--out", tmp.file("t.csv")}).rc == 2);
    CHECK(run_cli({"predict", "--model", tmp.file("nothing.json"), "--dt", "1", "--horizon", "10"})
              .rc == 2);

    // Help is not an error.
    CHECK(run_cli({"--help"}).rc == 0);
    CHECK(run_cli({"fit", "--help"}).rc == 0);

    // A met/unmet threshold decides between 0 and 1.
    const std::string gen = "homogeneous:n=6,rate=0.002,horizon=30000";
    const std::vector<std::string> base = {"validate", "--gen",  gen,    "--fit-runs", "200",
                                           "--sim-runs", "2",    "--dt", "5",          "--horizon",
                                           "4000"};
    auto pass = base;
    pass.insert(pass.end(), {"--threshold", "0.9"});
    CHECK(run_cli(pass).rc == 0);
    auto fail = base;
    fail.insert(fail.end(), {"--threshold", "1e-9"});
    const auto r = run_cli(fail);
    CHECK(r.rc == 1);
    CHECK(r.out.find("result fail") != std::string::npos);
}

TEST_CASE("config files supply defaults and explicit flags win") {
    TmpDir tmp;
    {
        std::ofstream cfg(tmp.file("defaults.ini"));
        cfg << "[simulate]\n"
            << "seed=9\n"
            << "runs=2\n";
    }
    const std::string gen = "homogeneous:n=6,rate=0.002,horizon=30000";

    auto direct = run_cli({"simulate", "--gen", gen, "--runs", "2", "--seed", "9",
                       "--out", tmp.file("direct.csv")});
    auto viacfg = run_cli({"--config", tmp.file("defaults.ini"), "simulate", "--gen", gen,
                       "--out", tmp.file("viacfg.csv")});
    CHECK(direct.rc == 0);
    CHECK(viacfg.rc == 0);
    CHECK(slurp(tmp.file("direct.csv")) == slurp(tmp.file("viacfg.csv")));

    // The command line overrides the file.
    auto flagwin = run_cli({"--config", tmp.file("defaults.ini"), "simulate", "--gen", gen,
                        "--seed", "11", "--out", tmp.file("flagwin.csv")});
    auto seed11 = run_cli({"simulate", "--gen", gen, "--runs", "2", "--seed", "11",
                       "--out", tmp.file("seed11.csv")});
    CHECK(flagwin.rc == 0);
    CHECK(seed11.rc == 0);
    CHECK(slurp(tmp.file("flagwin.csv")) == slurp(tmp.file("seed11.csv")));
    CHECK(slurp(tmp.file("flagwin.csv")) != slurp(tmp.file("viacfg.csv")));

    // A config file that does not exist is a usage error.
    CHECK(run_cli({"--config", tmp.file("absent.ini"), "simulate", "--gen", gen,
               "--out", tmp.file("x.csv")})
              .rc == 2);
}
