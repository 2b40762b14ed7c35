#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "sparseseries/parallel.hpp"

using sparseseries::cli::run;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("classify pisot fixture") {
    auto r = invoke({"classify", "--minpoly", "x^2-2x-1"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("kind") == "Pisot");
    CHECK(j.at("degree") == 2);
}

TEST_CASE("classify salem with the acknowledgment flag") {
    auto r = invoke({"classify", "--minpoly", "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1",
                     "--assume-irreducible"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("kind") == "Salem");
}

TEST_CASE("usage errors exit 1") {
    CHECK(invoke({"classify", "--nonsense"}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({"classify"}).code == 1);  // missing base
    CHECK(invoke({"check", "--theorem", "rational", "--t", "1", "--a", "cubes",
                  "--schedule", "geometric:10:100"})
              .code == 1);
}

TEST_CASE("computational errors exit 2") {
    // reducible polynomial is rejected during computation setup
    auto r = invoke({"classify", "--minpoly", "x^2-3x+2"});
    CHECK(r.code == 2);
    // sieve horizon beyond the memory budget
    CHECK(invoke({"sieve", "--function", "phi", "--horizon", "99999999999"}).code == 2);
}

TEST_CASE("check produces a report file and exits 0 even on FAIL rows") {
    std::string path = "/tmp/ss_cli_report.json";
    auto r = invoke({"check", "--theorem", "rational", "--t", "2", "--a", "list:1,2,3,4,5",
                     "--b", "zero", "--schedule", "list:4,5,6", "--z", "list:1,1,1",
                     "--horizon", "7", "--out", path});
    CHECK(r.code == 0);
    std::ifstream is(path);
    REQUIRE(is.good());
    auto j = nlohmann::json::parse(is);
    CHECK(j.at("schema") == "sparse-series-report/1");
    std::remove(path.c_str());
}

TEST_CASE("config file supplies defaults, flags override") {
    std::string cfg = "/tmp/ss_cli_cfg.json";
    {
        std::ofstream os(cfg);
        os << R"({"minpoly": "x^2-2x-1"})";
    }
    auto r = invoke({"classify", "--config", cfg});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out).at("kind") == "Pisot");
    // explicit flag wins over the config value
    auto r2 = invoke({"classify", "--config", cfg, "--minpoly", "x^2-2"});
    CHECK(r2.code == 0);
    CHECK(nlohmann::json::parse(r2.out).at("kind") == "NeitherPisotNorSalem");
    std::remove(cfg.c_str());
}

TEST_CASE("deterministic check output") {
    std::vector<std::string> args{"check", "--theorem", "rational", "--t",  "2",
                                  "--a",   "fiber:sigma", "--schedule", "geometric:10:1000"};
    auto r1 = invoke(args);
    auto r2 = invoke(args);
    CHECK(r1.code == 0);
    CHECK(r1.out == r2.out);
}

TEST_CASE("digits subcommand text output") {
    auto r = invoke({"digits", "--t", "2", "--g", "power:3", "--P", "100"});
    CHECK(r.code == 0);
    CHECK(r.out.find("reliable_limit=100") != std::string::npos);
    CHECK(r.out.find("27:1") != std::string::npos);
}

TEST_CASE("thread cap honors the environment variable") {
    setenv("SPARSE_SERIES_THREADS", "1", 1);
    CHECK(sparseseries::thread_cap() == 1);
    unsetenv("SPARSE_SERIES_THREADS");
    CHECK(sparseseries::thread_cap() >= 1);
}
