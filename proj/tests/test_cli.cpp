#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <numbers>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tameproj/io.hpp"

using namespace tameproj;
namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        const auto d = fs::temp_directory_path() / ("tameproj_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

int run(const std::string& args) {
    const std::string cmd = std::string(TAMEPROJ_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json(const std::string& p) { return Json::parse(slurp(p)); }

}  // namespace

TEST_CASE("generate lattice") {
    REQUIRE(run("generate --kind lattice --dim 2 --field real --basis e1,e2 --radius 5 --out " + path("z2.jsonl")) ==
            0);
    const auto ps = read_point_set(fs::path(path("z2.jsonl")));
    CHECK(ps.size() == 81);
    std::ifstream in(path("z2.jsonl"));
    std::string header;
    std::getline(in, header);
    const auto h = Json::parse(header);
    CHECK(h["run"]["command"] == "generate");
    CHECK(h["run"]["config"]["radius"] == 5.0);
    CHECK(h["run"]["version"] == kToolVersion);
}

TEST_CASE("generate power and explicit basis") {
    REQUIRE(run("generate --kind power --field real --dim 3 --rho 2 --count 100 --seed 4 --out " +
                path("pow.jsonl")) == 0);
    const auto ps = read_point_set(fs::path(path("pow.jsonl")));
    REQUIRE(ps.size() == 100);
    for (std::size_t k = 0; k < ps.size(); ++k) {
        CHECK(norm(ps.point(k)) == doctest::Approx(std::sqrt(double(k + 1))).epsilon(1e-12));
    }
    REQUIRE(run("generate --kind lattice --dim 2 --field real --basis 1:0,0.5:2 --radius 3 --out " +
                path("skew.jsonl")) == 0);
    CHECK(read_point_set(fs::path(path("skew.jsonl"))).size() > 0);
}

TEST_CASE("generate usage errors exit 2") {
    CHECK(run("generate --kind lattice --dim 2 --field real --basis e1,e2 --out " + path("x.jsonl")) == 2);
    CHECK(run("generate --kind nope --out " + path("x.jsonl")) == 2);
    CHECK(run("generate --kind lattice --dim 2 --field quaternion --basis e1 --radius 2 --out " + path("x.jsonl")) ==
          2);
    CHECK(run("generate --kind power --dim 2 --rho 2 --count 10") == 2);
    CHECK(run("frobnicate") == 2);
}

TEST_CASE("missing input exits 4") {
    CHECK(run("project --input " + path("does_not_exist.jsonl") + " --d 1 --out " + path("p")) == 4);
}

TEST_CASE("generate perturbed and embed") {
    REQUIRE(run("generate --kind lattice --dim 2 --field complex --basis e1 --radius 50 --out " + path("line.jsonl")) ==
            0);
    REQUIRE(run("generate --kind perturbed --input " + path("line.jsonl") + " --lambda 0.3 --K 1 --seed 3 --out " +
                path("pert.jsonl")) == 0);
    CHECK(read_point_set(fs::path(path("pert.jsonl"))).size() == 101);
    CHECK(fs::exists(path("pert.jsonl.pairing.csv")));
    REQUIRE(run("generate --kind embed --input " + path("line.jsonl") + " --out " + path("emb.jsonl")) == 0);
    CHECK(read_point_set(fs::path(path("emb.jsonl"))).n() == 3);
    CHECK(run("generate --kind perturbed --input " + path("line.jsonl") + " --lambda 1.5 --K 1 --out " +
              path("bad.jsonl")) == 2);
}

TEST_CASE("project") {
    REQUIRE(run("generate --kind lattice --dim 2 --field complex --basis e1 --radius 100 --out " +
                path("rank1.jsonl")) == 0);
    REQUIRE(run("project --input " + path("rank1.jsonl") + " --d 1 --trials 8 --seed 5 --out " + path("proj")) == 0);
    const auto summary = read_json(path("proj.json"));
    CHECK(summary["verdict"] == "DiscreteLooking");
    CHECK(summary["best_g"].size() == 2);
    CHECK(summary["run"]["seed"] == 5);
    CHECK(slurp(path("proj.csv")).rfind("trial,score_at_R_max,verdict\n", 0) == 0);
    CHECK(slurp(path("proj.separation.csv")).rfind("trial,truncation_radius,min_gap,crowding_count\n", 0) == 0);

    CHECK(run("project --input " + path("rank1.jsonl") + " --d 2 --out " + path("proj2")) == 2);

    REQUIRE(run("generate --kind lattice --dim 2 --field complex --basis e1 --radius 1 --out " + path("tiny.jsonl")) ==
            0);
    CHECK(run("project --input " + path("tiny.jsonl") + " --d 1 --trials 2 --schedule 0.1,0.2,0.3 --out " +
              path("tiny")) == 3);
}

TEST_CASE("series on Z radius 100") {
    REQUIRE(run("generate --kind lattice --dim 1 --field real --basis e1 --radius 100 --out " + path("z1.jsonl")) == 0);
    REQUIRE(run("series --input " + path("z1.jsonl") + " --s 2,3 --out " + path("ser")) == 0);
    const auto summary = read_json(path("ser.json"));
    // oracle: 2 * sum_{k=1}^{100} k^-2
    double oracle = 0.0;
    for (int k = 100; k >= 1; --k) oracle += 2.0 / (double(k) * k);
    CHECK(summary["results"][0]["final_partial_sum"].get<double>() == doctest::Approx(oracle).epsilon(1e-13));
    // Euler-Maclaurin tail of sum m^-2 beyond 100
    const double tail = 1.0 / 100 - 1.0 / (2 * 100.0 * 100) + 1.0 / (6 * 100.0 * 100 * 100);
    CHECK(oracle == doctest::Approx(std::numbers::pi * std::numbers::pi / 3 - 2 * tail).epsilon(1e-10));
    CHECK(slurp(path("ser.csv")).rfind("K,radius,partial_sum,s\n", 0) == 0);
}

TEST_CASE("capmeasure") {
    REQUIRE(run("capmeasure --k 1 --m 1 --eps 0.5 --samples 1000000 --seed 2 --out " + path("cap")) == 0);
    const auto summary = read_json(path("cap.json"));
    const double mc = summary["rows"][0]["mc_estimate"];
    const double se = summary["rows"][0]["mc_stderr"];
    CHECK(std::abs(mc - 1.0 / 3.0) <= 4.0 * se);
    CHECK(slurp(path("cap.csv")).rfind("k,m,epsilon,samples,mc_estimate,mc_stderr,exact_value\n", 0) == 0);
    CHECK(run("capmeasure --k 1 --m 1 --eps 1.5 --samples 1000 --out " + path("cap2")) == 2);
}

TEST_CASE("split") {
    REQUIRE(run("generate --kind power --field complex --dim 3 --rho 2 --count 300 --seed 1 --out " +
                path("c3.jsonl")) == 0);
    REQUIRE(run("split --input " + path("c3.jsonl") + " --out " + path("sp")) == 0);
    const auto summary = read_json(path("sp.json"));
    CHECK(summary["forward_ok"] == true);
    CHECK(summary["backward_ok"] == true);
    const auto paired = read_paired(path("sp"));
    CHECK(paired.target.size() == 300);
    CHECK(run("split --input " + path("z2.jsonl") + " --out " + path("sp2")) == 2);
}

TEST_CASE("haartest and skr") {
    REQUIRE(run("haartest --field complex --n 3 --samples 20000 --seed 1 --out " + path("haar.json")) == 0);
    const auto h = read_json(path("haar.json"));
    CHECK(h["within_4_stderr"] == true);
    CHECK(h["max_unitarity_residual"].get<double>() <= 1e-12);

    REQUIRE(run("generate --kind power --field complex --dim 2 --rho 2 --count 20 --seed 1 --out " +
                path("c2.jsonl")) == 0);
    REQUIRE(run("skr --input " + path("c2.jsonl") + " --r 1 --d 1 --trials 5000 --seed 1 --out " + path("skr")) == 0);
    CHECK(slurp(path("skr.csv")).rfind("point_index,norm,", 0) == 0);
    CHECK(run("skr --input " + path("c2.jsonl") + " --r 1 --d 2 --out " + path("skr2")) == 2);
}

TEST_CASE("same seed gives byte-identical files") {
    for (const char* tag : {"a", "b"}) {
        REQUIRE(run("project --input " + path("rank1.jsonl") + " --d 1 --trials 4 --seed 9 --out " +
                    path(std::string("det_") + tag)) == 0);
    }
    for (const char* ext : {".csv", ".separation.csv"}) {
        CHECK(slurp(path(std::string("det_a") + ext)) == slurp(path(std::string("det_b") + ext)));
    }
    // the JSON summary echoes the output prefix, which differs here
    auto ja = read_json(path("det_a.json"));
    auto jb = read_json(path("det_b.json"));
    ja["run"]["config"].erase("out");
    jb["run"]["config"].erase("out");
    CHECK(ja == jb);
}
