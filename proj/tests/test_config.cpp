#include "iflab/config.hpp"
#include "iflab/run.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace iflab;

namespace {

const char* kMinimal = R"({
  "gamma": 0.0, "dim": 1, "R": 1.0, "h": 0.03125,
  "boundary": {"kind": "radial_compat"}, "epsilon": 0.1
})";

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
    RunConfig c = parse_config(kMinimal);
    CHECK(c.gamma == 0.0);
    CHECK(c.eps_sequence.size() == 1);
    CHECK(c.solver.tol == 1e-10);
    CHECK(c.solver.damping_safety == 0.5);
    CHECK(c.params(0.1).delta ==
          doctest::Approx(0.5 * max_admissible_delta(0.0)).epsilon(1e-14));
}

TEST_CASE("delta above the admissible bound is rejected with the bound") {
    const char* bad = R"({"gamma": 0.0, "epsilon": 0.1, "dim": 1, "R": 1.0,
                          "h": 0.03125, "delta": 0.9})";
    try {
        parse_config(bad);
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("delta") != std::string::npos);
        CHECK(msg.find("0.34") != std::string::npos);  // computed bound echoed
    }
}

TEST_CASE("eps_sequence configures a continuation") {
    const char* cfg = R"({"gamma": 0.0, "eps_sequence": [0.1, 0.05, 0.025],
                          "dim": 1, "R": 1.0, "h": 0.03125})";
    RunConfig c = parse_config(cfg);
    CHECK(c.eps_sequence.size() == 3);
    CHECK_THROWS_AS(
        parse_config(R"({"gamma":0,"eps_sequence":[0.1,0.2],"dim":1,"R":1,"h":0.03125})"),
        std::invalid_argument);
}

TEST_CASE("unknown keys are rejected by name") {
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"gamma":0,"epsilon":0.1,"h":0.03125,"bogus":1})"),
        doctest::Contains("bogus"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_config(
            R"({"gamma":0,"epsilon":0.1,"h":0.03125,"solver":{"tolX":1}})"),
        doctest::Contains("tolX"), std::invalid_argument);
}

TEST_CASE("echo round-trips and the content hash is stable") {
    RunConfig c = parse_config(kMinimal);
    RunConfig c2 = parse_config(c.echo());
    CHECK(c.echo() == c2.echo());
    CHECK(c.content_hash() == c2.content_hash());
    CHECK(c.content_hash().size() == 16);
}

TEST_CASE("serial reruns produce byte-identical field dumps") {
    RunConfig c = parse_config(kMinimal);
    c.solver.tol = 1e-9;
    RunOutput a = run_solve(c);
    RunOutput b = run_solve(c);
    const char* pa = "/tmp/iflab_dump_a.csv";
    const char* pb = "/tmp/iflab_dump_b.csv";
    write_field_dump(a.field, pa);
    write_field_dump(b.field, pb);
    CHECK(slurp(pa) == slurp(pb));
    CHECK_FALSE(slurp(pa).empty());
    std::remove(pa);
    std::remove(pb);
}

TEST_CASE("summary echoes the resolved config") {
    RunConfig c = parse_config(kMinimal);
    c.solver.tol = 1e-9;
    RunOutput out = run_solve(c);
    const std::string dir = write_artifacts(out, "/tmp/iflab_cfg_test_run");
    const std::string summary = slurp(dir + "/summary.json");
    CHECK(summary.find("\"config\"") != std::string::npos);
    CHECK(summary.find("\"damping_safety\"") != std::string::npos);
    CHECK(summary.find("\"alpha\"") != std::string::npos);
    CHECK(slurp(dir + "/field.csv").rfind("x,u", 0) == 0);
}

TEST_CASE("verify-radial and verify-barrier run outputs") {
    RunConfig c = parse_config(kMinimal);
    RunOutput vb = run_verify_barrier(c);
    CHECK(vb.all_passed);
    CHECK(vb.reports.size() == 3);  // eta in {1, 2, 10}
    RunOutput vr = run_verify_radial(c);
    CHECK(vr.all_passed);
}
