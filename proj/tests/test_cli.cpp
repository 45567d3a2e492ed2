#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "cone_gauge/cli/acceptance.hpp"
#include "cone_gauge/cli/codec.hpp"
#include "cone_gauge/cli/jobs.hpp"
#include "cone_gauge/errors.hpp"

using namespace cone_gauge;
using namespace cone_gauge::cli;

namespace {

const std::string kSource = CONE_GAUGE_SOURCE_DIR;
const std::string kTool = CONE_GAUGE_TOOL;

Report run(const Json& j) { return run_job(parse_job(j)); }

Json strip_timing(Json j) {
  j.erase("timing_ms");
  return j;
}

int exit_status(const std::string& args) {
  const int raw = std::system((kTool + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = "cli_test_" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("scalar and matrix encoding") {
  CHECK(encode_real(kInf) == "inf");
  CHECK(encode_real(-kInf) == "-inf");
  CHECK(decode_real(Json("inf"), "x") == kInf);
  CHECK(decode_real(Json(0.25), "x") == 0.25);
  CHECK_THROWS_AS(decode_real(Json("infinity"), "x"), ValidationError);
  CHECK(encode_complex(Complex(1.5, -2.0)) == Json::array({1.5, -2.0}));
  CHECK(decode_complex(Json(3.0), "z") == Complex(3.0, 0.0));
  CHECK_THROWS_AS(decode_complex(Json::array({1, 2, 3}), "z"), ValidationError);

  ComplexMatrix a(2, 3);
  a << Complex(1, 2), 3, Complex(0.1, -0.3), 4, Complex(5, 6), 7;
  const Json j = encode_matrix(a);
  // Row-major nesting.
  CHECK(j.size() == 2);
  CHECK(j[0].size() == 3);
  CHECK(j[1][1] == Json::array({5.0, 6.0}));
  CHECK(decode_complex_matrix(j, "a") == a);
  CHECK_THROWS_AS(decode_complex_matrix(Json::parse("[[1, 2], [3]]"), "a"), ValidationError);
  try {
    decode_real_matrix(Json::parse("[[1, 2], [3, \"x\"]]"), "job/payload/comparison");
    FAIL("bad entry accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("job/payload/comparison/1/1") != std::string::npos);
  }
}

TEST_CASE("job validation") {
  CHECK_THROWS_AS(parse_job(Json::parse(R"({"kind": "spectrum", "payload": {}})")),
                  ValidationError);
  CHECK_THROWS_AS(parse_job(Json::parse(R"({"kind": "matrix-pf"})")), ValidationError);
  CHECK_THROWS_AS(parse_job(Json::parse(R"({"kind": "matrix-pf", "payload": {"matrix": [[1]]},
                                            "seed": -3})")),
                  ValidationError);
  CHECK_THROWS_AS(parse_job(Json::parse(R"({"kind": "matrix-pf", "payload": {"matrix": [[1]]},
                                            "extra": 1})")),
                  ValidationError);
  CHECK_THROWS_AS(parse_job(Json::parse(R"({"kind": "matrix-pf",
                                            "payload": {"matrix": [[1, 2]]}})")),
                  ValidationError);
  CHECK_THROWS_AS(parse_job(Json::parse(R"({"kind": "dominated",
                                            "payload": {"matrix": [[1]], "comparison": [[0]]}})")),
                  ValidationError);
  CHECK_THROWS_AS(parse_job(Json::parse(R"({"kind": "rpf",
                                            "payload": {"degree": 2, "weight": {"e1": 1}}})")),
                  ValidationError);
  CHECK_THROWS_AS(parse_job(Json::parse(R"({"kind": "jentzsch",
                                            "payload": {"n": 4, "g_modes": [], "h": [1, 1, 1, 0]}})")),
                  ValidationError);
  CHECK_THROWS_AS(parse_job(Json::parse(R"({"kind": "gauge", "payload": {"cone": {"orthant": 2},
                                            "pairs": [{"x": [1, 1, 1], "y": [1, 1]}]}})")),
                  ValidationError);
  const auto job = parse_job(Json::parse(R"({"kind": "matrix-pf", "payload": {"matrix": [[1]]}})"));
  CHECK(!job.oracle);
  CHECK(job.seed == 0);
  CHECK(job.to_json()["oracle"] == false);
}

TEST_CASE("matrix-pf job on ones") {
  const auto r = run(Json::parse(
      R"({"kind": "matrix-pf", "oracle": true, "payload": {"matrix": [[1,1,1],[1,1,1],[1,1,1]]}})"));
  REQUIRE(r.certificate.has_value());
  CHECK(r.certificate->certified);
  REQUIRE(r.spectral.has_value());
  CHECK(r.spectral->ratio == 0.0);
  CHECK(std::abs(r.spectral->lambda1 - 3.0) < 1e-12);
}

TEST_CASE("rpf job without weight") {
  const auto r = run(Json::parse(
      R"({"kind": "rpf", "oracle": true, "payload": {"degree": 2, "weight": {}}})"));
  REQUIRE(r.certificate.has_value());
  CHECK(r.certificate->certified);
  REQUIRE(r.spectral.has_value());
  CHECK(r.spectral->lambda1 == Complex(2.0, 0.0));
  REQUIRE(r.rpf.has_value());
  CHECK(r.rpf->simplified_lhs == 0.0);
}

TEST_CASE("jentzsch job") {
  const auto r = run(read_json_file(kSource + "/jobs/jentzsch.json"));
  REQUIRE(r.certificate.has_value());
  CHECK(r.certificate->certified);
  REQUIRE(r.spectral.has_value());
  CHECK(r.spectral->ratio < 1.0);
}

TEST_CASE("gauge and hilbert jobs") {
  const auto g = run(read_json_file(kSource + "/jobs/gauge.json"));
  REQUIRE(g.distances.size() == 2);
  REQUIRE(g.distances[0].exact.has_value());
  CHECK(*g.distances[0].exact == doctest::Approx(std::log(4.0)));
  const auto h = run(read_json_file(kSource + "/jobs/hilbert.json"));
  REQUIRE(h.distances.size() == 2);
  CHECK(*h.distances[0].exact == doctest::Approx(std::log(3.0)));
  CHECK(*h.distances[0].beta_xy == doctest::Approx(1.5));
}

TEST_CASE("reports round-trip and re-validate") {
  for (const char* name : {"matrix-pf-ones", "matrix-pf-rotated", "dominated", "jentzsch",
                           "rpf-desk", "rpf-flat", "gauge", "hilbert"}) {
    CAPTURE(name);
    const auto r = run(read_json_file(kSource + "/jobs/" + name + ".json"));
    const Json j = to_json(r);
    CHECK_NOTHROW(validate_report(j));
    const std::string text = dump(j);
    const Json parsed = Json::parse(text);
    CHECK(dump(to_json(report_from_json(parsed))) == text);
  }
}

TEST_CASE("identical jobs give identical reports") {
  for (const char* name : {"matrix-pf-rotated", "rpf-desk", "gauge"}) {
    CAPTURE(name);
    const Json job = read_json_file(kSource + "/jobs/" + name + ".json");
    CHECK(dump(strip_timing(to_json(run(job)))) == dump(strip_timing(to_json(run(job)))));
  }
}

TEST_CASE("report validation rejects inconsistent reports") {
  Json j = to_json(run(read_json_file(kSource + "/jobs/matrix-pf-rotated.json")));
  Json bad = j;
  bad["spectral"]["ratio"] = 1.0;
  CHECK_THROWS_AS(validate_report(bad), ValidationError);
  bad = j;
  bad["version"] = "0.0.1";
  CHECK_THROWS_AS(validate_report(bad), ValidationError);
  bad = j;
  bad.erase("distances");
  CHECK_THROWS_AS(validate_report(bad), ValidationError);
  bad = j;
  bad["certificate"]["delta_c_upper"] = "infinity";
  CHECK_THROWS_AS(validate_report(bad), ValidationError);
}

TEST_CASE("exit codes") {
  CHECK(exit_status("certify " + kSource + "/jobs/matrix-pf-ones.json") == 0);
  // Uncertified is still a successful run.
  CHECK(exit_status("certify " + kSource + "/jobs/rpf-desk.json") == 0);
  CHECK(exit_status("certify does-not-exist.json") == 2);
  CHECK(exit_status("certify " + temp_file("broken.json", "{\"kind\": ")) == 2);
  CHECK(exit_status("certify " + temp_file("outside.json", R"({"kind": "gauge", "payload":
        {"cone": {"orthant": 2}, "pairs": [{"x": [1, -1], "y": [1, 1]}]}})")) == 2);
  // <m, T e> = 0 for the rotation: the iteration cannot start.
  CHECK(exit_status("certify --oracle " + temp_file("rotation.json", R"({"kind": "matrix-pf",
        "payload": {"matrix": [[0, -1], [1, 0]]}})")) == 3);
  CHECK(exit_status("certify") == 2);
  const std::string out = "cli_test_report.json";
  std::remove(out.c_str());
  CHECK(exit_status("certify " + kSource + "/jobs/hilbert.json -o " + out) == 0);
  CHECK_NOTHROW(validate_report(read_json_file(out)));
  const std::string in = kSource + "/jobs/gauge-inputs/";
  CHECK(exit_status("gauge --cone " + in + "cone.json --x " + in + "x.json --y " + in +
                    "y.json") == 0);
  CHECK(exit_status("reproduce --filter exp-ratio") == 0);
  CHECK(exit_status("reproduce --filter no-such-criterion") == 2);
}

TEST_CASE("seed and oracle flags override the job") {
  const std::string out = "cli_test_seeded.json";
  CHECK(exit_status("certify " + kSource + "/jobs/gauge.json --oracle --seed 9 -o " + out) == 0);
  const Json r = read_json_file(out);
  CHECK(r["job"]["seed"] == 9);
  CHECK(r["job"]["oracle"] == true);
}

TEST_CASE("reproduction output is stable and sensitive to tolerances") {
  const auto a = acceptance::run_criterion(1);
  const auto b = acceptance::run_criterion(1);
  CHECK(a.passed);
  CHECK(acceptance::format(a) == acceptance::format(b));

  acceptance::Tolerances tampered;
  tampered.exp_ratio_slack = -1.0;  // demands a slack of at least 1
  const auto t = acceptance::run_criterion(10, tampered);
  CHECK(!t.passed);
  CHECK(t.detail.find("min slack = ") != std::string::npos);
  CHECK(acceptance::run_criterion(10).passed);

  CHECK(acceptance::matches(acceptance::criteria()[2], "3"));
  CHECK(acceptance::matches(acceptance::criteria()[2], "birkhoff"));
  CHECK(!acceptance::matches(acceptance::criteria()[2], "rpf"));
}
