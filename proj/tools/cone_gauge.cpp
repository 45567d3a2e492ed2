// cone-gauge: certificates, gauges and the reproduction suite from the
// command line.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cone_gauge/cli/acceptance.hpp"
#include "cone_gauge/cli/codec.hpp"
#include "cone_gauge/cli/jobs.hpp"

using namespace cone_gauge::cli;

namespace {

int emit(const Report& report, const std::string& out) {
  const Json j = to_json(report);
  validate_report(j);
  const std::string text = dump(j);
  if (out.empty() || out == "-") {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream file(out);
  if (!file) throw ValidationError(out + ": cannot write file");
  file << text;
  return kExitOk;
}

int certify(const std::string& path, const std::string& out, bool oracle,
            const CLI::Option* seed_opt, std::uint64_t seed) {
  Json j = read_json_file(path);
  JobSpec job = parse_job(j);
  if (oracle) job.oracle = true;
  if (seed_opt->count() > 0) job.seed = seed;
  return emit(run_job(job), out);
}

int gauge(const std::string& cone_path, const std::string& x_path, const std::string& y_path,
          const std::string& out) {
  Json payload = {{"cone", read_json_file(cone_path)},
                  {"pairs", Json::array({{{"x", read_json_file(x_path)},
                                          {"y", read_json_file(y_path)}}})}};
  const JobSpec job = parse_job({{"kind", "gauge"}, {"payload", std::move(payload)}});
  return emit(run_job(job), out);
}

int reproduce(const std::string& filter) {
  int failed = 0, ran = 0;
  for (const auto& info : cone_gauge::acceptance::criteria()) {
    if (!cone_gauge::acceptance::matches(info, filter)) continue;
    const auto r = cone_gauge::acceptance::run_criterion(info.id);
    std::cout << cone_gauge::acceptance::format(r) << std::endl;
    ++ran;
    if (!r.passed) ++failed;
  }
  if (ran == 0) throw ValidationError("no criterion matches '" + filter + "'");
  std::cout << (ran - failed) << "/" << ran << " criteria passed" << std::endl;
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral-gap certificates and cone gauges"};
  app.require_subcommand(1);

  auto* certify_cmd = app.add_subcommand("certify", "Run a job file and write its report");
  std::string job_path, out;
  bool oracle = false;
  std::uint64_t seed = 0;
  certify_cmd->add_option("job", job_path, "Job file")->required();
  certify_cmd->add_option("-o,--output", out, "Report file (default: stdout)");
  certify_cmd->add_flag("--oracle", oracle, "Add the eigenvalue cross-check");
  auto* seed_opt = certify_cmd->add_option("--seed", seed, "Seed for any sampling");

  auto* reproduce_cmd = app.add_subcommand("reproduce", "Run the acceptance suite");
  std::string filter;
  reproduce_cmd->add_option("--filter", filter, "Criterion number or name fragment");

  auto* gauge_cmd = app.add_subcommand("gauge", "Gauge distance of two points of a complex cone");
  std::string cone_path, x_path, y_path;
  gauge_cmd->add_option("--cone", cone_path, "Cone file")->required();
  gauge_cmd->add_option("--x", x_path, "First point")->required();
  gauge_cmd->add_option("--y", y_path, "Second point")->required();
  gauge_cmd->add_option("-o,--output", out, "Report file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*certify_cmd) return certify(job_path, out, oracle, seed_opt, seed);
    if (*gauge_cmd) return gauge(cone_path, x_path, y_path, out);
    return reproduce(filter);
  } catch (...) {
    return report_exception();
  }
}
