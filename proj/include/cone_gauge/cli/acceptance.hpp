#pragma once

// The desk-scale reproduction suite: eleven seeded property checks, each
// reporting a verdict and the measured values behind it.

#include <string>
#include <string_view>
#include <vector>

namespace cone_gauge::acceptance {

/// Thresholds of the checks. Kept adjustable so that a tampered value can be
/// seen to flip a verdict.
struct Tolerances {
  double dual_form = 1e-9;
  double embedding = 1e-8;
  double bracket_quality = 4.0;
  double bracket_quality_share = 0.95;
  double contraction = 1e-8;
  double pf_gap = 1e-6;
  double flip = 1e-10;
  double refinement = 1e-6;
  double deflated_residual = 1e-10;
  double slope = 0.05;
  double exp_ratio_slack = 1e-12;
  double aperture = 1e-8;
  double time_limit_s = 60.0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Measured values, deterministic for fixed seeds.
  std::string detail;
  /// Non-blocking observations.
  std::string note;
  double seconds = 0.0;
};

struct CriterionInfo {
  int id;
  std::string_view name;
};

const std::vector<CriterionInfo>& criteria();

/// True when `filter` is empty, equals the id, or is a substring of the name.
bool matches(const CriterionInfo& info, std::string_view filter);

CriterionResult run_criterion(int id, const Tolerances& tol = {});

std::vector<CriterionResult> run_all(std::string_view filter = {}, const Tolerances& tol = {});

/// One line, "PASS  3 birkhoff-contraction  ...". Timing is appended only
/// when asked for, so the default output is byte-stable.
std::string format(const CriterionResult& result, bool with_timing = false);

}  // namespace cone_gauge::acceptance
