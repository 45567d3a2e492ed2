#pragma once

// Job files: {"kind": ..., "payload": {...}, "oracle": bool, "seed": int}.
//
//   matrix-pf  {"matrix": complex matrix}
//   dominated  {"matrix": complex matrix, "comparison": real matrix}
//   jentzsch   {"n": grid size, "g": complex n x n samples | "g_modes": [...],
//               "h": n reals, "m": n reals}   (h, m default to 1)
//              g_modes entries {"p": int, "q": int, "c": complex} give
//              g(x, y) = sum c exp(2 pi i (p x + q y)).
//   rpf        {"degree": int, "weight": {"c0".."c2", "d0".."d2"}, "collocation": even int}
//   gauge      {"cone": cone, "pairs": [{"x": complex vector, "y": complex vector}]}
//   hilbert    {"cone": cone, "pairs": [{"x": real vector, "y": real vector}]}
//
// A cone is {"orthant": n} or {"dual": real matrix whose rows are the facets}.

#include <cstdint>
#include <string>

#include "cone_gauge/cli/codec.hpp"
#include "cone_gauge/real_cone.hpp"

namespace cone_gauge::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitValidation = 2, kExitConvergence = 3 };

struct JobSpec {
  std::string kind;
  Json payload;
  bool oracle = false;
  std::uint64_t seed = 0;

  /// Normalized echo with every default filled in.
  Json to_json() const;
};

/// Checks the envelope and the payload of the kind; throws ValidationError.
JobSpec parse_job(const Json& j);

real_cone::RealCone parse_cone(const Json& j, const std::string& where);

/// Runs the job. Input errors surface as ValidationError, numerical failures
/// as ConvergenceError.
Report run_job(const JobSpec& job);

/// Maps the exception currently being handled to an exit code and writes a
/// diagnostic to stderr.
int report_exception();

}  // namespace cone_gauge::cli
