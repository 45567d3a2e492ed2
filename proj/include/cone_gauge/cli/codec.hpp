#pragma once

// JSON encoding of jobs and reports. Complex scalars are [re, im], matrices
// row-major nested arrays, and non-finite reals the strings "inf" / "-inf".

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cone_gauge/domination.hpp"
#include "cone_gauge/spectral.hpp"
#include "cone_gauge/types.hpp"

namespace cone_gauge::cli {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

/// Malformed job, report or input file. Carries a JSON-pointer-like path.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json encode_real(double v);
double decode_real(const Json& j, const std::string& where);

Json encode_complex(Complex z);
/// Accepts [re, im] or a plain real.
Complex decode_complex(const Json& j, const std::string& where);

Json encode_vector(const RealVector& v);
Json encode_vector(const ComplexVector& v);
RealVector decode_real_vector(const Json& j, const std::string& where);
ComplexVector decode_complex_vector(const Json& j, const std::string& where);

Json encode_matrix(const RealMatrix& a);
Json encode_matrix(const ComplexMatrix& a);
RealMatrix decode_real_matrix(const Json& j, const std::string& where);
ComplexMatrix decode_complex_matrix(const Json& j, const std::string& where);

/// Rpf-specific quantities reported next to the certificate.
struct RpfDetails {
  double sigma = 0.0;
  double sigma_prime = 0.0;
  double half_delta_p = 0.0;
  double s0 = 0.0;
  double simplified_lhs = 0.0;
  double sharp_lhs = 0.0;
  bool simplified_certified = false;
  bool sharp_certified = false;
};

/// One distance of a gauge or hilbert job. For hilbert jobs lower, upper and
/// exact coincide and the Birkhoff coefficients are filled in.
struct DistanceRecord {
  double lower = 0.0;
  double upper = kInf;
  std::optional<double> exact;
  bool colinear = false;
  std::optional<double> beta_xy;
  std::optional<double> beta_yx;
};

struct Report {
  std::string version = kVersion;
  Json job;
  std::optional<domination::GapCertificate> certificate;
  std::optional<RpfDetails> rpf;
  /// diff_history is not serialized.
  std::optional<operators::SpectralReport> spectral;
  std::vector<DistanceRecord> distances;
  double timing_ms = 0.0;
};

Json to_json(const Report& r);
/// Validates first; throws ValidationError.
Report report_from_json(const Json& j);

/// Structural and semantic checks: required fields and types, version,
/// and certified + spectral => spectral.ratio < 1.
void validate_report(const Json& j);

/// Sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

Json read_json_file(const std::string& path);

}  // namespace cone_gauge::cli
