#pragma once

// Polyhedral real cones C = {x : <l_k, x> >= 0 for all k} and the Hilbert
// projective metric, Birkhoff contraction and image diameters on them.

#include <cstdint>
#include <optional>
#include <utility>

#include "cone_gauge/types.hpp"

namespace cone_gauge::real_cone {

enum class Norm { kL1, kL2, kLinf };

class RealCone {
 public:
  /// Rows of `dual_generators` are the covectors l_k. Primal generators
  /// (columns) are enumerated from the dual description when omitted.
  explicit RealCone(RealMatrix dual_generators,
                    std::optional<RealMatrix> primal_generators = std::nullopt);

  static RealCone positive_orthant(int n);

  int dim() const { return static_cast<int>(dual_.cols()); }
  int num_dual() const { return static_cast<int>(dual_.rows()); }
  const RealMatrix& dual() const { return dual_; }
  /// Extreme rays as columns.
  const RealMatrix& primal() const { return primal_; }
  bool is_orthant() const { return orthant_; }

  /// <l_k, x> >= -1e-12 |l_k| |x| for every k.
  bool contains(const RealVector& x) const;

 private:
  RealMatrix dual_;
  RealMatrix primal_;
  bool orthant_ = false;
};

struct HilbertDistance {
  double value = 0.0;
  double beta_xy = 1.0;
  double beta_yx = 1.0;
  /// Boundary parameters (a, b) of {t : (1+t)x + (1-t)y in C or -C}; absent
  /// for colinear inputs.
  std::optional<std::pair<double, double>> segment;
};

/// inf{lambda > 0 : lambda x - y in C}.
double birkhoff_beta(const RealCone& cone, const RealVector& x, const RealVector& y);

HilbertDistance hilbert_metric(const RealCone& cone, const RealVector& x,
                               const RealVector& y);

/// Projective diameter of A(R^n_+ \ 0) for a strictly positive matrix.
double image_diameter(const RealMatrix& a);
/// Same for a linear map of a general cone into itself, over generator pairs.
double image_diameter(const RealCone& cone, const RealMatrix& a);

struct BirkhoffCertificate {
  double diameter = 0.0;
  double eta = 0.0;
  double ratio_bound = 0.0;
  double entry_min = 0.0;
  double entry_max = 0.0;
  /// (max - min) / (max + min), the cruder bound from the entry range.
  double entry_bound = 0.0;
};

BirkhoffCertificate birkhoff_certificate(const RealMatrix& a);

/// 2 log(beta/alpha) + diam P(C*), given alpha P <= A <= beta P entrywise.
double real_dominated_diameter(const RealMatrix& a, const RealMatrix& p,
                               double alpha, double beta);

/// Lower estimate of sup ||m||_* ||u|| / |<m, u>| over the cone, from the
/// generators and `samples` random combinations of them.
double aperture(const RealCone& cone, const RealVector& m, int samples,
                Norm norm = Norm::kL1, std::uint64_t seed = 1);

double vector_norm(const RealVector& v, Norm norm);
double dual_norm(const RealVector& m, Norm norm);

}  // namespace cone_gauge::real_cone
