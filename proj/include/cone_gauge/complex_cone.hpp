#pragma once

// Canonical complexification of a polyhedral real cone:
// C_C = {u : Re <l_j, u> conj(<l_k, u>) >= 0 for all j, k}.

#include <optional>
#include <vector>

#include "cone_gauge/hyperbolic.hpp"
#include "cone_gauge/real_cone.hpp"
#include "cone_gauge/types.hpp"

namespace cone_gauge::complex_cone {

class ComplexCone {
 public:
  explicit ComplexCone(real_cone::RealCone base) : base_(std::move(base)) {}
  static ComplexCone positive_orthant(int n) {
    return ComplexCone(real_cone::RealCone::positive_orthant(n));
  }

  const real_cone::RealCone& base() const { return base_; }
  int dim() const { return base_.dim(); }

 private:
  real_cone::RealCone base_;
};

/// u = e^{i theta} (x + i y) with x + y and x - y in the real cone.
struct PolarizedPoint {
  double theta = 0.0;
  RealVector x;
  RealVector y;

  ComplexVector recompose() const;
};

struct RotatedPair {
  RealVector x;
  RealVector y;
  double alpha = 0.0;
};

struct SliceDomain {
  std::vector<hyperbolic::ConstraintRegion> regions;
  bool colinear = false;
};

struct GaugeResult {
  hyperbolic::DistanceBracket bracket;
  /// Set when the bracket collapses, and for real pairs from the real trace
  /// of the slice.
  std::optional<double> exact;
  std::vector<hyperbolic::ConstraintRegion> slice;
  bool colinear = false;
};

bool membership(const ComplexCone& cone, const ComplexVector& u);

PolarizedPoint polarize(const ComplexCone& cone, const ComplexVector& u);

/// Rotates (x, y) by the angle that centres the phases of <l, x + i y>, so
/// that |<l, y'>| <= tanh(delta / 4) <l, x'> for every dual generator.
RotatedPair rotate_polarization(const ComplexCone& cone, const RealVector& x,
                                const RealVector& y, double delta);

/// sqrt(beta(x1, x2) / beta(x2, x1)).
double real_rescale(const real_cone::RealCone& cone, const RealVector& x1,
                    const RealVector& x2);

/// {lambda : (1 + lambda) x + (1 - lambda) y in C_C}, one constraint per
/// generator pair j <= k.
SliceDomain slice_domain(const ComplexCone& cone, const ComplexVector& x,
                         const ComplexVector& y);

GaugeResult gauge(const ComplexCone& cone, const ComplexVector& x, const ComplexVector& y,
                  const hyperbolic::PathSearchOptions& options = {});

/// min over phases of || x/|x| - e^{i phi} y/|y| ||, Euclidean norm.
double projective_distance(const ComplexVector& x, const ComplexVector& y);

/// Aperture of the complex section span{x, y} cap C_C for a real pair, with
/// respect to the functional equal to 1 on both boundary rays of the section
/// and the Euclidean norm. Grid-based lower estimate.
double sectional_aperture(const ComplexCone& cone, const RealVector& x, const RealVector& y,
                          int grid = 121);

}  // namespace cone_gauge::complex_cone
