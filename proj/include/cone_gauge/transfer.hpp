#pragma once

// Transfer operators M_g phi(y) = sum_{f(x) = y} e^{g(x)} phi(x) for the
// circle maps f(x) = k x mod 1, their trigonometric collocation, and the
// Lipschitz cone family {phi : phi(y) >= e^{-sigma d(y, y')} phi(y')}.

#include <functional>
#include <utility>
#include <vector>

#include "cone_gauge/domination.hpp"
#include "cone_gauge/types.hpp"

namespace cone_gauge::operators {

/// min(|x - y|, 1 - |x - y|) after reduction mod 1.
double circle_distance(double x, double y);

/// g(x) = c0 + c1 cos(2 pi x) + c2 sin(2 pi x) + i (d0 + d1 cos(2 pi x) + d2 sin(2 pi x)).
struct TrigWeight {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double d0 = 0.0, d1 = 0.0, d2 = 0.0;

  Complex operator()(double x) const;
  /// Exact Lipschitz constants and oscillations for the circle metric.
  double lip_re() const;
  double lip_im() const;
  double osc_re() const;
  double osc_im() const;
  /// Multiplies every coefficient except c0 and d0 by kappa.
  TrigWeight scaled(double kappa) const;
};

struct TransferOperatorSpec {
  int degree = 2;
  std::function<Complex(double)> g;
  /// Declared Lip(Re g), Lip(Im g) and osc(Im g).
  double a = 0.0;
  double b = 0.0;
  double theta = 0.0;
  double diameter = 0.5;

  static TransferOperatorSpec from_trig(int degree, const TrigWeight& w);

  double rho() const { return 1.0 / degree; }
  /// Checks the degree, that the declared constants dominate sampled
  /// estimates on a 2^10 grid, and the contraction of paired branches.
  void validate() const;
};

/// Preimages of y and y' paired along the shortest lift, so that
/// d(x_j, x'_j) <= d(y, y') / degree.
std::vector<std::pair<double, double>> paired_preimages(int degree, double y, double y2);

struct RpfCertificate {
  domination::GapCertificate cert;
  double sigma = 0.0;
  double sigma_prime = 0.0;
  /// Upper bound on delta_p / 2.
  double half_delta_p = 0.0;
  double s0 = 0.0;
  double simplified_lhs = 0.0;
  double sharp_lhs = kInf;
  bool simplified_certified = false;
  bool sharp_certified = false;
};

/// Simplified and sharp gap conditions with sigma = 2 a rho / (1 - rho) + 1 / (rho D).
RpfCertificate rpf_certificate(const TransferOperatorSpec& spec);

/// Collocation matrix on the nodes n / size (size even): exact on the grid
/// where a preimage is a node, trigonometric interpolation otherwise.
ComplexMatrix transfer_matrix(const TransferOperatorSpec& spec, int size);

struct TransferApplyResult {
  ComplexVector values;
  bool interpolated = false;
  /// phi carries noticeable energy near the Nyquist frequency, so the
  /// interpolated values are unreliable.
  bool nonsmooth = false;
};

TransferApplyResult transfer_apply(const TransferOperatorSpec& spec, const ComplexVector& phi);

/// (M_g phi)(y) evaluated at the exact preimages.
Complex transfer_apply_function(const TransferOperatorSpec& spec,
                                const std::function<Complex(double)>& phi, double y);

/// phi_i >= 0 and phi_i >= e^{-sigma d(y_i, y_j)} phi_j for samples on y_i = i / n.
bool lipschitz_cone_membership(const RealVector& phi, double sigma);

}  // namespace cone_gauge::operators
