#pragma once

// Integral operators M_g phi(x) = h(x) int e^{g(x,y)} phi(y) m(y) dy on [0, 1],
// discretized by the composite midpoint rule.

#include <functional>

#include "cone_gauge/domination.hpp"
#include "cone_gauge/types.hpp"

namespace cone_gauge::operators {

struct IntegralOperatorSpec {
  RealVector nodes;
  RealVector weights;
  RealVector h;
  RealVector m;
  /// g(nodes[i], nodes[j]).
  ComplexMatrix g;

  /// Midpoint nodes (i + 1/2) / n with weights 1 / n.
  static IntegralOperatorSpec midpoint(int n, const std::function<double(double)>& h,
                                       const std::function<double(double)>& m,
                                       const std::function<Complex(double, double)>& g);

  int size() const { return static_cast<int>(nodes.size()); }
  /// Throws DomainError when a weight or sample is not strictly positive, or
  /// shapes disagree.
  void validate() const;
  /// osc(Im g) over the node grid.
  double theta() const;
  /// osc(Re g) over the node grid.
  double lambda_osc() const;
};

/// K_ij = h_i e^{g_ij} m_j w_j.
ComplexMatrix discretize_integral(const IntegralOperatorSpec& spec);

/// P_ij = h_i m_j w_j, the rank-one comparison operator.
RealMatrix integral_comparison(const IntegralOperatorSpec& spec);

/// Certified iff theta < pi/4 and tan(theta) < exp(-2 Lambda). Constants
/// alpha = e^{2 min Re g} cos(theta), gamma = e^{2 max Re g} sin(theta),
/// beta = e^{2 max Re g}, with delta_p = 0.
domination::GapCertificate jentzsch_certificate(const IntegralOperatorSpec& spec);

}  // namespace cone_gauge::operators
