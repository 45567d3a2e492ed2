#pragma once

// Domination of a complex matrix M by a positive matrix P on the standard
// cone, and the spectral-gap certificate that follows from it.

#include <array>
#include <optional>
#include <string>

#include "cone_gauge/types.hpp"

namespace cone_gauge::domination {

/// Entry indices (row, col) of the two factors attaining an extremum.
using EntryPair = std::array<int, 4>;

struct DominationConstants {
  /// min Re(q_a conj(q_b)) over all entry pairs, q = M / P entrywise.
  double alpha = 0.0;
  /// max |q_a|^2.
  double beta = 0.0;
  /// max |Im(q_a conj(q_b))| over all entry pairs.
  double gamma = 0.0;
  EntryPair alpha_witness{};
  std::array<int, 2> beta_witness{};
  EntryPair gamma_witness{};
};

struct GapCertificate {
  bool certified = false;
  double condition_lhs = 0.0;  // gamma cosh(delta_p / 2)
  double condition_rhs = 0.0;  // alpha
  double delta_p = 0.0;
  double delta_c_upper = kInf;
  std::optional<double> eta;
  /// 1 - eta without cancellation.
  std::optional<double> eta_complement;
  /// Radius of the neighbourhood of [-1, 1] inside every image slice, at t = 0.
  double rho0 = 0.0;
  int n0 = 1;
  RealVector x0;
  /// C in |<l, M u>| <= C <l, x0> |u|_inf.
  double aux_constant = 0.0;
  /// x0 + M B(0, r) lies in the complex cone for r = inner_radius.
  double inner_radius = 0.0;
  DominationConstants constants;
  std::string notes;
};

DominationConstants extract_constants(const ComplexMatrix& m, const RealMatrix& p);

GapCertificate certify_dominated(const ComplexMatrix& m, const RealMatrix& p);

/// Verdict gamma cosh(delta_p / 2) < alpha and, when it holds, the slice
/// diameter bound and contraction factor. Leaves n0, x0 and the auxiliary
/// constants to the caller.
GapCertificate certificate_from_constants(const DominationConstants& constants,
                                          double delta_p);

/// certify_dominated(a, ones).
GapCertificate complex_pf_certificate(const ComplexMatrix& a);

struct ExpRatio {
  Complex w;
  double arg_bound = 0.0;
  double mod_sq_lower = 1.0;
  double mod_sq_upper = 1.0;
};

/// w = e^{-i Im z1} (e^{z1} - e^{z2}) / (e^{Re z1} - e^{Re z2}) with the
/// bounds |Arg w| <= s/t and 1 <= |w|^2 <= 1 + (s/t)^2, where
/// t = Re(z1 - z2) and s = Im(z1 - z2).
ExpRatio exp_ratio(Complex z1, Complex z2);

}  // namespace cone_gauge::domination
