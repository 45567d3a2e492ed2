#pragma once

// Leading eigentriple by cone iteration and the top-two eigenvalue oracle.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cone_gauge/types.hpp"

namespace cone_gauge::operators {

/// A linear map on C^dim given by its action and the action of its
/// transpose (not the adjoint).
struct LinearOperator {
  int dim = 0;
  std::function<ComplexVector(const ComplexVector&)> apply;
  std::function<ComplexVector(const ComplexVector&)> apply_transpose;
  /// Dense representation, when available; used for block products.
  std::optional<ComplexMatrix> matrix;

  static LinearOperator from_matrix(ComplexMatrix a);
};

struct PowerOptions {
  double tol = 1e-12;
  int max_iter = 10000;
};

struct SpectralReport {
  Complex lambda1{0.0, 0.0};
  ComplexVector h;      // unit Euclidean norm
  ComplexVector cstar;  // sum_i cstar_i h_i = 1
  Complex lambda2{0.0, 0.0};
  double lambda2_abs = 0.0;
  double ratio = 0.0;
  int iterations = 0;
  int deflated_iterations = 0;
  double residual = 0.0;
  /// |e_n - e_{n+1}| for every step of the right iteration.
  std::vector<double> diff_history;
  /// Least-squares slope of log |e_n - e_{n+1}| over the pre-roundoff range;
  /// -inf when the iteration converged within two steps.
  double decay_slope = 0.0;
};

/// e_{n+1} = (T e_n / lambda_n) / |T e_n / lambda_n| with
/// lambda_n = <m, T e_n> / <m, e_n> for the fixed functional m = (1, ..., 1)/n.
/// Fills lambda1, h, cstar, iterations, residual and the decay record.
SpectralReport power_eigentriple(const LinearOperator& op, const ComplexVector& start,
                                 const PowerOptions& options = {});

struct TopTwoOptions {
  PowerOptions power;
  int block = 12;
  int max_iter = 2000;
  std::uint64_t seed = 7;
};

/// power_eigentriple followed by block subspace iteration on the deflated
/// action u -> T(u - h <cstar, u>) for |lambda_2|.
SpectralReport top_two_ratio(const LinearOperator& op, const ComplexVector& start,
                             const TopTwoOptions& options = {});

/// Slope of the least-squares line through (n, log d_n) for the entries of
/// `diffs` above `floor`, skipping the first `skip` steps.
double log_slope(const std::vector<double>& diffs, double floor = 1e-11, int skip = 2);

}  // namespace cone_gauge::operators
