#include "cone_gauge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cone_gauge/errors.hpp"
#include "cone_gauge/random.hpp"

namespace cone_gauge::operators {

namespace {

struct Iteration {
  ComplexVector e;
  Complex lambda;
  int iterations = 0;
  std::vector<double> diffs;
};

Iteration iterate(const std::function<ComplexVector(const ComplexVector&)>& apply,
                  const ComplexVector& start, const PowerOptions& options,
                  const char* what) {
  const Eigen::Index n = start.size();
  const double mnorm = 1.0 / std::sqrt(static_cast<double>(n));
  Iteration it;
  const double sn = start.norm();
  if (!(sn > 0.0) || !std::isfinite(sn)) {
    throw PreconditionError(std::string(what) + ": start vector must be nonzero and finite");
  }
  it.e = start / sn;
  for (int k = 1; k <= options.max_iter; ++k) {
    const ComplexVector te = apply(it.e);
    if (te.size() != n) throw PreconditionError(std::string(what) + ": apply changed dimension");
    const Complex me = it.e.sum() / static_cast<double>(n);
    if (std::abs(me) <= 1e-14 * mnorm * it.e.norm()) {
      throw ConvergenceError(std::string(what) +
                             ": functional degeneracy, <m, e_n> vanished at step " +
                             std::to_string(k));
    }
    it.lambda = (te.sum() / static_cast<double>(n)) / me;
    if (!(std::abs(it.lambda) > 0.0) || !std::isfinite(std::abs(it.lambda))) {
      throw ConvergenceError(std::string(what) + ": <m, T e_n> vanished or overflowed at step " +
                             std::to_string(k));
    }
    ComplexVector next = te / it.lambda;
    next /= next.norm();
    const double diff = (next - it.e).norm();
    it.diffs.push_back(diff);
    it.e = std::move(next);
    it.iterations = k;
    if (diff < options.tol) {
      const ComplexVector te2 = apply(it.e);
      it.lambda = te2.sum() / it.e.sum();
      return it;
    }
  }
  std::ostringstream msg;
  msg << what << ": no convergence in " << options.max_iter << " steps; last |e_n - e_n+1| = "
      << it.diffs.back() << ", fitted log-slope = " << log_slope(it.diffs);
  throw ConvergenceError(msg.str());
}

ComplexMatrix random_block(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  Sampler rng(seed);
  ComplexMatrix q(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) q(i, j) = Complex(rng.normal(), rng.normal());
  }
  return q;
}

// Orthonormal basis of the numerical range of z: columns whose pivoted-QR
// diagonal falls below `drop` are discarded.
ComplexMatrix orthonormal_range(const ComplexMatrix& z, double drop) {
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(z);
  const Eigen::Index k = std::min(z.rows(), z.cols());
  Eigen::Index rank = 0;
  while (rank < k && std::abs(qr.matrixQR()(rank, rank)) > drop) ++rank;
  return qr.householderQ() * ComplexMatrix::Identity(z.rows(), rank);
}

}  // namespace

LinearOperator LinearOperator::from_matrix(ComplexMatrix a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw PreconditionError("LinearOperator: matrix must be square and nonempty");
  }
  LinearOperator op;
  op.dim = static_cast<int>(a.rows());
  // The closures own copies so that `op` can be moved freely.
  op.apply = [a](const ComplexVector& u) -> ComplexVector { return a * u; };
  op.apply_transpose = [a](const ComplexVector& u) -> ComplexVector {
    return a.transpose() * u;
  };
  op.matrix = std::move(a);
  return op;
}

double log_slope(const std::vector<double>& diffs, double floor, int skip) {
  std::vector<double> xs, ys;
  for (std::size_t k = static_cast<std::size_t>(std::max(0, skip)); k < diffs.size(); ++k) {
    if (diffs[k] > floor) {
      xs.push_back(static_cast<double>(k));
      ys.push_back(std::log(diffs[k]));
    }
  }
  if (xs.size() < 2) return -kInf;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

SpectralReport power_eigentriple(const LinearOperator& op, const ComplexVector& start,
                                 const PowerOptions& options) {
  if (op.dim <= 0 || start.size() != op.dim) {
    throw PreconditionError("power_eigentriple: start vector dimension mismatch");
  }
  if (!op.apply || !op.apply_transpose) {
    throw PreconditionError("power_eigentriple: operator actions missing");
  }
  const Iteration right = iterate(op.apply, start, options, "power_eigentriple");
  const Iteration left = iterate(op.apply_transpose, ComplexVector::Ones(op.dim), options,
                                 "power_eigentriple (transpose)");
  SpectralReport r;
  r.lambda1 = right.lambda;
  r.h = right.e;
  r.iterations = right.iterations;
  r.diff_history = right.diffs;
  r.decay_slope = log_slope(right.diffs);
  if (std::abs(left.lambda - right.lambda) > 1e-6 * std::abs(right.lambda)) {
    throw ConvergenceError("power_eigentriple: left and right iterations found different eigenvalues");
  }
  const Complex pairing = (left.e.transpose() * r.h)(0);
  if (std::abs(pairing) <= 1e-12) {
    throw ConvergenceError("power_eigentriple: left and right eigenvectors nearly annihilate");
  }
  r.cstar = left.e / pairing;
  r.residual = (op.apply(r.h) - r.lambda1 * r.h).norm();
  return r;
}

SpectralReport top_two_ratio(const LinearOperator& op, const ComplexVector& start,
                             const TopTwoOptions& options) {
  SpectralReport r = power_eigentriple(op, start, options.power);
  const Eigen::Index n = op.dim;
  const double scale = std::abs(r.lambda1);
  if (n == 1) return r;

  // T (I - h cstar^T), densely when possible.
  std::optional<ComplexMatrix> dense;
  if (op.matrix) dense = *op.matrix - (*op.matrix * r.h) * r.cstar.transpose();
  auto deflated = [&](const ComplexMatrix& q) -> ComplexMatrix {
    if (dense) return *dense * q;
    ComplexMatrix out(n, q.cols());
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      const ComplexVector u = q.col(j);
      const Complex c = (r.cstar.transpose() * u)(0);
      out.col(j) = op.apply(u - c * r.h);
    }
    return out;
  };

  const Eigen::Index p = std::min<Eigen::Index>(n - 1, std::max(1, options.block));
  // Directions whose image is at roundoff level relative to lambda1 are
  // dropped, so nilpotent parts of the deflated map collapse the block.
  const double drop = 1e-13 * scale;
  ComplexMatrix q = orthonormal_range(random_block(n, p, options.seed), 0.0);
  double prev = -1.0;
  double change = kInf;
  int stable = 0;
  double ritz_residual = 0.0;
  double est = 0.0;
  Complex dominant{0.0, 0.0};
  bool accepted = false;
  bool done = false;
  for (int it = 1; it <= options.max_iter && !done; ++it) {
    r.deflated_iterations = it;
    const ComplexMatrix z = deflated(q);
    const ComplexMatrix next = orthonormal_range(z, drop);
    if (next.cols() == 0) {
      est = 0.0;
      dominant = 0.0;
      ritz_residual = z.norm();
      accepted = done = true;
      break;
    }
    // Rayleigh-Ritz. For strongly non-normal deflated maps, Ritz values of a
    // subspace that is not yet invariant roam the numerical range; only
    // pairs with a small residual count as eigenvalue estimates.
    const ComplexMatrix b = q.adjoint() * z;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(b);
    if (es.info() != Eigen::Success) throw ConvergenceError("top_two_ratio: Ritz step failed");
    accepted = false;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      const Complex theta = es.eigenvalues()[k];
      const ComplexVector y = es.eigenvectors().col(k);
      const ComplexVector v = q * y;
      const double res = (z * y - theta * v).norm() / v.norm();
      if (res > 1e-10 * scale) continue;
      if (!accepted || std::abs(theta) > est) {
        est = std::abs(theta);
        dominant = theta;
        ritz_residual = res;
        accepted = true;
      }
    }
    if (accepted) {
      change = std::abs(est - prev);
      stable = change <= 1e-9 * scale ? stable + 1 : 0;
      prev = est;
      if (stable >= 3) done = true;
    }
    q = next;
  }
  if (!accepted) {
    throw ConvergenceError("top_two_ratio: no Ritz pair of the deflated map converged in " +
                           std::to_string(options.max_iter) + " steps");
  }
  if (!done && change > 1e-8 * scale) {
    throw ConvergenceError("top_two_ratio: deflated iteration did not settle");
  }
  r.lambda2 = dominant;
  r.lambda2_abs = est;
  r.ratio = est / scale;
  r.residual = std::max(r.residual, ritz_residual);
  return r;
}

}  // namespace cone_gauge::operators
