#include "cone_gauge/real_cone.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cone_gauge/errors.hpp"
#include "cone_gauge/hyperbolic.hpp"
#include "cone_gauge/parallel.hpp"
#include "cone_gauge/random.hpp"

namespace cone_gauge::real_cone {

namespace {

constexpr long kMaxRaySubsets = 2'000'000;

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kMaxRaySubsets) return r;
  }
  return r;
}

// Extreme rays: directions where dim-1 independent facets are active.
RealMatrix enumerate_rays(const RealMatrix& dual) {
  const int n = static_cast<int>(dual.cols());
  const int m = static_cast<int>(dual.rows());
  if (n == 1) {
    RealMatrix one(1, 1);
    one(0, 0) = dual(0, 0) > 0 ? 1.0 : -1.0;
    for (int k = 0; k < m; ++k) {
      if (dual(k, 0) * one(0, 0) < 0) {
        throw PreconditionError("RealCone: cone is {0}");
      }
    }
    return one;
  }
  if (binomial(m, n - 1) > kMaxRaySubsets) {
    throw PreconditionError("RealCone: too many facets to enumerate rays; pass primal generators");
  }
  std::vector<RealVector> rays;
  std::vector<int> idx(n - 1);
  for (int i = 0; i < n - 1; ++i) idx[i] = i;
  RealMatrix sub(n - 1, n);
  while (true) {
    for (int i = 0; i < n - 1; ++i) sub.row(i) = dual.row(idx[i]);
    Eigen::FullPivLU<RealMatrix> lu(sub);
    if (lu.rank() == n - 1) {
      RealVector v = lu.kernel().col(0);
      v /= v.norm();
      const RealVector vals = dual * v;
      const double tol = 1e-10 * dual.rowwise().norm().maxCoeff();
      double sign = 0.0;
      if ((vals.array() >= -tol).all()) sign = 1.0;
      else if ((vals.array() <= tol).all()) sign = -1.0;
      if (sign != 0.0) {
        v *= sign;
        bool dup = false;
        for (const auto& r : rays) {
          if ((r - v).norm() < 1e-9) {
            dup = true;
            break;
          }
        }
        if (!dup) rays.push_back(v);
      }
    }
    int i = n - 2;
    while (i >= 0 && idx[i] == m - (n - 1) + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < n - 1; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (rays.empty()) throw PreconditionError("RealCone: no extreme rays found");
  RealMatrix out(n, static_cast<int>(rays.size()));
  for (std::size_t j = 0; j < rays.size(); ++j) out.col(static_cast<int>(j)) = rays[j];
  return out;
}

struct Pairing {
  RealVector lx;
  RealVector ly;
};

Pairing pair_with(const RealCone& cone, const RealVector& x, const RealVector& y) {
  if (x.size() != cone.dim() || y.size() != cone.dim()) {
    throw PreconditionError("real cone: vector dimension mismatch");
  }
  if (x.isZero(0.0) || y.isZero(0.0)) throw DomainError("real cone: zero vector");
  if (!cone.contains(x) || !cone.contains(y)) {
    throw DomainError("real cone: vector outside the cone");
  }
  Pairing p{cone.dual() * x, cone.dual() * y};
  // Clamp roundoff-level negatives at the boundary.
  p.lx = p.lx.cwiseMax(0.0);
  p.ly = p.ly.cwiseMax(0.0);
  return p;
}

double beta_from(const RealVector& lx, const RealVector& ly) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < lx.size(); ++k) {
    if (lx[k] > 0.0) {
      best = std::max(best, ly[k] / lx[k]);
    } else if (ly[k] > 0.0) {
      return kInf;
    }
  }
  return best;
}

double circle_angle(double t) { return std::isinf(t) ? kPi : 2.0 * std::atan(t); }

double wrap(double x) {
  x = std::fmod(x, 2.0 * kPi);
  return x < 0.0 ? x + 2.0 * kPi : x;
}

void check_positive(const RealMatrix& a, const char* what) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (!(a(i, j) > 0.0) || !std::isfinite(a(i, j))) {
        throw DomainError(std::string(what) + ": entry (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") is not strictly positive");
      }
    }
  }
}

}  // namespace

RealCone::RealCone(RealMatrix dual_generators, std::optional<RealMatrix> primal_generators)
    : dual_(std::move(dual_generators)) {
  if (dual_.cols() == 0 || dual_.rows() == 0) {
    throw PreconditionError("RealCone: empty generator set");
  }
  if (!dual_.allFinite()) throw PreconditionError("RealCone: non-finite generator");
  Eigen::FullPivLU<RealMatrix> lu(dual_);
  if (lu.rank() != dual_.cols()) {
    throw PreconditionError("RealCone: dual generators do not span; cone contains a line");
  }
  if (primal_generators) {
    if (primal_generators->rows() != dual_.cols() || primal_generators->cols() == 0) {
      throw PreconditionError("RealCone: primal generator shape mismatch");
    }
    primal_ = std::move(*primal_generators);
    for (Eigen::Index j = 0; j < primal_.cols(); ++j) {
      if (!contains(primal_.col(j))) {
        throw PreconditionError("RealCone: primal generator " + std::to_string(j) +
                                " lies outside the cone");
      }
    }
  } else {
    primal_ = enumerate_rays(dual_);
  }
}

RealCone RealCone::positive_orthant(int n) {
  if (n <= 0) throw PreconditionError("positive_orthant: dimension must be positive");
  RealCone c(RealMatrix::Identity(n, n), RealMatrix::Identity(n, n));
  c.orthant_ = true;
  return c;
}

bool RealCone::contains(const RealVector& x) const {
  if (x.size() != dim()) return false;
  const double xn = x.norm();
  for (Eigen::Index k = 0; k < dual_.rows(); ++k) {
    const double v = dual_.row(k).dot(x);
    if (v < -1e-12 * dual_.row(k).norm() * xn) return false;
  }
  return true;
}

double birkhoff_beta(const RealCone& cone, const RealVector& x, const RealVector& y) {
  const Pairing p = pair_with(cone, x, y);
  return beta_from(p.lx, p.ly);
}

HilbertDistance hilbert_metric(const RealCone& cone, const RealVector& x,
                               const RealVector& y) {
  const Pairing p = pair_with(cone, x, y);
  HilbertDistance d;
  d.beta_xy = beta_from(p.lx, p.ly);
  d.beta_yx = beta_from(p.ly, p.lx);
  if (std::isinf(d.beta_xy) || std::isinf(d.beta_yx)) {
    d.value = kInf;
  } else {
    d.value = std::max(0.0, std::log(d.beta_xy) + std::log(d.beta_yx));
  }

  // Boundary of the projective segment through x and y, from the root
  // t_k = -(lx + ly) / (lx - ly) of each facet: the first root met moving
  // left from -1 and moving right from 1.
  int left = -1, right = -1;
  double best_left = kInf, best_right = kInf;
  std::vector<double> roots(p.lx.size(), 0.0);
  for (Eigen::Index k = 0; k < p.lx.size(); ++k) {
    const double a = p.lx[k] + p.ly[k];
    const double b = p.lx[k] - p.ly[k];
    if (a == 0.0 && b == 0.0) continue;
    roots[k] = (b == 0.0) ? kInf : -a / b;
    const double th = circle_angle(roots[k]);
    const double l = wrap(-kPi / 2.0 - th);
    const double r = wrap(th - kPi / 2.0);
    if (l < best_left) {
      best_left = l;
      left = static_cast<int>(k);
    }
    if (r < best_right) {
      best_right = r;
      right = static_cast<int>(k);
    }
  }
  // Colinear inputs make every facet root the same point (or none).
  const bool colinear = left < 0 || d.value == 0.0;
  if (!colinear) {
    const double a = p.ly[left] == 0.0 ? -1.0 : roots[left];
    const double b = p.lx[right] == 0.0 ? 1.0 : roots[right];
    d.segment = std::make_pair(a, b);
    const double cr = hyperbolic::cross_ratio_distance(a, b);
    if (std::isinf(cr) != std::isinf(d.value)) {
      throw InternalError("hilbert_metric: beta form and cross-ratio form disagree on finiteness");
    }
    if (std::isfinite(cr)) {
      const double eps = 1e-15;
      double tol = 1e-9 * std::max(1.0, d.value);
      if (std::isfinite(a)) tol += eps * (std::abs(a) + 1.0) / std::abs(a + 1.0);
      if (std::isfinite(b)) tol += eps * (std::abs(b) + 1.0) / std::abs(b - 1.0);
      if (std::abs(cr - d.value) > tol) {
        throw InternalError("hilbert_metric: beta form and cross-ratio form disagree");
      }
    }
  }
  return d;
}

double image_diameter(const RealMatrix& a) {
  check_positive(a, "image_diameter");
  const RealMatrix la = a.array().log().matrix();
  const auto n = static_cast<std::size_t>(a.cols());
  // d(A e_j, A e_l) = max_i D_i - min_i D_i with D = log A_j - log A_l.
  const auto partial = parallel::map_blocks<double>(n, [&](std::size_t b, std::size_t e) {
    double best = 0.0;
    for (std::size_t j = b; j < e; ++j) {
      for (std::size_t l = j + 1; l < n; ++l) {
        const auto diff = (la.col(static_cast<int>(j)) - la.col(static_cast<int>(l))).array();
        best = std::max(best, diff.maxCoeff() - diff.minCoeff());
      }
    }
    return best;
  });
  return *std::max_element(partial.begin(), partial.end());
}

double image_diameter(const RealCone& cone, const RealMatrix& a) {
  if (cone.is_orthant()) return image_diameter(a);
  if (a.rows() != cone.dim() || a.cols() != cone.dim()) {
    throw PreconditionError("image_diameter: matrix shape does not match the cone");
  }
  const RealMatrix images = a * cone.primal();
  for (Eigen::Index j = 0; j < images.cols(); ++j) {
    if (!cone.contains(images.col(j)) || images.col(j).isZero(0.0)) {
      throw DomainError("image_diameter: map does not send the cone into itself");
    }
  }
  double best = 0.0;
  for (Eigen::Index j = 0; j < images.cols(); ++j) {
    for (Eigen::Index l = j + 1; l < images.cols(); ++l) {
      best = std::max(best, hilbert_metric(cone, images.col(j), images.col(l)).value);
    }
  }
  return best;
}

BirkhoffCertificate birkhoff_certificate(const RealMatrix& a) {
  BirkhoffCertificate c;
  c.diameter = image_diameter(a);
  c.eta = hyperbolic::eta_real_cone(c.diameter);
  c.ratio_bound = c.eta;
  c.entry_min = a.minCoeff();
  c.entry_max = a.maxCoeff();
  c.entry_bound = (c.entry_max - c.entry_min) / (c.entry_max + c.entry_min);
  const double via_tanh = std::tanh(0.5 * std::log(c.entry_max / c.entry_min));
  if (std::abs(via_tanh - c.entry_bound) > 1e-12) {
    throw InternalError("birkhoff_certificate: entry-range identity failed");
  }
  return c;
}

double real_dominated_diameter(const RealMatrix& a, const RealMatrix& p, double alpha,
                               double beta) {
  if (!(alpha > 0.0) || !(alpha <= beta) || !std::isfinite(beta)) {
    throw PreconditionError("real_dominated_diameter: need 0 < alpha <= beta");
  }
  if (a.rows() != p.rows() || a.cols() != p.cols()) {
    throw PreconditionError("real_dominated_diameter: shape mismatch");
  }
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double tol = 1e-12 * std::max(std::abs(a(i, j)), std::abs(p(i, j)));
      if (a(i, j) < alpha * p(i, j) - tol || a(i, j) > beta * p(i, j) + tol) {
        throw PreconditionError("real_dominated_diameter: alpha P <= A <= beta P fails at (" +
                                std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  return 2.0 * std::log(beta / alpha) + image_diameter(p);
}

double vector_norm(const RealVector& v, Norm norm) {
  switch (norm) {
    case Norm::kL1: return v.lpNorm<1>();
    case Norm::kL2: return v.norm();
    case Norm::kLinf: return v.lpNorm<Eigen::Infinity>();
  }
  throw InternalError("vector_norm: unknown norm");
}

double dual_norm(const RealVector& m, Norm norm) {
  switch (norm) {
    case Norm::kL1: return m.lpNorm<Eigen::Infinity>();
    case Norm::kL2: return m.norm();
    case Norm::kLinf: return m.lpNorm<1>();
  }
  throw InternalError("dual_norm: unknown norm");
}

double aperture(const RealCone& cone, const RealVector& m, int samples, Norm norm,
                std::uint64_t seed) {
  if (m.size() != cone.dim()) throw PreconditionError("aperture: dimension mismatch");
  if (m.isZero(0.0)) throw PreconditionError("aperture: functional is zero");
  if (samples < 0) throw PreconditionError("aperture: negative sample count");
  const double mn = dual_norm(m, norm);
  const RealMatrix& gens = cone.primal();
  auto ratio = [&](const RealVector& u) {
    const double pairing = std::abs(m.dot(u));
    const double un = vector_norm(u, norm);
    if (pairing <= 1e-14 * m.norm() * u.norm()) return kInf;
    return mn * un / pairing;
  };
  double best = 1.0;
  for (Eigen::Index j = 0; j < gens.cols(); ++j) best = std::max(best, ratio(gens.col(j)));
  Sampler rng(seed);
  RealVector w(gens.cols());
  for (int s = 0; s < samples && std::isfinite(best); ++s) {
    for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = rng.exponential();
    best = std::max(best, ratio(gens * w));
  }
  return best;
}

}  // namespace cone_gauge::real_cone
