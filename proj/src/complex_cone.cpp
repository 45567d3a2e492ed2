#include "cone_gauge/complex_cone.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "cone_gauge/errors.hpp"

namespace cone_gauge::complex_cone {

namespace {

constexpr Complex kI{0.0, 1.0};

ComplexVector pairings(const ComplexCone& cone, const ComplexVector& u) {
  if (u.size() != cone.dim()) throw PreconditionError("complex cone: dimension mismatch");
  return cone.base().dual().cast<Complex>() * u;
}

bool colinear(const ComplexVector& x, const ComplexVector& y) {
  const double xn2 = x.squaredNorm();
  if (xn2 == 0.0 || y.squaredNorm() == 0.0) return true;
  const Complex c = x.dot(y) / xn2;  // conjugate-linear in x
  return (y - c * x).norm() <= 1e-12 * y.norm();
}

// Canonical representative of the complex line through u: the polarized
// vector x + i y, Euclidean-normalized. Invariant under u -> a u.
ComplexVector canonical(const PolarizedPoint& p) {
  ComplexVector v = p.x.cast<Complex>() + kI * p.y.cast<Complex>();
  return v / v.norm();
}

// Position on the real projective line as a doubled angle, 1 at pi/2.
double circle_angle(double t) { return std::isinf(t) ? kPi : 2.0 * std::atan(t); }

double wrap(double a) {
  a = std::fmod(a, 2.0 * kPi);
  return a < 0.0 ? a + 2.0 * kPi : a;
}

// Hilbert distance of -1 and 1 in the real trace of the slice: the arc of
// the real projective line around [-1, 1] left by every region. Absent when
// no region cuts the real line.
std::optional<double> real_trace_distance(const SliceDomain& s) {
  using hyperbolic::CanonicalRegion;
  using hyperbolic::GeneralizedDisc;
  double left = kInf, right = kInf;
  double a = 0.0, b = 0.0;
  auto consider = [&](double t) {
    const double phi = circle_angle(t);
    const double dl = wrap(-kPi / 2.0 - phi), dr = wrap(phi - kPi / 2.0);
    // A boundary point lies on the side it is reached from first.
    if (dl <= dr) {
      if (dl < left) left = dl, a = t;
    } else if (dr < right) {
      right = dr, b = t;
    }
  };
  for (const auto& r : s.regions) {
    const auto c = hyperbolic::canonicalize(r);
    if (c.kind != CanonicalRegion::Kind::kProper) continue;
    const GeneralizedDisc& d = c.disc;
    if (d.kind == GeneralizedDisc::Kind::kHalfPlane) {
      consider(kInf);
      if (d.normal.real() != 0.0) consider(d.offset / d.normal.real());
      continue;
    }
    const double h = d.radius * d.radius - d.center.imag() * d.center.imag();
    if (h <= 0.0) continue;
    consider(d.center.real() - std::sqrt(h));
    consider(d.center.real() + std::sqrt(h));
  }
  if (std::isinf(left) || std::isinf(right)) return std::nullopt;
  return hyperbolic::cross_ratio_distance(a, b);
}

hyperbolic::DistanceBracket bracket_for(const SliceDomain& s,
                                        const hyperbolic::PathSearchOptions& options) {
  using hyperbolic::CanonicalRegion;
  for (const auto& r : s.regions) {
    const auto c = hyperbolic::canonicalize(r);
    if (c.kind == CanonicalRegion::Kind::kEmpty ||
        (c.kind == CanonicalRegion::Kind::kProper &&
         (!(c.disc.clearance(-1.0) > 0.0) || !(c.disc.clearance(1.0) > 0.0)))) {
      // -1 or 1 on the boundary of the slice: infinite distance.
      return {kInf, kInf};
    }
  }
  return hyperbolic::domain_distance_bounds(s.regions, -1.0, 1.0, options);
}

}  // namespace

ComplexVector PolarizedPoint::recompose() const {
  return std::polar(1.0, theta) * (x.cast<Complex>() + kI * y.cast<Complex>());
}

bool membership(const ComplexCone& cone, const ComplexVector& u) {
  if (!u.allFinite()) return false;
  const ComplexVector p = pairings(cone, u);
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    for (Eigen::Index k = j + 1; k < p.size(); ++k) {
      const double re = (p[j] * std::conj(p[k])).real();
      if (re < -1e-12 * std::abs(p[j]) * std::abs(p[k])) return false;
    }
  }
  return true;
}

PolarizedPoint polarize(const ComplexCone& cone, const ComplexVector& u) {
  if (!membership(cone, u)) throw DomainError("polarize: vector is not in the complex cone");
  const ComplexVector p = pairings(cone, u);
  Eigen::Index first = -1;
  const double scale = p.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw DomainError("polarize: zero vector");
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (std::abs(p[k]) > 0.0) {
      first = k;
      break;
    }
  }
  // Phases relative to the first nonzero pairing all lie in [-pi/2, pi/2].
  double lo = 0.0, hi = 0.0;
  const Complex ref = std::conj(p[first]);
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (std::abs(p[k]) == 0.0) continue;
    const double phi = std::arg(p[k] * ref);
    lo = std::min(lo, phi);
    hi = std::max(hi, phi);
  }
  if (hi - lo > kPi / 2.0 + 1e-12) {
    throw InternalError("polarize: membership/polarization inconsistency");
  }
  PolarizedPoint out;
  out.theta = std::arg(p[first]) + 0.5 * (lo + hi);
  const ComplexVector v = std::polar(1.0, -out.theta) * u;
  out.x = v.real();
  out.y = v.imag();
  return out;
}

RotatedPair rotate_polarization(const ComplexCone& cone, const RealVector& x,
                                const RealVector& y, double delta) {
  const auto& base = cone.base();
  if (x.size() != base.dim() || y.size() != base.dim()) {
    throw PreconditionError("rotate_polarization: dimension mismatch");
  }
  const RealVector plus = x + y;
  const RealVector minus = x - y;
  if (!base.contains(plus) || !base.contains(minus)) {
    throw DomainError("rotate_polarization: x + y and x - y must lie in the cone");
  }
  const double d = real_cone::hilbert_metric(base, minus, plus).value;
  if (std::isinf(d)) throw DomainError("rotate_polarization: d(x - y, x + y) is infinite");
  if (!(delta >= d - 1e-12 * std::max(1.0, d))) {
    throw PreconditionError("rotate_polarization: delta below d(x - y, x + y)");
  }
  const RealVector lx = base.dual() * x;
  const RealVector ly = base.dual() * y;
  double lo = kInf, hi = -kInf;
  for (Eigen::Index k = 0; k < lx.size(); ++k) {
    if (lx[k] == 0.0 && ly[k] == 0.0) continue;
    const double psi = std::atan2(ly[k], lx[k]);
    lo = std::min(lo, psi);
    hi = std::max(hi, psi);
  }
  RotatedPair out;
  out.alpha = std::isfinite(lo) ? -0.5 * (lo + hi) : 0.0;
  if (y.isZero(0.0)) out.alpha = 0.0;
  const double c = std::cos(out.alpha), s = std::sin(out.alpha);
  out.x = c * x - s * y;
  out.y = s * x + c * y;
  return out;
}

double real_rescale(const real_cone::RealCone& cone, const RealVector& x1,
                    const RealVector& x2) {
  const auto d = real_cone::hilbert_metric(cone, x1, x2);
  if (std::isinf(d.value)) throw DomainError("real_rescale: infinite Hilbert distance");
  return std::sqrt(d.beta_xy / d.beta_yx);
}

SliceDomain slice_domain(const ComplexCone& cone, const ComplexVector& x,
                         const ComplexVector& y) {
  SliceDomain out;
  if (x.size() != cone.dim() || y.size() != cone.dim()) {
    throw PreconditionError("slice_domain: dimension mismatch");
  }
  if (colinear(x, y)) {
    out.colinear = true;
    return out;
  }
  const ComplexVector a = pairings(cone, x + y);
  const ComplexVector b = pairings(cone, x - y);
  const Eigen::Index m = a.size();
  out.regions.reserve(static_cast<std::size_t>(m * (m + 1) / 2));
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = j; k < m; ++k) {
      hyperbolic::ConstraintRegion r;
      r.quad = (b[j] * std::conj(b[k])).real();
      r.lin = b[j] * std::conj(a[k]) + std::conj(a[j]) * b[k];
      r.constant = (a[j] * std::conj(a[k])).real();
      out.regions.push_back(r);
    }
  }
  return out;
}

GaugeResult gauge(const ComplexCone& cone, const ComplexVector& x, const ComplexVector& y,
                  const hyperbolic::PathSearchOptions& options) {
  if (!membership(cone, x) || !membership(cone, y)) {
    throw DomainError("gauge: input is not in the complex cone");
  }
  const PolarizedPoint px = polarize(cone, x);
  const PolarizedPoint py = polarize(cone, y);
  GaugeResult out;
  const bool real_pair = px.y.norm() <= 1e-10 * px.x.norm() &&
                         py.y.norm() <= 1e-10 * py.x.norm();
  ComplexVector cx, cy;
  if (real_pair) {
    cx = (px.x / px.x.norm()).cast<Complex>();
    cy = (py.x / py.x.norm()).cast<Complex>();
  } else {
    cx = canonical(px);
    cy = canonical(py);
  }
  SliceDomain s = slice_domain(cone, cx, cy);
  if (s.colinear) {
    out.colinear = true;
    out.exact = 0.0;
    out.bracket = {0.0, 0.0};
    return out;
  }
  out.bracket = bracket_for(s, options);
  // A collapsed bracket pins the distance down. Otherwise, for real pairs the
  // slice is symmetric about the real axis and the gauge is the cross-ratio
  // distance of its real trace.
  if (out.bracket.lower == out.bracket.upper) {
    out.exact = out.bracket.lower;
  } else if (real_pair) {
    out.exact = real_trace_distance(s);
  }
  out.slice = std::move(s.regions);
  return out;
}

double projective_distance(const ComplexVector& x, const ComplexVector& y) {
  if (x.size() != y.size()) throw PreconditionError("projective_distance: dimension mismatch");
  const double xn = x.norm(), yn = y.norm();
  if (xn == 0.0 || yn == 0.0) throw DomainError("projective_distance: zero vector");
  const ComplexVector xh = x / xn;
  const ComplexVector yh = y / yn;
  const Complex ip = yh.dot(xh);  // conj(yh) . xh
  const Complex phase = std::abs(ip) > 0.0 ? ip / std::abs(ip) : Complex(1.0);
  return (xh - phase * yh).norm();
}

double sectional_aperture(const ComplexCone& cone, const RealVector& x, const RealVector& y,
                          int grid) {
  const auto& base = cone.base();
  const auto d = real_cone::hilbert_metric(base, x, y);
  if (!d.segment) return 1.0;  // a single ray
  // Boundary rays of span{x, y} cap C.
  auto ray = [&](double t) {
    RealVector v = std::isinf(t) ? RealVector(x - y) : RealVector((1 + t) * x + (1 - t) * y);
    if ((base.dual() * v).sum() < 0.0) v = -v;
    return v;
  };
  const RealVector x0 = ray(d.segment->first);
  const RealVector y0 = ray(d.segment->second);
  Eigen::Matrix2d g;
  g << x0.dot(x0), x0.dot(y0), y0.dot(x0), y0.dot(y0);
  // Restricted norm of m with <m, x0> = <m, y0> = 1: sqrt(w^T G^{-1} w).
  const Eigen::Vector2d w(1.0, 1.0);
  const double mnorm = std::sqrt(w.dot(g.ldlt().solve(w)));
  // u = c1 x0 + c2 y0 with Re(c1 conj c2) >= 0; parametrize c2 / c1 = r e^{i phi}.
  double best = 1.0;
  auto eval = [&](Complex c1, Complex c2) {
    const double un2 = std::norm(c1) * g(0, 0) + std::norm(c2) * g(1, 1) +
                       2.0 * (std::conj(c1) * c2).real() * g(0, 1);
    best = std::max(best, mnorm * std::sqrt(std::max(0.0, un2)) / std::abs(c1 + c2));
  };
  eval(1.0, 0.0);
  eval(0.0, 1.0);
  for (int i = 0; i < grid; ++i) {
    const double phi = -kPi / 2.0 + kPi * i / (grid - 1);
    for (int k = 1; k < grid - 1; ++k) {
      const double psi = 0.5 * kPi * k / (grid - 1);
      eval(std::cos(psi), std::sin(psi) * std::polar(1.0, phi));
    }
  }
  return best;
}

}  // namespace cone_gauge::complex_cone
