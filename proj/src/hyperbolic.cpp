#include "cone_gauge/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cone_gauge/errors.hpp"

namespace cone_gauge::hyperbolic {

namespace {

// 2 artanh(rho) given rho and 1 - rho^2 computed without cancellation.
double distance_from_pseudo(double rho, double one_minus_rho2) {
  if (rho == 0.0) return 0.0;
  if (rho < 0.5) return 2.0 * std::atanh(rho);
  if (one_minus_rho2 <= 0.0) return kInf;
  return 2.0 * std::log1p(rho) - std::log(one_minus_rho2);
}

// Disc distance from points w with known 1 - |w|^2.
double disc_distance_with(Complex w1, double s1, Complex w2, double s2) {
  const Complex denom = 1.0 - std::conj(w1) * w2;
  const double dn = std::abs(denom);
  if (dn == 0.0) return kInf;
  const double rho = std::min(1.0, std::abs(w1 - w2) / dn);
  return distance_from_pseudo(rho, s1 * s2 / (dn * dn));
}

double wrap_two_pi(double x) {
  const double two_pi = 2.0 * kPi;
  x = std::fmod(x, two_pi);
  if (x < 0.0) x += two_pi;
  return x;
}

double circle_angle(double x) {
  if (std::isinf(x)) return kPi;
  return 2.0 * std::atan(x);
}

// log|x - 1| - log|x + 1|, with the point at infinity giving 0.
double log_ratio(double x) {
  if (std::isinf(x)) return 0.0;
  return std::log(std::abs(x - 1.0)) - std::log(std::abs(x + 1.0));
}

}  // namespace

double disc_distance(Complex z1, Complex z2) {
  const double n1 = std::abs(z1);
  const double n2 = std::abs(z2);
  if (!(n1 < 1.0) || !(n2 < 1.0)) {
    throw DomainError("disc_distance: point not inside the unit disc");
  }
  return disc_distance_with(z1, (1.0 - n1) * (1.0 + n1), z2,
                            (1.0 - n2) * (1.0 + n2));
}

GeneralizedDisc GeneralizedDisc::disc(Complex center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw PreconditionError("GeneralizedDisc: radius must be positive");
  }
  GeneralizedDisc g;
  g.kind = Kind::kDisc;
  g.center = center;
  g.radius = radius;
  return g;
}

GeneralizedDisc GeneralizedDisc::disc_complement(Complex center, double radius) {
  GeneralizedDisc g = disc(center, radius);
  g.kind = Kind::kDiscComplement;
  return g;
}

GeneralizedDisc GeneralizedDisc::half_plane(Complex normal, double offset) {
  const double n = std::abs(normal);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw PreconditionError("GeneralizedDisc: half-plane normal must be nonzero");
  }
  GeneralizedDisc g;
  g.kind = Kind::kHalfPlane;
  g.normal = normal / n;
  g.offset = offset;
  return g;
}

double GeneralizedDisc::clearance(Complex z) const {
  switch (kind) {
    case Kind::kDisc:
      return radius - std::abs(z - center);
    case Kind::kDiscComplement:
      return std::abs(z - center) - radius;
    case Kind::kHalfPlane:
      return (std::conj(normal) * z).real() - offset;
  }
  throw InternalError("GeneralizedDisc: unknown kind");
}

Complex GeneralizedDisc::to_unit_disc(Complex z) const {
  switch (kind) {
    case Kind::kDisc:
      return (z - center) / radius;
    case Kind::kDiscComplement:
      return radius / (z - center);
    case Kind::kHalfPlane: {
      const Complex w = std::conj(normal) * z - offset;
      return (w - 1.0) / (w + 1.0);
    }
  }
  throw InternalError("GeneralizedDisc: unknown kind");
}

double gdisc_distance(const GeneralizedDisc& g, Complex z1, Complex z2) {
  if (!(g.clearance(z1) > 0.0) || !(g.clearance(z2) > 0.0)) {
    throw DomainError("gdisc_distance: point not interior to the region");
  }
  if (z1 == z2) return 0.0;
  switch (g.kind) {
    case GeneralizedDisc::Kind::kDisc: {
      const double m1 = std::abs(z1 - g.center);
      const double m2 = std::abs(z2 - g.center);
      const double r2 = g.radius * g.radius;
      return disc_distance_with((z1 - g.center) / g.radius,
                                (g.radius - m1) * (g.radius + m1) / r2,
                                (z2 - g.center) / g.radius,
                                (g.radius - m2) * (g.radius + m2) / r2);
    }
    case GeneralizedDisc::Kind::kDiscComplement: {
      const double m1 = std::abs(z1 - g.center);
      const double m2 = std::abs(z2 - g.center);
      return disc_distance_with(g.radius / (z1 - g.center),
                                (m1 - g.radius) * (m1 + g.radius) / (m1 * m1),
                                g.radius / (z2 - g.center),
                                (m2 - g.radius) * (m2 + g.radius) / (m2 * m2));
    }
    case GeneralizedDisc::Kind::kHalfPlane: {
      const Complex w1 = std::conj(g.normal) * z1 - g.offset;
      const Complex w2 = std::conj(g.normal) * z2 - g.offset;
      const double dn = std::abs(w1 + std::conj(w2));
      const double rho = std::min(1.0, std::abs(w1 - w2) / dn);
      return distance_from_pseudo(rho, 4.0 * w1.real() * w2.real() / (dn * dn));
    }
  }
  throw InternalError("gdisc_distance: unknown kind");
}

bool contained_in(const GeneralizedDisc& inner, const GeneralizedDisc& outer,
                  double rel_tol) {
  using K = GeneralizedDisc::Kind;
  auto extent = [](const GeneralizedDisc& g) {
    if (g.kind == K::kHalfPlane) return std::abs(g.offset);
    return std::abs(g.center) + g.radius;
  };
  const double tol = rel_tol * std::max({1.0, extent(inner), extent(outer)});
  const double d = std::abs(inner.center - outer.center);

  switch (inner.kind) {
    case K::kDisc:
      switch (outer.kind) {
        case K::kDisc:
          return d + inner.radius <= outer.radius + tol;
        case K::kDiscComplement:
          return d - inner.radius >= outer.radius - tol;
        case K::kHalfPlane:
          return outer.clearance(inner.center) - inner.radius >= -tol;
      }
      break;
    case K::kDiscComplement:
      if (outer.kind != K::kDiscComplement) return false;
      return d + outer.radius <= inner.radius + tol;
    case K::kHalfPlane:
      switch (outer.kind) {
        case K::kDisc:
          return false;
        case K::kDiscComplement:
          // The removed disc must lie in the open complement of `inner`.
          return inner.clearance(outer.center) + outer.radius <= tol;
        case K::kHalfPlane:
          return std::abs(inner.normal - outer.normal) <= rel_tol &&
                 inner.offset >= outer.offset - tol;
      }
      break;
  }
  return false;
}

double cross_ratio_distance(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) {
    throw DomainError("cross_ratio_distance: NaN endpoint");
  }
  if (a == -1.0 || b == 1.0) return kInf;
  // Arc lengths (in doubled-angle coordinates) swept from -1 leftwards to a
  // and from 1 rightwards to b. Together they may cover at most the
  // complementary half-circle.
  const double left = wrap_two_pi(-kPi / 2.0 - circle_angle(a));
  const double right = wrap_two_pi(circle_angle(b) - kPi / 2.0);
  if (left + right > kPi * (1.0 + 1e-15)) {
    throw DomainError("cross_ratio_distance: segment does not contain [-1, 1]");
  }
  return std::max(0.0, log_ratio(a) - log_ratio(b));
}

double eta_punctured_complement(double delta) {
  if (!(delta > 0.0)) throw DomainError("eta_punctured: delta must be positive");
  if (std::isinf(delta)) return 0.0;
  const double u = std::exp(-delta);
  if (u < 0.5) {
    // 1 - eta = sum_{k>=1} 2 u^{2k} / (4k^2 - 1)
    const double u2 = u * u;
    double power = u2;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
      const double term = 2.0 * power / (4.0 * k * k - 1.0);
      sum += term;
      if (term <= 1e-18 * sum) break;
      power *= u2;
    }
    return sum;
  }
  const double t = std::tanh(delta / 2.0);
  return 1.0 - 2.0 * t / ((1.0 - t) * (1.0 + t)) * -std::log(t);
}

double eta_punctured(double delta) {
  if (!(delta > 0.0)) throw DomainError("eta_punctured: delta must be positive");
  if (std::isinf(delta)) return 1.0;
  const double u = std::exp(-delta);
  if (u < 0.5) return 1.0 - eta_punctured_complement(delta);
  const double t = std::tanh(delta / 2.0);
  return 2.0 * t / ((1.0 - t) * (1.0 + t)) * -std::log(t);
}

double eta_ball(double radius) {
  if (!(radius >= 0.0)) throw DomainError("eta_ball: radius must be nonnegative");
  return std::isinf(radius) ? 1.0 : std::tanh(radius / 2.0);
}

double eta_real_cone(double delta) {
  if (!(delta >= 0.0)) throw DomainError("eta_real_cone: delta must be nonnegative");
  return std::isinf(delta) ? 1.0 : std::tanh(delta / 4.0);
}

double ConstraintRegion::value(Complex z) const {
  return quad * std::norm(z) + (lin * z).real() + constant;
}

CanonicalRegion canonicalize(const ConstraintRegion& r) {
  CanonicalRegion out;
  const double lin_abs = std::abs(r.lin);
  const double scale = std::max({std::abs(r.quad), lin_abs, std::abs(r.constant)});
  if (scale == 0.0) return out;  // 0 >= 0 everywhere
  const double zero = 1e-12 * scale;

  if (std::abs(r.quad) > zero) {
    const Complex c = -std::conj(r.lin) / (2.0 * r.quad);
    const double ratio = r.constant / r.quad;
    const double rr = std::norm(c) - ratio;
    const double rr_tol = 1e-12 * (std::norm(c) + std::abs(ratio));
    if (r.quad > 0.0) {
      // |lambda - c|^2 >= rr
      if (rr <= rr_tol) return out;
      out.kind = CanonicalRegion::Kind::kProper;
      out.disc = GeneralizedDisc::disc_complement(c, std::sqrt(rr));
    } else {
      // |lambda - c|^2 <= rr
      if (rr <= rr_tol) {
        out.kind = CanonicalRegion::Kind::kEmpty;
        return out;
      }
      out.kind = CanonicalRegion::Kind::kProper;
      out.disc = GeneralizedDisc::disc(c, std::sqrt(rr));
    }
    return out;
  }
  if (lin_abs > zero) {
    // Re(lin * lambda) = Re(conj(n) lambda) |lin| with n = conj(lin) / |lin|.
    out.kind = CanonicalRegion::Kind::kProper;
    out.disc = GeneralizedDisc::half_plane(std::conj(r.lin) / lin_abs,
                                           -r.constant / lin_abs);
    return out;
  }
  if (r.constant < -zero) out.kind = CanonicalRegion::Kind::kEmpty;
  return out;
}

double clearance(std::span<const CanonicalRegion> regions, Complex z) {
  double best = kInf;
  for (const auto& r : regions) {
    if (r.kind == CanonicalRegion::Kind::kEmpty) return -kInf;
    if (r.kind == CanonicalRegion::Kind::kProper) {
      best = std::min(best, r.disc.clearance(z));
    }
  }
  return best;
}

namespace {

// Fraction of the smaller end clearance a certified piece may span.
constexpr double kPieceFraction = 0.1;

// Integral of 2 / delta over [p, q] using the 1-Lipschitz lower envelope of
// the clearance; subdivides until pieces are short relative to clearance.
double segment_bound(std::span<const CanonicalRegion> regions, Complex p,
                     double dp, Complex q, double dq, int depth) {
  const double h = std::abs(q - p);
  if (h == 0.0) return 0.0;
  const double dmin = std::min(dp, dq);
  if (h > kPieceFraction * dmin || (dp + dq - h) <= 0.0) {
    if (depth <= 0) return kInf;
    const Complex m = 0.5 * (p + q);
    const double dm = clearance(regions, m);
    if (!(dm > 0.0)) return kInf;
    return segment_bound(regions, p, dp, m, dm, depth - 1) +
           segment_bound(regions, m, dm, q, dq, depth - 1);
  }
  const double s = std::clamp(0.5 * (dp - dq + h), 0.0, h);
  const double left = s > 0.0 ? -2.0 * std::log1p(-s / dp) : 0.0;
  const double right = (h - s) > 0.0 ? -2.0 * std::log1p(-(h - s) / dq) : 0.0;
  return left + right;
}

struct PathSearch {
  std::span<const CanonicalRegion> regions;
  Complex from;
  Complex to;
  int samples;
  int max_subdivision;

  // Offsets at equally spaced controls, piecewise-linear in between, measured
  // perpendicular to the chord in units of the chord length.
  double evaluate(const std::vector<double>& controls) const {
    std::vector<Complex> path(samples);
    const int segments = static_cast<int>(controls.size()) - 1;
    const Complex chord = to - from;
    for (int k = 0; k < samples; ++k) {
      const double s = static_cast<double>(k) / (samples - 1);
      const double pos = s * segments;
      const int j = std::min(segments - 1, static_cast<int>(pos));
      const double f = pos - j;
      const double o = (1.0 - f) * controls[j] + f * controls[j + 1];
      path[k] = from + chord * Complex(s, o);
    }
    path.front() = from;
    path.back() = to;
    return polyline_upper_bound(regions, path, max_subdivision);
  }

  static std::vector<double> refine(const std::vector<double>& c) {
    std::vector<double> out(2 * c.size() - 1);
    for (std::size_t j = 0; j + 1 < c.size(); ++j) {
      out[2 * j] = c[j];
      out[2 * j + 1] = 0.5 * (c[j] + c[j + 1]);
    }
    out.back() = c.back();
    return out;
  }

  double run(int rounds, double bump_sign) const {
    std::vector<double> controls(3, 0.0);
    double best = evaluate(controls);
    if (!std::isfinite(best)) {
      for (double amp : {0.5, 1.0, 2.0, 4.0}) {
        for (double sign : {bump_sign, -bump_sign}) {
          std::vector<double> trial{0.0, sign * amp, 0.0};
          const double v = evaluate(trial);
          if (v < best) {
            best = v;
            controls = trial;
          }
        }
        if (std::isfinite(best)) break;
      }
      if (!std::isfinite(best)) return kInf;
    }
    double step = 0.25;
    for (int round = 0; round < rounds; ++round) {
      if (round > 0) {
        controls = refine(controls);
        step = std::max(step, 0.25 / (1 << round));
      }
      int passes = 0;
      while (step > 1e-3 && passes < 60) {
        ++passes;
        bool improved = false;
        for (std::size_t j = 1; j + 1 < controls.size(); ++j) {
          for (double dir : {1.0, -1.0}) {
            std::vector<double> trial = controls;
            trial[j] += dir * step;
            const double v = evaluate(trial);
            if (v < best) {
              best = v;
              controls = std::move(trial);
              improved = true;
              break;
            }
          }
        }
        if (!improved) step *= 0.5;
      }
    }
    return best;
  }
};

}  // namespace

double polyline_upper_bound(std::span<const CanonicalRegion> regions,
                            std::span<const Complex> path, int max_subdivision) {
  if (path.size() < 2) return 0.0;
  double total = 0.0;
  double dp = clearance(regions, path[0]);
  if (!(dp > 0.0)) return kInf;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double dq = clearance(regions, path[k]);
    if (!(dq > 0.0)) return kInf;
    if (std::isinf(dp) && std::isinf(dq)) {
      dp = dq;
      continue;
    }
    total += segment_bound(regions, path[k - 1], dp, path[k], dq, max_subdivision);
    if (!std::isfinite(total)) return kInf;
    dp = dq;
  }
  return total;
}

DistanceBracket domain_distance_bounds(std::span<const ConstraintRegion> regions,
                                       Complex z1, Complex z2,
                                       const PathSearchOptions& options) {
  std::vector<CanonicalRegion> canon;
  canon.reserve(regions.size());
  std::vector<std::size_t> proper;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    canon.push_back(canonicalize(regions[i]));
    const auto& c = canon.back();
    if (c.kind == CanonicalRegion::Kind::kEmpty) {
      throw DomainError("domain_distance_bounds: region " + std::to_string(i) +
                        " is empty");
    }
    if (c.kind == CanonicalRegion::Kind::kProper &&
        (!(c.disc.clearance(z1) > 0.0) || !(c.disc.clearance(z2) > 0.0))) {
      throw DomainError("domain_distance_bounds: point not interior to region " +
                        std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < canon.size(); ++i) {
    if (canon[i].kind == CanonicalRegion::Kind::kProper) proper.push_back(i);
  }
  DistanceBracket out;
  if (proper.empty() || z1 == z2) {
    out.lower = out.upper = 0.0;
    return out;
  }

  std::vector<double> single(proper.size());
  for (std::size_t k = 0; k < proper.size(); ++k) {
    single[k] = gdisc_distance(canon[proper[k]].disc, z1, z2);
    out.lower = std::max(out.lower, single[k]);
  }

  // One region inside all others: the intersection is that region.
  for (std::size_t k = 0; k < proper.size(); ++k) {
    bool minimal = true;
    for (std::size_t m = 0; m < proper.size() && minimal; ++m) {
      if (m != k) minimal = contained_in(canon[proper[k]].disc, canon[proper[m]].disc);
    }
    if (minimal) {
      out.upper = std::max(out.lower, single[k]);
      return out;
    }
  }

  const PathSearch forward{canon, z1, z2, options.samples, options.max_subdivision};
  const PathSearch backward{canon, z2, z1, options.samples, options.max_subdivision};
  out.upper = std::min(forward.run(options.rounds, 1.0),
                       backward.run(options.rounds, 1.0));
  out.upper = std::max(out.upper, out.lower);
  return out;
}

}  // namespace cone_gauge::hyperbolic
