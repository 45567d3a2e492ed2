#include "cone_gauge/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cone_gauge/errors.hpp"

namespace cone_gauge::operators {

namespace {

constexpr int kSampleGrid = 1 << 10;

double frac(double x) { return x - std::floor(x); }

// Periodic cardinal function of trigonometric interpolation on n nodes
// (n even), at offset t = p / (k n) with integer p.
double cardinal(long p, long k, long n) {
  const long period = k * n;
  long r = p % period;
  if (r < 0) r += period;
  if (r == 0) return 1.0;
  if (r % k == 0) return 0.0;
  // sin(pi n t) = sin(pi p / k); reduce p mod 2k for an accurate argument.
  long s = p % (2 * k);
  if (s < 0) s += 2 * k;
  const double num = std::sin(kPi * static_cast<double>(s) / static_cast<double>(k));
  const double den = static_cast<double>(n) *
                     std::tan(kPi * static_cast<double>(r) / static_cast<double>(period));
  return num / den;
}

}  // namespace

double circle_distance(double x, double y) {
  const double d = frac(x - y);
  return std::min(d, 1.0 - d);
}

Complex TrigWeight::operator()(double x) const {
  const double c = std::cos(2.0 * kPi * x);
  const double s = std::sin(2.0 * kPi * x);
  return {c0 + c1 * c + c2 * s, d0 + d1 * c + d2 * s};
}

double TrigWeight::lip_re() const { return 2.0 * kPi * std::hypot(c1, c2); }
double TrigWeight::lip_im() const { return 2.0 * kPi * std::hypot(d1, d2); }
double TrigWeight::osc_re() const { return 2.0 * std::hypot(c1, c2); }
double TrigWeight::osc_im() const { return 2.0 * std::hypot(d1, d2); }

TrigWeight TrigWeight::scaled(double kappa) const {
  TrigWeight w = *this;
  w.c1 *= kappa;
  w.c2 *= kappa;
  w.d1 *= kappa;
  w.d2 *= kappa;
  return w;
}

TransferOperatorSpec TransferOperatorSpec::from_trig(int degree, const TrigWeight& w) {
  TransferOperatorSpec s;
  s.degree = degree;
  s.g = w;
  s.a = w.lip_re();
  s.b = w.lip_im();
  s.theta = w.osc_im();
  s.validate();
  return s;
}

void TransferOperatorSpec::validate() const {
  if (degree < 2) throw DomainError("TransferOperatorSpec: degree must be at least 2");
  if (!g) throw DomainError("TransferOperatorSpec: weight function missing");
  if (!(a >= 0.0) || !(b >= 0.0) || !(theta >= 0.0) || !std::isfinite(a) ||
      !std::isfinite(b) || !std::isfinite(theta)) {
    throw DomainError("TransferOperatorSpec: declared constants must be finite and nonnegative");
  }
  if (diameter != 0.5) throw DomainError("TransferOperatorSpec: circle diameter is 1/2");
  std::vector<Complex> v(kSampleGrid);
  for (int i = 0; i < kSampleGrid; ++i) v[i] = g(static_cast<double>(i) / kSampleGrid);
  double lip_re = 0.0, lip_im = 0.0;
  double im_lo = kInf, im_hi = -kInf;
  for (int i = 0; i < kSampleGrid; ++i) {
    const Complex d = v[(i + 1) % kSampleGrid] - v[i];
    lip_re = std::max(lip_re, std::abs(d.real()) * kSampleGrid);
    lip_im = std::max(lip_im, std::abs(d.imag()) * kSampleGrid);
    im_lo = std::min(im_lo, v[i].imag());
    im_hi = std::max(im_hi, v[i].imag());
  }
  auto check = [](double declared, double sampled, const char* name) {
    if (declared < sampled * (1.0 - 1e-12) - 1e-15) {
      throw DomainError(std::string("TransferOperatorSpec: declared ") + name +
                        " is below its sampled estimate " + std::to_string(sampled));
    }
  };
  check(a, lip_re, "Lip Re g");
  check(b, lip_im, "Lip Im g");
  check(theta, im_hi - im_lo, "osc Im g");
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 32; ++j) {
      const double y = (i + 0.25) / 32.0, y2 = (j + 0.6) / 32.0;
      const double dy = circle_distance(y, y2);
      for (const auto& [x, x2] : paired_preimages(degree, y, y2)) {
        if (circle_distance(x, x2) > rho() * dy * (1.0 + 1e-12) + 1e-15) {
          throw InternalError("TransferOperatorSpec: branch pairing does not contract");
        }
      }
    }
  }
}

std::vector<std::pair<double, double>> paired_preimages(int degree, double y, double y2) {
  y = frac(y);
  double delta = frac(y2 - y);
  if (delta > 0.5) delta -= 1.0;
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(degree));
  for (int j = 0; j < degree; ++j) {
    out.emplace_back((y + j) / degree, frac((y + delta + j) / degree));
  }
  return out;
}

RpfCertificate rpf_certificate(const TransferOperatorSpec& spec) {
  spec.validate();
  const double rho = spec.rho();
  const double dd = spec.diameter;
  const double a = spec.a, b = spec.b, theta = spec.theta;
  RpfCertificate r;
  r.sigma = 2.0 * a * rho / (1.0 - rho) + 1.0 / (rho * dd);
  r.sigma_prime = rho * (r.sigma + a);
  if (!(r.sigma_prime < r.sigma)) {
    throw DomainError("rpf_certificate: degenerate contraction, rho (sigma + a) >= sigma");
  }
  r.half_delta_p = std::log((r.sigma + r.sigma_prime) / (r.sigma - r.sigma_prime)) +
                   dd * r.sigma_prime;
  r.s0 = rho * b / (r.sigma - r.sigma_prime);

  r.simplified_lhs = (theta + 2.0 * rho * rho * dd * b / (1.0 - rho + rho * rho * dd * a)) *
                     std::exp(1.0 + rho * (1.0 + rho) / (1.0 - rho) * dd * a) * 4.0 /
                     (1.0 - rho);
  r.simplified_certified = r.simplified_lhs < 1.0;

  const double phase = theta + 2.0 * r.s0;
  domination::DominationConstants k;
  k.alpha = std::cos(phase);
  k.gamma = (1.0 + r.s0 * r.s0) * std::sin(phase);
  k.beta = 1.0 + r.s0 * r.s0;
  if (phase < kPi / 4.0) {
    r.sharp_lhs = (1.0 + r.s0 * r.s0) * std::tan(phase) * std::cosh(r.half_delta_p);
    r.sharp_certified = r.sharp_lhs < 1.0;
  }
  r.cert = domination::certificate_from_constants(k, 2.0 * r.half_delta_p);
  if (!r.sharp_certified) {
    r.cert.eta.reset();
    r.cert.eta_complement.reset();
    r.cert.delta_c_upper = kInf;
  }
  r.cert.condition_lhs = r.simplified_lhs;
  r.cert.condition_rhs = 1.0;
  r.cert.certified = r.simplified_certified;
  r.cert.n0 = 1;
  r.cert.inner_radius = std::min(r.sigma, 1.0);
  r.cert.notes = std::string("simplified condition ") +
                 (r.simplified_certified ? "holds" : "fails") + "; sharp condition " +
                 (r.sharp_certified ? "holds" : "fails");
  return r;
}

ComplexMatrix transfer_matrix(const TransferOperatorSpec& spec, int size) {
  if (size < 2 || size % 2 != 0) {
    throw PreconditionError("transfer_matrix: grid size must be even and at least 2");
  }
  const long k = spec.degree;
  const long n = size;
  ComplexMatrix t = ComplexMatrix::Zero(size, size);
  for (long row = 0; row < n; ++row) {
    for (long j = 0; j < k; ++j) {
      const long num = row + j * n;  // preimage = num / (k n)
      const double x = static_cast<double>(num) / static_cast<double>(k * n);
      const Complex w = std::exp(spec.g(x));
      if (num % k == 0) {
        t(row, num / k) += w;
        continue;
      }
      for (long col = 0; col < n; ++col) t(row, col) += w * cardinal(num - k * col, k, n);
    }
  }
  return t;
}

TransferApplyResult transfer_apply(const TransferOperatorSpec& spec, const ComplexVector& phi) {
  const auto n = static_cast<int>(phi.size());
  TransferApplyResult r;
  r.values = transfer_matrix(spec, n) * phi;
  r.interpolated = true;  // odd rows have off-grid preimages
  // Energy in the top quarter of the discrete spectrum.
  double total = 0.0, high = 0.0;
  for (int f = 0; f < n; ++f) {
    Complex c{0.0, 0.0};
    for (int i = 0; i < n; ++i) c += phi[i] * std::polar(1.0, -2.0 * kPi * f * i / n);
    const int freq = f <= n / 2 ? f : n - f;
    total += std::norm(c);
    if (freq > n / 4) high += std::norm(c);
  }
  r.nonsmooth = total > 0.0 && high > 1e-8 * total;
  return r;
}

Complex transfer_apply_function(const TransferOperatorSpec& spec,
                                const std::function<Complex(double)>& phi, double y) {
  y = frac(y);
  Complex sum{0.0, 0.0};
  for (int j = 0; j < spec.degree; ++j) {
    const double x = (y + j) / spec.degree;
    sum += std::exp(spec.g(x)) * phi(x);
  }
  return sum;
}

bool lipschitz_cone_membership(const RealVector& phi, double sigma) {
  const auto n = phi.size();
  if (n == 0) return true;
  if (!(sigma > 0.0)) throw PreconditionError("lipschitz_cone_membership: sigma must be positive");
  const double tol = 1e-12 * phi.cwiseAbs().maxCoeff();
  if ((phi.array() < -tol).any()) return false;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = circle_distance(static_cast<double>(i) / n, static_cast<double>(j) / n);
      if (phi[i] < std::exp(-sigma * d) * phi[j] - tol) return false;
    }
  }
  return true;
}

}  // namespace cone_gauge::operators
