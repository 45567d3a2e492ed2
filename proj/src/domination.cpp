#include "cone_gauge/domination.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cone_gauge/errors.hpp"
#include "cone_gauge/hyperbolic.hpp"
#include "cone_gauge/parallel.hpp"
#include "cone_gauge/real_cone.hpp"

namespace cone_gauge::domination {

namespace {

// a*b + c*d with one rounding error per product pair (Kahan).
double sum_of_products(double a, double b, double c, double d) {
  const double cd = c * d;
  const double err = std::fma(c, d, -cd);
  return std::fma(a, b, cd) + err;
}

struct ScanResult {
  double alpha = kInf;
  double gamma = -1.0;
  std::size_t alpha_a = 0, alpha_b = 0;
  std::size_t gamma_a = 0, gamma_b = 0;
};

}  // namespace

DominationConstants extract_constants(const ComplexMatrix& m, const RealMatrix& p) {
  if (m.rows() != p.rows() || m.cols() != p.cols() || m.size() == 0) {
    throw PreconditionError("extract_constants: M and P must have the same nonempty shape");
  }
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      if (!(p(i, j) > 0.0) || !std::isfinite(p(i, j))) {
        throw DomainError("extract_constants: P(" + std::to_string(i) + ", " +
                          std::to_string(j) + ") is not strictly positive");
      }
    }
  }
  if (!m.allFinite()) throw PreconditionError("extract_constants: M has non-finite entries");

  // Entries enumerated row-major: a = i * cols + k.
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  const std::size_t n = rows * cols;
  std::vector<double> re(n), im(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto i = static_cast<Eigen::Index>(a / cols);
    const auto k = static_cast<Eigen::Index>(a % cols);
    const Complex q = m(i, k) / p(i, k);
    re[a] = q.real();
    im[a] = q.imag();
  }

  DominationConstants c;
  std::size_t beta_at = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const double v = sum_of_products(re[a], re[a], im[a], im[a]);
    if (v > c.beta) {
      c.beta = v;
      beta_at = a;
    }
  }

  // Pairs a <= b; both quantities are symmetric in (a, b).
  const auto blocks = parallel::map_blocks<ScanResult>(n, [&](std::size_t lo, std::size_t hi) {
    ScanResult r;
    for (std::size_t a = lo; a < hi; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        const double rp = sum_of_products(re[a], re[b], im[a], im[b]);
        // Evaluate the cross term in a value-determined order so that the
        // result does not depend on how the entries are enumerated.
        const bool swap = re[b] < re[a] || (re[b] == re[a] && im[b] < im[a]);
        const std::size_t u = swap ? b : a, v = swap ? a : b;
        const double ip = std::abs(sum_of_products(im[u], re[v], -re[u], im[v]));
        if (rp < r.alpha) {
          r.alpha = rp;
          r.alpha_a = a;
          r.alpha_b = b;
        }
        if (ip > r.gamma) {
          r.gamma = ip;
          r.gamma_a = a;
          r.gamma_b = b;
        }
      }
    }
    return r;
  });
  ScanResult best;
  for (const auto& r : blocks) {  // block order keeps lowest-index ties
    if (r.alpha < best.alpha) {
      best.alpha = r.alpha;
      best.alpha_a = r.alpha_a;
      best.alpha_b = r.alpha_b;
    }
    if (r.gamma > best.gamma) {
      best.gamma = r.gamma;
      best.gamma_a = r.gamma_a;
      best.gamma_b = r.gamma_b;
    }
  }
  auto entry = [&](std::size_t a) {
    return std::array<int, 2>{static_cast<int>(a / cols), static_cast<int>(a % cols)};
  };
  auto pair = [&](std::size_t a, std::size_t b) {
    const auto ea = entry(a), eb = entry(b);
    return EntryPair{ea[0], ea[1], eb[0], eb[1]};
  };
  c.alpha = best.alpha;
  c.gamma = std::max(0.0, best.gamma);
  c.alpha_witness = pair(best.alpha_a, best.alpha_b);
  c.gamma_witness = pair(best.gamma_a, best.gamma_b);
  c.beta_witness = entry(beta_at);
  return c;
}

GapCertificate certificate_from_constants(const DominationConstants& constants,
                                          double delta_p) {
  if (!(delta_p >= 0.0)) throw DomainError("certificate: delta_p must be nonnegative");
  GapCertificate cert;
  cert.constants = constants;
  const auto& k = cert.constants;
  cert.delta_p = delta_p;
  const double ch = std::cosh(delta_p / 2.0);
  cert.condition_lhs = k.gamma * ch;
  cert.condition_rhs = k.alpha;
  cert.certified = cert.condition_lhs < cert.condition_rhs;
  if (!cert.certified) {
    cert.notes = "condition gamma cosh(delta_p/2) < alpha fails";
    return cert;
  }
  // Every image slice contains {t + z : |t| <= 1, |z| <= (1 - eta_p |t|) rho0}.
  // Integrating 2 / radius along [-1, 1] bounds the slice distance of -1, 1.
  cert.rho0 = std::sqrt(1.0 + (k.alpha / ch - k.gamma) / (2.0 * (k.beta + k.gamma))) - 1.0;
  const double eta_p = hyperbolic::eta_real_cone(delta_p);
  if (eta_p == 0.0) {
    cert.delta_c_upper = 4.0 / cert.rho0;
  } else {
    cert.delta_c_upper = 4.0 / (cert.rho0 * eta_p) * -std::log1p(-eta_p);
  }
  cert.eta = hyperbolic::eta_punctured(cert.delta_c_upper);
  cert.eta_complement = hyperbolic::eta_punctured_complement(cert.delta_c_upper);
  cert.notes = "delta_c_upper is an upper bound from an explicit neighbourhood of [-1, 1]";
  return cert;
}

GapCertificate certify_dominated(const ComplexMatrix& m, const RealMatrix& p) {
  if (m.rows() != m.cols()) throw PreconditionError("certify_dominated: M must be square");
  const DominationConstants k = extract_constants(m, p);
  GapCertificate cert = certificate_from_constants(k, real_cone::image_diameter(p));
  cert.n0 = 1;
  cert.x0 = p * RealVector::Ones(p.cols());
  cert.aux_constant = std::sqrt(k.beta);
  cert.inner_radius =
      cert.aux_constant > 0.0 ? (std::sqrt(2.0) - 1.0) / cert.aux_constant : kInf;
  return cert;
}

GapCertificate complex_pf_certificate(const ComplexMatrix& a) {
  if (a.rows() != a.cols() || a.size() == 0) {
    throw PreconditionError("complex_pf_certificate: matrix must be square and nonempty");
  }
  return certify_dominated(a, RealMatrix::Ones(a.rows(), a.cols()));
}

ExpRatio exp_ratio(Complex z1, Complex z2) {
  const double t = z1.real() - z2.real();
  const double s = z1.imag() - z2.imag();
  if (!(t > 0.0)) throw DomainError("exp_ratio: need Re z1 > Re z2");
  const double e = std::exp(-t);
  const double denom = -std::expm1(-t);
  const double half = std::sin(s / 2.0);
  ExpRatio r;
  r.w = Complex(denom + 2.0 * e * half * half, e * std::sin(s)) / denom;
  r.arg_bound = std::abs(s) / t;
  r.mod_sq_upper = 1.0 + (s / t) * (s / t);
  return r;
}

}  // namespace cone_gauge::domination
