#include "cone_gauge/cli/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cone_gauge/complex_cone.hpp"
#include "cone_gauge/domination.hpp"
#include "cone_gauge/hyperbolic.hpp"
#include "cone_gauge/integral.hpp"
#include "cone_gauge/random.hpp"
#include "cone_gauge/real_cone.hpp"
#include "cone_gauge/spectral.hpp"
#include "cone_gauge/transfer.hpp"

namespace cone_gauge::acceptance {

namespace {

using operators::LinearOperator;

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Entries log-uniform in [lo, hi].
RealVector log_uniform_vector(Sampler& rng, int n, double lo, double hi) {
  RealVector v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, rng.uniform());
  return v;
}

// Moduli of the two largest eigenvalues by a dense solver, independent of
// the cone iteration.
double dense_ratio(const ComplexMatrix& a) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(a, false);
  std::vector<double> mod;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    mod.push_back(std::abs(es.eigenvalues()[i]));
  std::sort(mod.rbegin(), mod.rend());
  return mod.size() < 2 ? 0.0 : mod[1] / mod[0];
}

double log_eta(const domination::GapCertificate& c) {
  if (c.eta_complement) return std::log1p(-*c.eta_complement);
  return c.eta ? std::log(*c.eta) : 0.0;
}

struct Outcome {
  bool passed = false;
  std::string detail;
  std::string note;
};

Outcome hilbert_dual_form(const Tolerances& tol) {
  Sampler rng(1001);
  const auto cone = real_cone::RealCone::positive_orthant(10);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const RealVector x = log_uniform_vector(rng, 10, 1e-3, 1.0);
    const RealVector y = log_uniform_vector(rng, 10, 1e-3, 1.0);
    const auto d = real_cone::hilbert_metric(cone, x, y);
    const double cr =
        d.segment ? hyperbolic::cross_ratio_distance(d.segment->first, d.segment->second) : 0.0;
    worst = std::max(worst, std::abs(cr - d.value));
  }
  return {worst <= tol.dual_form, "1000 pairs, max |beta form - cross ratio| = " + num(worst), ""};
}

struct RealPair {
  RealVector x, y;
};

std::vector<RealPair> embedding_pairs() {
  Sampler rng(1002);
  std::vector<RealPair> pairs;
  for (int i = 0; i < 500; ++i) {
    RealVector x = log_uniform_vector(rng, 8, 1e-2, 1.0);
    RealVector y = log_uniform_vector(rng, 8, 1e-2, 1.0);
    pairs.push_back({std::move(x), std::move(y)});
  }
  return pairs;
}

Outcome isometric_embedding(const Tolerances& tol) {
  const auto real = real_cone::RealCone::positive_orthant(8);
  const auto cone = complex_cone::ComplexCone::positive_orthant(8);
  double worst = 0.0;
  int outside = 0, missing = 0, good_quality = 0;
  double worst_quality = 1.0;
  const auto pairs = embedding_pairs();
  for (const auto& [x, y] : pairs) {
    const auto g = complex_cone::gauge(cone, x.cast<Complex>(), y.cast<Complex>());
    if (!g.exact) {
      ++missing;
      continue;
    }
    const double exact = *g.exact;
    worst = std::max(worst, std::abs(exact - real_cone::hilbert_metric(real, x, y).value));
    if (!(g.bracket.lower <= exact && exact <= g.bracket.upper)) ++outside;
    const double q = g.bracket.upper <= 0.0 ? 1.0 : g.bracket.upper / g.bracket.lower;
    worst_quality = std::max(worst_quality, q);
    if (q <= tol.bracket_quality) ++good_quality;
  }
  const double share = static_cast<double>(good_quality) / static_cast<double>(pairs.size());
  std::ostringstream detail;
  detail << pairs.size() << " pairs, max |gauge - hilbert| = " << num(worst)
         << ", bracket violations = " << outside << ", missing exact = " << missing;
  std::ostringstream note;
  note << "quality upper/lower <= " << num(tol.bracket_quality) << " on " << num(100.0 * share)
       << "% (target " << num(100.0 * tol.bracket_quality_share) << "%, worst "
       << num(worst_quality) << ")";
  if (share < tol.bracket_quality_share) note << ", below target";
  return {worst <= tol.embedding && outside == 0 && missing == 0, detail.str(), note.str()};
}

struct PositiveCase {
  RealMatrix a;
  double lo, hi;
};

std::vector<PositiveCase> positive_matrices() {
  Sampler rng(1003);
  std::vector<PositiveCase> out;
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 11;
    const double lo = rng.uniform(0.1, 1.0);
    const double hi = lo * rng.uniform(1.01, 10.0);
    RealMatrix a(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) a(i, j) = rng.uniform(lo, hi);
    out.push_back({std::move(a), lo, hi});
  }
  return out;
}

Outcome birkhoff_contraction(const Tolerances& tol) {
  double worst_tanh = -kInf, worst_entry = -kInf;
  for (const auto& c : positive_matrices()) {
    const auto cert = real_cone::birkhoff_certificate(c.a);
    const int n = static_cast<int>(c.a.rows());
    const auto r = operators::top_two_ratio(LinearOperator::from_matrix(c.a.cast<Complex>()),
                                            ComplexVector::Ones(n));
    worst_tanh = std::max(worst_tanh, r.ratio - cert.eta);
    worst_entry = std::max(worst_entry, r.ratio - (c.hi - c.lo) / (c.hi + c.lo));
  }
  return {worst_tanh <= tol.contraction && worst_entry <= tol.contraction,
          "200 matrices, max ratio - tanh(D/4) = " + num(worst_tanh) +
              ", max ratio - (b-a)/(b+a) = " + num(worst_entry),
          ""};
}

Outcome gauge_contraction(const Tolerances& tol) {
  Sampler rng(1004);
  double worst = -kInf;
  long pairs = 0;
  for (const auto& c : positive_matrices()) {
    const int n = static_cast<int>(c.a.rows());
    const auto cone = real_cone::RealCone::positive_orthant(n);
    const double eta = real_cone::birkhoff_certificate(c.a).eta;
    for (int s = 0; s < 1000; ++s) {
      const RealVector x = log_uniform_vector(rng, n, 1e-3, 1.0);
      const RealVector y = log_uniform_vector(rng, n, 1e-3, 1.0);
      const double before = real_cone::hilbert_metric(cone, x, y).value;
      const double after = real_cone::hilbert_metric(cone, c.a * x, c.a * y).value;
      worst = std::max(worst, after - eta * before);
      ++pairs;
    }
  }
  return {worst <= tol.contraction,
          std::to_string(pairs) + " pairs over 200 matrices, max d(Ax,Ay) - tanh(D/4) d(x,y) = " +
              num(worst),
          ""};
}

struct ComplexCase {
  ComplexMatrix m;
  domination::GapCertificate cert;
};

std::vector<ComplexCase> complex_pf_cases() {
  Sampler rng(1005);
  std::vector<ComplexCase> out;
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 11;
    const double eps = rng.uniform(0.0, 0.2);
    ComplexMatrix m(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        m(i, j) = rng.uniform(0.5, 1.5) * std::polar(1.0, eps * rng.uniform(-1.0, 1.0));
    auto cert = domination::complex_pf_certificate(m);
    out.push_back({std::move(m), std::move(cert)});
  }
  return out;
}

Outcome complex_pf_soundness(const Tolerances& tol) {
  int certified = 0, counterexamples = 0;
  double worst = 0.0;
  for (const auto& c : complex_pf_cases()) {
    if (!c.cert.certified) continue;
    ++certified;
    const double r = dense_ratio(c.m);
    worst = std::max(worst, r);
    if (!(r < 1.0 - tol.pf_gap)) ++counterexamples;
  }
  return {certified > 0 && counterexamples == 0,
          "200 matrices, " + std::to_string(certified) + " certified, counterexamples = " +
              std::to_string(counterexamples) + ", max oracle ratio = " + num(worst),
          ""};
}

Outcome domination_sharpness(const Tolerances& tol) {
  Sampler rng(1006);
  const int n = 6;
  RealMatrix sign(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) sign(i, j) = rng.uniform() < 0.5 ? -1.0 : 1.0;
  sign(0, 0) = 1.0;
  sign(n - 1, n - 1) = -1.0;
  auto matrix = [&](double kappa) -> ComplexMatrix {
    return ComplexMatrix::Ones(n, n) + Complex(0.0, kappa) * sign.cast<Complex>();
  };
  auto certified = [&](double kappa) {
    return domination::complex_pf_certificate(matrix(kappa)).certified;
  };
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    (certified(mid) ? lo : hi) = mid;
  }
  const double flip = 0.5 * (lo + hi);
  // alpha = 1 - kappa^2 and gamma = 2 kappa meet at sqrt(2) - 1.
  const double expected = std::sqrt(2.0) - 1.0;
  const auto at = domination::complex_pf_certificate(matrix(flip)).constants;
  int failures = 0;
  double worst = 0.0;
  for (int j = 1; j <= 20; ++j) {
    const ComplexMatrix m = matrix(lo * j / 20.0);
    if (!domination::complex_pf_certificate(m).certified) {
      ++failures;
      continue;
    }
    const double r = dense_ratio(m);
    worst = std::max(worst, r);
    if (!(r < 1.0 - tol.pf_gap)) ++failures;
  }
  const double miss = std::abs(flip - expected);
  return {miss <= tol.flip && failures == 0,
          "flip at kappa = " + num(flip) + ", |flip - (sqrt2 - 1)| = " + num(miss) +
              ", gamma - alpha there = " + num(at.gamma - at.alpha) +
              ", 20 sub-threshold checks, failures = " + std::to_string(failures) +
              ", max oracle ratio = " + num(worst),
          ""};
}

// Smooth kernels with coupled x and y dependence, so that e^g is not rank one.
operators::IntegralOperatorSpec random_jentzsch_spec(Sampler& rng, int n) {
  for (;;) {
    double re[3], im[3], ph[6];
    for (auto& v : re) v = rng.uniform(0.0, 0.3);
    for (auto& v : im) v = rng.uniform(0.0, 0.3);
    for (auto& v : ph) v = rng.uniform();
    const Complex c(rng.uniform(-1.0, 1.0), rng.uniform(-kPi, kPi));
    const double hs = rng.uniform(0.0, 0.5), ms = rng.uniform(0.0, 0.5);
    auto spec = operators::IntegralOperatorSpec::midpoint(
        n, [=](double x) { return 1.0 + hs * std::sin(2 * kPi * x); },
        [=](double y) { return 1.0 + ms * std::cos(2 * kPi * y); },
        [=](double x, double y) {
          const double u = 2 * kPi * x, v = 2 * kPi * y;
          return c + Complex(re[0] * std::cos(u + ph[0]) + re[1] * std::cos(v + ph[1]) +
                                 re[2] * std::cos(u - v + ph[2]),
                             im[0] * std::sin(u + ph[3]) + im[1] * std::sin(v + ph[4]) +
                                 im[2] * std::sin(u + v + ph[5]));
        });
    const double theta = spec.theta();
    if (theta < kPi / 4 && std::tan(theta) < std::exp(-2.0 * spec.lambda_osc())) return spec;
  }
}

Outcome complex_jentzsch(const Tolerances&) {
  Sampler rng(1007);
  int certified = 0, disagreements = 0, gapless = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto spec = random_jentzsch_spec(rng, 64);
    const auto j = operators::jentzsch_certificate(spec);
    const ComplexMatrix k = operators::discretize_integral(spec);
    const auto m = domination::certify_dominated(k, operators::integral_comparison(spec));
    if (j.certified) ++certified;
    if (m.certified != j.certified) ++disagreements;
    const auto r = operators::top_two_ratio(LinearOperator::from_matrix(k), ComplexVector::Ones(64));
    worst = std::max(worst, r.ratio);
    if (!(r.ratio < 1.0)) ++gapless;
  }
  return {certified == 50 && disagreements == 0 && gapless == 0,
          "50 specs on N = 64, certified = " + std::to_string(certified) +
              ", matrix verdict disagreements = " + std::to_string(disagreements) +
              ", max oracle ratio = " + num(worst),
          ""};
}

Outcome rpf_desk(const Tolerances& tol) {
  operators::TrigWeight w;
  w.c1 = 0.02;
  w.d2 = 0.01;
  const auto spec = operators::TransferOperatorSpec::from_trig(2, w);
  const auto cert = operators::rpf_certificate(spec);
  const auto r64 = operators::top_two_ratio(
      LinearOperator::from_matrix(operators::transfer_matrix(spec, 64)), ComplexVector::Ones(64));
  const auto r128 = operators::top_two_ratio(
      LinearOperator::from_matrix(operators::transfer_matrix(spec, 128)), ComplexVector::Ones(128));
  const double drift = std::abs(r64.lambda1 - r128.lambda1);

  const auto flat = operators::TransferOperatorSpec::from_trig(2, operators::TrigWeight{});
  const auto r0 = operators::top_two_ratio(
      LinearOperator::from_matrix(operators::transfer_matrix(flat, 64)), ComplexVector::Ones(64));
  const double flat_error = std::abs(r0.lambda1 - 2.0);

  const bool passed = cert.simplified_certified && cert.sharp_certified &&
                      drift <= tol.refinement && r64.ratio < 1.0 && flat_error <= 1e-12 &&
                      r0.residual < tol.deflated_residual;
  return {passed,
          "simplified lhs = " + num(cert.simplified_lhs) +
              (cert.simplified_certified ? " (pass)" : " (fail)") +
              ", sharp lhs = " + num(cert.sharp_lhs) +
              (cert.sharp_certified ? " (pass)" : " (fail)") + ", |lambda1(64) - lambda1(128)| = " +
              num(drift) + ", ratio(64) = " + num(r64.ratio) + ", g = 0: |lambda1 - 2| = " +
              num(flat_error) + ", residual = " + num(r0.residual),
          ""};
}

Outcome constructive_iteration(const Tolerances& tol) {
  int checked = 0;
  double worst = -kInf;
  for (const auto& c : complex_pf_cases()) {
    if (!c.cert.certified) continue;
    ++checked;
    const int n = static_cast<int>(c.m.rows());
    const auto r =
        operators::power_eigentriple(LinearOperator::from_matrix(c.m), ComplexVector::Ones(n));
    worst = std::max(worst, r.decay_slope - log_eta(c.cert));
  }
  return {checked > 0 && worst <= tol.slope,
          std::to_string(checked) + " certified matrices, max slope - log(eta) = " + num(worst),
          ""};
}

Outcome exp_ratio_grid(const Tolerances& tol) {
  double worst = kInf;
  int points = 0;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.01 + (10.0 - 0.01) * i / 100.0;
    for (int j = 0; j <= 200; ++j) {
      const double s = -10.0 + 20.0 * j / 200.0;
      const Complex z2(0.3 * std::sin(i + j), 0.7 * std::cos(i - j));
      const auto e = domination::exp_ratio(z2 + Complex(t, s), z2);
      const double mod_sq = std::norm(e.w);
      worst = std::min({worst, e.arg_bound - std::abs(std::arg(e.w)), mod_sq - e.mod_sq_lower,
                        (e.mod_sq_upper - mod_sq) / e.mod_sq_upper});
      ++points;
    }
  }
  return {worst >= -tol.exp_ratio_slack,
          std::to_string(points) + " grid points, min slack = " + num(worst), ""};
}

Outcome aperture_bound(const Tolerances& tol) {
  const auto cone = complex_cone::ComplexCone::positive_orthant(8);
  double worst = -kInf, max_k = 0.0;
  int missing = 0;
  const auto pairs = embedding_pairs();
  for (const auto& [x, y] : pairs) {
    const ComplexVector u = x.cast<Complex>(), v = y.cast<Complex>();
    const auto g = complex_cone::gauge(cone, u, v);
    if (!g.exact) {
      ++missing;
      continue;
    }
    const double k = complex_cone::sectional_aperture(cone, x, y);
    max_k = std::max(max_k, k);
    worst = std::max(worst, complex_cone::projective_distance(u, v) - 2.0 * k * *g.exact);
  }
  return {missing == 0 && worst <= tol.aperture,
          std::to_string(pairs.size()) + " pairs, max projective - 2K gauge = " + num(worst) +
              ", max K = " + num(max_k),
          ""};
}

struct Entry {
  CriterionInfo info;
  std::function<Outcome(const Tolerances&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> all = {
      {{1, "hilbert-dual-form"}, hilbert_dual_form},
      {{2, "isometric-embedding"}, isometric_embedding},
      {{3, "birkhoff-contraction"}, birkhoff_contraction},
      {{4, "gauge-contraction"}, gauge_contraction},
      {{5, "complex-pf-soundness"}, complex_pf_soundness},
      {{6, "domination-sharpness"}, domination_sharpness},
      {{7, "complex-jentzsch"}, complex_jentzsch},
      {{8, "rpf-desk"}, rpf_desk},
      {{9, "constructive-iteration"}, constructive_iteration},
      {{10, "exp-ratio"}, exp_ratio_grid},
      {{11, "aperture-bound"}, aperture_bound},
  };
  return all;
}

}  // namespace

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> infos = [] {
    std::vector<CriterionInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

bool matches(const CriterionInfo& info, std::string_view filter) {
  return filter.empty() || filter == std::to_string(info.id) ||
         info.name.find(filter) != std::string_view::npos;
}

CriterionResult run_criterion(int id, const Tolerances& tol) {
  const auto& all = entries();
  const auto it =
      std::find_if(all.begin(), all.end(), [id](const Entry& e) { return e.info.id == id; });
  if (it == all.end()) throw std::out_of_range("no criterion " + std::to_string(id));
  CriterionResult result;
  result.id = id;
  result.name = std::string(it->info.name);
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = it->run(tol);
    result.passed = o.passed;
    result.detail = o.detail;
    result.note = o.note;
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("error: ") + e.what();
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (result.seconds > tol.time_limit_s) {
    result.passed = false;
    result.note += (result.note.empty() ? "" : "; ") + std::string("over the time limit");
  }
  return result;
}

std::vector<CriterionResult> run_all(std::string_view filter, const Tolerances& tol) {
  std::vector<CriterionResult> out;
  for (const auto& info : criteria())
    if (matches(info, filter)) out.push_back(run_criterion(info.id, tol));
  return out;
}

std::string format(const CriterionResult& r, bool with_timing) {
  std::ostringstream s;
  s << (r.passed ? "PASS " : "FAIL ") << (r.id < 10 ? " " : "") << r.id << " " << r.name << ": "
    << r.detail;
  if (!r.note.empty()) s << " [" << r.note << "]";
  if (with_timing) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.2f s)", r.seconds);
    s << buf;
  }
  return s.str();
}

}  // namespace cone_gauge::acceptance
