#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "cone_gauge/domination.hpp"
#include "cone_gauge/errors.hpp"
#include "cone_gauge/integral.hpp"
#include "cone_gauge/random.hpp"
#include "cone_gauge/spectral.hpp"
#include "cone_gauge/transfer.hpp"
#include "oracles/oracles.hpp"

using namespace cone_gauge;
using namespace cone_gauge::operators;

namespace {

constexpr Complex kI{0.0, 1.0};

LinearOperator op_of(const ComplexMatrix& a) { return LinearOperator::from_matrix(a); }

ComplexMatrix sym2() {
  ComplexMatrix a(2, 2);
  a << 2.0, 1.0, 1.0, 2.0;
  return a;
}

// Doubling-map weight 0.02 cos(2 pi x) + 0.01 i sin(2 pi x), scaled by kappa.
TrigWeight desk_weight(double kappa = 1.0) {
  TrigWeight w;
  w.c1 = 0.02 * kappa;
  w.d2 = 0.01 * kappa;
  return w;
}

// Closed-form simplified RPF condition for the doubling map with the
// desk weight scaled by kappa, written out independently.
double simplified_lhs_oracle(double kappa) {
  const double a = 0.04 * kPi * kappa, b = 0.02 * kPi * kappa, th = 0.02 * kappa;
  const double r = 0.5, d = 0.5;
  return (th + 2 * r * r * d * b / (1 - r + r * r * d * a)) *
         std::exp(1 + r * (1 + r) / (1 - r) * d * a) * 4 / (1 - r);
}

double bisect(const std::function<bool(double)>& below, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

IntegralOperatorSpec jentzsch_spec(int n, double lam, double theta) {
  return IntegralOperatorSpec::midpoint(
      n, [](double) { return 1.0; }, [](double) { return 1.0; },
      [=](double x, double y) {
        return Complex(0.5 * lam * std::cos(2 * kPi * x), 0.5 * theta * std::sin(2 * kPi * y));
      });
}

}  // namespace

TEST_CASE("power eigentriple examples") {
  auto r = power_eigentriple(op_of(ComplexMatrix::Ones(2, 2)), ComplexVector::Ones(2));
  CHECK(std::abs(r.lambda1 - 2.0) < 1e-12);
  CHECK(std::abs(r.h[0] - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(r.h[1] - 1.0 / std::sqrt(2.0)) < 1e-12);

  ComplexVector start(2);
  start << 1.0, 0.2;
  r = power_eigentriple(op_of(sym2()), start);
  CHECK(std::abs(r.lambda1 - 3.0) < 1e-10);
  CHECK(std::abs(r.h[0] - r.h[1]) < 1e-10);
  CHECK(std::abs(r.cstar[0] - r.cstar[1]) < 1e-10);
  CHECK(std::abs((r.cstar.transpose() * r.h)(0) - 1.0) < 1e-12);
  CHECK(r.residual < 1e-10);
  CHECK(r.decay_slope == doctest::Approx(std::log(1.0 / 3.0)).epsilon(0.02));
}

TEST_CASE("power eigentriple failures") {
  ComplexMatrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  ComplexVector e0(2);
  e0 << 1.0, 0.0;
  PowerOptions short_run;
  short_run.max_iter = 50;
  try {
    power_eigentriple(op_of(swap), e0, short_run);
    FAIL("oscillating iteration accepted");
  } catch (const ConvergenceError& e) {
    CHECK(std::string(e.what()).find("log-slope") != std::string::npos);
  }
  ComplexVector odd(2);
  odd << 1.0, -1.0;
  CHECK_THROWS_AS(power_eigentriple(op_of(sym2()), odd), ConvergenceError);
  CHECK_THROWS_AS(power_eigentriple(op_of(sym2()), ComplexVector::Ones(3)), PreconditionError);
}

TEST_CASE("top two ratio examples") {
  auto r = top_two_ratio(op_of(sym2()), ComplexVector::Ones(2));
  CHECK(r.ratio == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  r = top_two_ratio(op_of(ComplexMatrix::Ones(5, 5)), ComplexVector::Ones(5));
  CHECK(r.ratio < 1e-12);
  Sampler rng(51);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 11;
    const RealMatrix a = oracle::positive_matrix(rng, n, 1.0, 2.0);
    r = top_two_ratio(op_of(a.cast<Complex>()), ComplexVector::Ones(n));
    CHECK(r.ratio <= 1.0 / 3.0 + 1e-8);
  }
}

TEST_CASE("top two ratio against the characteristic polynomial") {
  Sampler rng(52);
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + t % 5;
    ComplexMatrix a(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        a(i, j) = rng.uniform(0.2, 1.0) * std::exp(kI * rng.uniform(-0.2, 0.2));
    const auto roots = oracle::eigen_moduli_charpoly(a);
    const auto dense = oracle::eigen_moduli_dense(a);
    CHECK(std::abs(roots[0] - dense[0]) <= 1e-9);
    CHECK(std::abs(roots[1] - dense[1]) <= 1e-9);
    const auto r = top_two_ratio(op_of(a), ComplexVector::Ones(n));
    CHECK(std::abs(std::abs(r.lambda1) - roots[0]) <= 1e-7);
    CHECK(std::abs(r.lambda2_abs - roots[1]) <= 1e-7);
  }
}

TEST_CASE("matrix-free deflation matches the dense path") {
  Sampler rng(53);
  const RealMatrix a = oracle::positive_matrix(rng, 9, 0.5, 1.5);
  const ComplexMatrix m = a.cast<Complex>();
  LinearOperator free_op;
  free_op.dim = 9;
  free_op.apply = [m](const ComplexVector& u) -> ComplexVector { return m * u; };
  free_op.apply_transpose = [m](const ComplexVector& u) -> ComplexVector {
    return m.transpose() * u;
  };
  const auto d = top_two_ratio(op_of(m), ComplexVector::Ones(9));
  const auto f = top_two_ratio(free_op, ComplexVector::Ones(9));
  CHECK(std::abs(d.ratio - f.ratio) <= 1e-9);
}

TEST_CASE("iteration decay and eigenprojection on certified matrices") {
  Sampler rng(54);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + t % 6;
    ComplexMatrix a(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        a(i, j) = rng.uniform(0.5, 1.5) * std::exp(kI * rng.uniform(-0.03, 0.03));
    const auto cert = domination::complex_pf_certificate(a);
    if (!cert.certified) continue;
    ++checked;
    const auto r = top_two_ratio(op_of(a), ComplexVector::Ones(n));
    REQUIRE(cert.eta.has_value());
    CHECK(r.decay_slope <= std::log(*cert.eta) + 0.05);
    // Slope of a geometric iteration tracks log |lambda2 / lambda1|.
    if (std::isfinite(r.decay_slope)) CHECK(r.decay_slope <= std::log(r.ratio) + 0.3);
    for (int s = 0; s < 20; ++s) {
      ComplexVector u(n);
      for (int i = 0; i < n; ++i) u[i] = Complex(rng.normal(), rng.normal());
      const ComplexVector target = r.h * (r.cstar.transpose() * u)(0);
      ComplexVector v = u;
      const double e0 = (v - target).norm();
      for (int k = 0; k < 30; ++k) v = a * v / r.lambda1;
      const double e30 = (v - target).norm();
      CHECK(e30 <= 10.0 * std::max(1.0, e0) * std::pow(r.ratio + 0.05, 30) + 1e-12);
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("log slope") {
  std::vector<double> d;
  for (int k = 0; k < 30; ++k) d.push_back(std::pow(0.5, k));
  CHECK(log_slope(d) == doctest::Approx(std::log(0.5)));
  CHECK(log_slope({1.0, 1e-15}) == -kInf);
}

TEST_CASE("integral operator discretization") {
  const auto flat = IntegralOperatorSpec::midpoint(
      4, [](double x) { return 1.0 + x; }, [](double y) { return 2.0 - y; },
      [](double, double) { return Complex(0.0, 0.0); });
  const ComplexMatrix k = discretize_integral(flat);
  const RealMatrix p = integral_comparison(flat);
  CHECK((k - p.cast<Complex>()).norm() < 1e-15);
  Eigen::JacobiSVD<RealMatrix> svd(p);
  CHECK(svd.singularValues()[1] < 1e-14 * svd.singularValues()[0]);

  const auto two = IntegralOperatorSpec::midpoint(
      2, [](double) { return 1.0; }, [](double) { return 1.0; },
      [](double x, double y) { return Complex(x, y); });
  const ComplexMatrix k2 = discretize_integral(two);
  // Nodes 1/4 and 3/4, weights 1/2.
  CHECK(std::abs(k2(0, 1) - 0.5 * std::exp(Complex(0.25, 0.75))) < 1e-15);
  CHECK(std::abs(k2(1, 0) - 0.5 * std::exp(Complex(0.75, 0.25))) < 1e-15);

  IntegralOperatorSpec bad = two;
  bad.h[0] = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(jentzsch_certificate(bad), DomainError);
}

TEST_CASE("jentzsch certificate examples") {
  auto spec = jentzsch_spec(32, 0.0, 0.0);
  auto c = jentzsch_certificate(spec);
  CHECK(c.certified);
  CHECK(spec.theta() == 0.0);
  auto r = top_two_ratio(op_of(discretize_integral(spec)), ComplexVector::Ones(32));
  CHECK(r.ratio < 1e-12);

  const auto shifted = IntegralOperatorSpec::midpoint(
      16, [](double) { return 1.0; }, [](double) { return 1.0; },
      [](double, double) { return Complex(0.3, -1.1); });
  CHECK(shifted.theta() == 0.0);
  CHECK(shifted.lambda_osc() == 0.0);
  CHECK(jentzsch_certificate(shifted).certified);

  spec = jentzsch_spec(64, 0.2, 0.1);
  // Oscillations sampled on midpoint nodes fall slightly short of 0.2 and 0.1.
  CHECK(spec.lambda_osc() == doctest::Approx(0.2 * std::cos(kPi / 64)).epsilon(1e-14));
  CHECK(spec.theta() == doctest::Approx(0.1 * std::cos(kPi / 64)).epsilon(1e-14));
  c = jentzsch_certificate(spec);
  CHECK(c.certified);
  CHECK(std::tan(spec.theta()) < std::exp(-2.0 * spec.lambda_osc()));
  CHECK(c.constants.alpha == doctest::Approx(std::exp(2 * spec.g.real().minCoeff()) *
                                             std::cos(spec.theta())));
  CHECK(c.constants.gamma == doctest::Approx(std::exp(2 * spec.g.real().maxCoeff()) *
                                             std::sin(spec.theta())));
  CHECK(c.delta_p == 0.0);
  CHECK(c.n0 == 1);
  r = top_two_ratio(op_of(discretize_integral(spec)), ComplexVector::Ones(64));
  CHECK(r.ratio < 1.0);

  // tan(theta) >= exp(-2 Lambda): not certified.
  c = jentzsch_certificate(jentzsch_spec(64, 1.0, 0.3));
  CHECK(!c.certified);
  CHECK(!c.eta.has_value());
}

TEST_CASE("jentzsch verdict against the matrix-level domination") {
  Sampler rng(55);
  for (int t = 0; t < 50; ++t) {
    const double lam = rng.uniform(0.0, 1.2);
    const double theta = rng.uniform(0.0, 0.8);
    const auto spec = jentzsch_spec(32, lam, theta);
    const auto j = jentzsch_certificate(spec);
    const auto m =
        domination::certify_dominated(discretize_integral(spec), integral_comparison(spec));
    CHECK(j.certified == (spec.theta() < kPi / 4 &&
                          std::tan(spec.theta()) < std::exp(-2.0 * spec.lambda_osc())));
    // The matrix scan sees the actual pairs, so it is never less permissive.
    if (j.certified) CHECK(m.certified);
    CHECK(m.constants.alpha >= j.constants.alpha * (1 - 1e-12));
    CHECK(m.constants.gamma <= j.constants.gamma * (1 + 1e-12) + 1e-15);
  }
}

TEST_CASE("integral refinement") {
  auto lambda1 = [](int n) {
    const auto spec = jentzsch_spec(n, 0.2, 0.1);
    return power_eigentriple(op_of(discretize_integral(spec)), ComplexVector::Ones(n)).lambda1;
  };
  CHECK(std::abs(lambda1(64) - lambda1(128)) <= 1e-6);
}

TEST_CASE("trig weight constants") {
  TrigWeight w;
  w.c0 = 0.3;
  w.c1 = 0.02;
  w.c2 = -0.01;
  w.d1 = 0.05;
  CHECK(w.lip_re() == doctest::Approx(2 * kPi * std::hypot(0.02, 0.01)));
  CHECK(w.osc_im() == doctest::Approx(0.1));
  const auto spec = TransferOperatorSpec::from_trig(2, w);
  CHECK(spec.rho() == 0.5);
  TransferOperatorSpec lying = spec;
  lying.a = 0.5 * spec.a;
  CHECK_THROWS_AS(lying.validate(), DomainError);
  TransferOperatorSpec deg1 = spec;
  deg1.degree = 1;
  CHECK_THROWS_AS(deg1.validate(), DomainError);
}

TEST_CASE("paired preimages contract") {
  Sampler rng(56);
  for (int t = 0; t < 200; ++t) {
    const int k = 2 + t % 4;
    const double y = rng.uniform(), y2 = rng.uniform();
    for (const auto& [x, x2] : paired_preimages(k, y, y2)) {
      CHECK(circle_distance(x, x2) <= circle_distance(y, y2) / k + 1e-15);
      CHECK(std::abs(std::remainder(k * x - y, 1.0)) < 1e-12);
      CHECK(std::abs(std::remainder(k * x2 - y2, 1.0)) < 1e-12);
    }
  }
}

TEST_CASE("rpf certificate examples") {
  auto zero = rpf_certificate(TransferOperatorSpec::from_trig(2, TrigWeight{}));
  CHECK(zero.simplified_lhs == 0.0);
  CHECK(zero.cert.certified);
  CHECK(zero.sharp_certified);
  const ComplexMatrix t0 = transfer_matrix(TransferOperatorSpec::from_trig(2, TrigWeight{}), 64);
  auto r = top_two_ratio(op_of(t0), ComplexVector::Ones(64));
  CHECK(std::abs(r.lambda1 - 2.0) < 1e-12);
  CHECK(r.ratio < 1e-10);

  const auto desk = rpf_certificate(TransferOperatorSpec::from_trig(2, desk_weight()));
  // Frozen from a 30-digit evaluation of the same closed forms.
  CHECK(desk.sigma == doctest::Approx(4.2513274122871835).epsilon(1e-14));
  CHECK(desk.sigma_prime == doctest::Approx(2.1884955592153876).epsilon(1e-14));
  CHECK(desk.half_delta_p == doctest::Approx(2.2326691057060303).epsilon(1e-14));
  CHECK(desk.s0 == doctest::Approx(0.015229513975710611).epsilon(1e-13));
  CHECK(desk.sharp_lhs == doctest::Approx(0.23822125830911351).epsilon(1e-13));
  CHECK(desk.simplified_lhs == doctest::Approx(1.2057426951312765).epsilon(1e-13));
  CHECK(desk.simplified_lhs == doctest::Approx(simplified_lhs_oracle(1.0)).epsilon(1e-14));
  CHECK(desk.sharp_certified);
  CHECK(!desk.simplified_certified);
  CHECK(desk.cert.certified == desk.simplified_certified);
  // The neighbourhood bound puts delta_c near 215, so eta = 1 - O(1e-187):
  // only the complement is representable.
  REQUIRE(desk.cert.eta_complement.has_value());
  CHECK(*desk.cert.eta_complement > 0.0);
  CHECK(*desk.cert.eta_complement < 1e-150);
  CHECK(desk.cert.delta_c_upper > 100.0);
}

TEST_CASE("rpf threshold matches the closed-form root") {
  // Root of the closed form by an independent bisection on the formula.
  const double oracle_kappa = bisect([](double k) { return simplified_lhs_oracle(k) < 1.0; }, 0.0, 2.0);
  CHECK(oracle_kappa == doctest::Approx(0.83951479757573631).epsilon(1e-12));
  const double flip = bisect(
      [](double k) {
        return rpf_certificate(TransferOperatorSpec::from_trig(2, desk_weight(k))).cert.certified;
      },
      0.0, 2.0);
  CHECK(std::abs(flip - oracle_kappa) <= 1e-10);
  const double sharp_flip = bisect(
      [](double k) {
        return rpf_certificate(TransferOperatorSpec::from_trig(2, desk_weight(k))).sharp_certified;
      },
      0.0, 6.0);
  CHECK(sharp_flip == doctest::Approx(3.2554104311567689).epsilon(1e-9));
}

TEST_CASE("rpf collocation") {
  const auto spec = TransferOperatorSpec::from_trig(2, desk_weight());
  const auto r64 = top_two_ratio(op_of(transfer_matrix(spec, 64)), ComplexVector::Ones(64));
  const auto r128 = top_two_ratio(op_of(transfer_matrix(spec, 128)), ComplexVector::Ones(128));
  CHECK(std::abs(r64.lambda1 - r128.lambda1) <= 1e-6);
  CHECK(r64.ratio < 1.0);
  // Collocation reproduces the exact action on trigonometric polynomials.
  ComplexVector phi(64);
  for (int i = 0; i < 64; ++i) phi[i] = std::exp(Complex(0.0, 2 * kPi * 3 * i / 64.0)) + 0.5;
  const auto out = transfer_apply(spec, phi);
  for (int i = 0; i < 64; i += 7) {
    const Complex exact = transfer_apply_function(
        spec, [](double x) { return std::exp(Complex(0.0, 2 * kPi * 3 * x)) + 0.5; }, i / 64.0);
    CHECK(std::abs(out.values[i] - exact) < 1e-12);
  }
  CHECK(!out.nonsmooth);
  CHECK_THROWS_AS(transfer_matrix(spec, 63), PreconditionError);
}

TEST_CASE("transfer apply examples") {
  const auto zero = TransferOperatorSpec::from_trig(2, TrigWeight{});
  auto out = transfer_apply(zero, ComplexVector::Ones(32));
  CHECK((out.values - ComplexVector::Constant(32, 2.0)).norm() < 1e-12);
  ComplexVector wave(32);
  for (int i = 0; i < 32; ++i) wave[i] = std::exp(Complex(0.0, 2 * kPi * i / 32.0));
  out = transfer_apply(zero, wave);
  CHECK(out.values.norm() < 1e-12);

  ComplexVector spiky = ComplexVector::Zero(32);
  spiky[5] = 1.0;
  CHECK(transfer_apply(zero, spiky).nonsmooth);

  const auto spec = TransferOperatorSpec::from_trig(3, desk_weight(2.0));
  Sampler rng(57);
  ComplexVector f(48), g(48);
  for (int i = 0; i < 48; ++i) {
    f[i] = Complex(rng.normal(), rng.normal());
    g[i] = Complex(rng.normal(), rng.normal());
  }
  const Complex a(0.3, -1.2), b(2.0, 0.5);
  const ComplexVector lhs = transfer_apply(spec, a * f + b * g).values;
  const ComplexVector rhs = a * transfer_apply(spec, f).values + b * transfer_apply(spec, g).values;
  CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
}

TEST_CASE("lipschitz cone membership") {
  CHECK(lipschitz_cone_membership(RealVector::Ones(16), 0.1));
  RealVector bump(64);
  for (int i = 0; i < 64; ++i) bump[i] = 1.0 + 0.5 * std::cos(2 * kPi * i / 64.0);
  CHECK(lipschitz_cone_membership(bump, 50.0));
  CHECK(!lipschitz_cone_membership(bump, 1e-3));
  RealVector neg = RealVector::Ones(8);
  neg[3] = -0.1;
  CHECK(!lipschitz_cone_membership(neg, 100.0));
}

TEST_CASE("real transfer operator maps the Lipschitz cone inward") {
  TrigWeight w;
  w.c1 = 0.3;
  w.c2 = -0.2;
  const auto spec = TransferOperatorSpec::from_trig(2, w);
  const double sigma = 3.0;
  const double sigma2 = spec.rho() * (spec.a + sigma);
  Sampler rng(58);
  for (int t = 0; t < 100; ++t) {
    // log phi = sigma * psi with Lip(psi) <= 1.
    double c[3], p[3];
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
      c[k] = rng.uniform();
      p[k] = rng.uniform(0.0, 2 * kPi);
      total += c[k];
    }
    auto phi = [&](double x) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += c[k] / total * std::cos(2 * kPi * (k + 1) * x + p[k]) / (2 * kPi * (k + 1));
      return Complex(std::exp(sigma * s), 0.0);
    };
    RealVector in(64), out(64);
    for (int i = 0; i < 64; ++i) {
      in[i] = phi(i / 64.0).real();
      out[i] = transfer_apply_function(spec, phi, i / 64.0).real();
    }
    CHECK(lipschitz_cone_membership(in, sigma));
    CHECK(lipschitz_cone_membership(out, sigma2));
  }
}
