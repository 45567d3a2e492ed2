#include "cone_gauge/cli/jobs.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <set>

#include "cone_gauge/complex_cone.hpp"
#include "cone_gauge/domination.hpp"
#include "cone_gauge/errors.hpp"
#include "cone_gauge/integral.hpp"
#include "cone_gauge/spectral.hpp"
#include "cone_gauge/transfer.hpp"

namespace cone_gauge::cli {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

void allow_keys(const Json& obj, std::initializer_list<const char*> keys,
                const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(where, "unknown field '" + key + "'");
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

int get_int(const Json& obj, const char* key, const std::string& where, int lo, int hi) {
  const Json& j = require(obj, key, where);
  const std::string at = where + "/" + key;
  if (!j.is_number_integer()) fail(at, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi)
    fail(at, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

ComplexMatrix square_complex(const Json& obj, const char* key, const std::string& where) {
  const ComplexMatrix m = decode_complex_matrix(require(obj, key, where), where + "/" + key);
  if (m.rows() != m.cols()) fail(where + "/" + key, "matrix must be square");
  return m;
}

struct Dominated {
  ComplexMatrix m;
  RealMatrix p;
};

Dominated dominated_payload(const Json& p, const std::string& where) {
  allow_keys(p, {"matrix", "comparison"}, where);
  Dominated d{square_complex(p, "matrix", where),
              decode_real_matrix(require(p, "comparison", where), where + "/comparison")};
  if (d.p.rows() != d.m.rows() || d.p.cols() != d.m.cols())
    fail(where + "/comparison", "shape differs from the matrix");
  if (!(d.p.array() > 0.0).all() || !d.p.allFinite())
    fail(where + "/comparison", "entries must be positive and finite");
  return d;
}

operators::IntegralOperatorSpec jentzsch_payload(const Json& p, const std::string& where) {
  allow_keys(p, {"n", "g", "g_modes", "h", "m"}, where);
  const int n = get_int(p, "n", where, 1, 4096);
  if (p.contains("g") == p.contains("g_modes"))
    fail(where, "give exactly one of 'g' and 'g_modes'");
  struct Mode {
    int p, q;
    Complex c;
  };
  std::vector<Mode> modes;
  if (p.contains("g_modes")) {
    const Json& list = p["g_modes"];
    if (!list.is_array()) fail(where + "/g_modes", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = where + "/g_modes/" + std::to_string(i);
      allow_keys(list[i], {"p", "q", "c"}, at);
      modes.push_back({get_int(list[i], "p", at, -1000, 1000), get_int(list[i], "q", at, -1000, 1000),
                       decode_complex(require(list[i], "c", at), at + "/c")});
    }
  }
  auto spec = operators::IntegralOperatorSpec::midpoint(
      n, [](double) { return 1.0; }, [](double) { return 1.0; },
      [&modes](double x, double y) {
        Complex g(0.0, 0.0);
        for (const auto& md : modes)
          g += md.c * std::exp(Complex(0.0, 2.0 * kPi * (md.p * x + md.q * y)));
        return g;
      });
  if (p.contains("g")) {
    spec.g = decode_complex_matrix(p["g"], where + "/g");
    if (spec.g.rows() != n || spec.g.cols() != n) fail(where + "/g", "expected n x n samples");
  }
  for (const char* key : {"h", "m"}) {
    if (!p.contains(key)) continue;
    const RealVector v = decode_real_vector(p[key], where + "/" + key);
    if (v.size() != n) fail(where + "/" + key, "expected n samples");
    (std::string(key) == "h" ? spec.h : spec.m) = v;
  }
  try {
    spec.validate();
  } catch (const DomainError& e) {
    fail(where, e.what());
  }
  return spec;
}

struct Rpf {
  operators::TransferOperatorSpec spec;
  int collocation = 64;
};

Rpf rpf_payload(const Json& p, const std::string& where) {
  allow_keys(p, {"degree", "weight", "collocation"}, where);
  const int degree = get_int(p, "degree", where, 2, 64);
  const Json& wj = require(p, "weight", where);
  const std::string ww = where + "/weight";
  allow_keys(wj, {"c0", "c1", "c2", "d0", "d1", "d2"}, ww);
  operators::TrigWeight w;
  auto coef = [&](const char* key, double& out) {
    if (wj.contains(key)) out = decode_real(wj[key], ww + "/" + key);
    if (!std::isfinite(out)) fail(ww + "/" + key, "must be finite");
  };
  coef("c0", w.c0);
  coef("c1", w.c1);
  coef("c2", w.c2);
  coef("d0", w.d0);
  coef("d1", w.d1);
  coef("d2", w.d2);
  Rpf r{operators::TransferOperatorSpec::from_trig(degree, w), 64};
  if (p.contains("collocation")) {
    r.collocation = get_int(p, "collocation", where, 2, 4096);
    if (r.collocation % (2 * degree) != 0)
      fail(where + "/collocation", "must be a multiple of 2 * degree");
  }
  try {
    r.spec.validate();
  } catch (const DomainError& e) {
    fail(where, e.what());
  }
  return r;
}

template <class Vector, class Decode>
std::vector<std::pair<Vector, Vector>> pairs_payload(const Json& p, int dim,
                                                     const std::string& where, Decode decode) {
  const Json& list = require(p, "pairs", where);
  if (!list.is_array() || list.empty()) fail(where + "/pairs", "expected a non-empty array");
  std::vector<std::pair<Vector, Vector>> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string at = where + "/pairs/" + std::to_string(i);
    allow_keys(list[i], {"x", "y"}, at);
    Vector x = decode(require(list[i], "x", at), at + "/x");
    Vector y = decode(require(list[i], "y", at), at + "/y");
    if (x.size() != dim || y.size() != dim) fail(at, "dimension differs from the cone");
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

const std::set<std::string>& kinds() {
  static const std::set<std::string> k = {"matrix-pf", "dominated", "jentzsch",
                                          "rpf",       "gauge",     "hilbert"};
  return k;
}

void validate_payload(const std::string& kind, const Json& p) {
  const std::string where = "job/payload";
  if (kind == "matrix-pf") {
    allow_keys(p, {"matrix"}, where);
    square_complex(p, "matrix", where);
  } else if (kind == "dominated") {
    dominated_payload(p, where);
  } else if (kind == "jentzsch") {
    jentzsch_payload(p, where);
  } else if (kind == "rpf") {
    rpf_payload(p, where);
  } else {
    allow_keys(p, {"cone", "pairs"}, where);
    const auto cone = parse_cone(require(p, "cone", where), where + "/cone");
    if (kind == "gauge")
      pairs_payload<ComplexVector>(p, cone.dim(), where, decode_complex_vector);
    else
      pairs_payload<RealVector>(p, cone.dim(), where, decode_real_vector);
  }
}

std::optional<operators::SpectralReport> oracle(const JobSpec& job, const ComplexMatrix& a) {
  if (!job.oracle) return std::nullopt;
  operators::TopTwoOptions options;
  options.seed = job.seed;
  auto r = operators::top_two_ratio(operators::LinearOperator::from_matrix(a),
                                    ComplexVector::Ones(a.rows()), options);
  r.diff_history.clear();
  return r;
}

}  // namespace

Json JobSpec::to_json() const {
  return {{"kind", kind}, {"payload", payload}, {"oracle", oracle}, {"seed", seed}};
}

real_cone::RealCone parse_cone(const Json& j, const std::string& where) {
  allow_keys(j, {"orthant", "dual"}, where);
  if (j.contains("orthant") == j.contains("dual"))
    fail(where, "give exactly one of 'orthant' and 'dual'");
  try {
    if (j.contains("orthant"))
      return real_cone::RealCone::positive_orthant(get_int(j, "orthant", where, 1, 4096));
    return real_cone::RealCone(decode_real_matrix(j["dual"], where + "/dual"));
  } catch (const PreconditionError& e) {
    fail(where, e.what());
  } catch (const DomainError& e) {
    fail(where, e.what());
  }
}

JobSpec parse_job(const Json& j) {
  const std::string where = "job";
  allow_keys(j, {"kind", "payload", "oracle", "seed"}, where);
  JobSpec job;
  const Json& kind = require(j, "kind", where);
  if (!kind.is_string() || !kinds().count(kind.get<std::string>()))
    fail(where + "/kind",
         "expected one of matrix-pf, dominated, jentzsch, rpf, gauge, hilbert");
  job.kind = kind.get<std::string>();
  job.payload = require(j, "payload", where);
  if (j.contains("oracle")) {
    if (!j["oracle"].is_boolean()) fail(where + "/oracle", "expected a boolean");
    job.oracle = j["oracle"].get<bool>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail(where + "/seed", "expected a non-negative integer");
    job.seed = j["seed"].get<std::uint64_t>();
  }
  validate_payload(job.kind, job.payload);
  return job;
}

Report run_job(const JobSpec& job) {
  const auto start = std::chrono::steady_clock::now();
  const std::string where = "job/payload";
  const Json& p = job.payload;
  Report r;
  r.job = job.to_json();
  if (job.kind == "matrix-pf") {
    const ComplexMatrix m = square_complex(p, "matrix", where);
    r.certificate = domination::complex_pf_certificate(m);
    r.spectral = oracle(job, m);
  } else if (job.kind == "dominated") {
    const auto d = dominated_payload(p, where);
    r.certificate = domination::certify_dominated(d.m, d.p);
    r.spectral = oracle(job, d.m);
  } else if (job.kind == "jentzsch") {
    const auto spec = jentzsch_payload(p, where);
    r.certificate = operators::jentzsch_certificate(spec);
    r.spectral = oracle(job, operators::discretize_integral(spec));
  } else if (job.kind == "rpf") {
    const auto rpf = rpf_payload(p, where);
    const auto c = operators::rpf_certificate(rpf.spec);
    r.certificate = c.cert;
    r.rpf = RpfDetails{c.sigma,          c.sigma_prime, c.half_delta_p,          c.s0,
                       c.simplified_lhs, c.sharp_lhs,   c.simplified_certified, c.sharp_certified};
    if (job.oracle) r.spectral = oracle(job, operators::transfer_matrix(rpf.spec, rpf.collocation));
  } else if (job.kind == "gauge") {
    const auto real = parse_cone(require(p, "cone", where), where + "/cone");
    const complex_cone::ComplexCone cone(real);
    for (const auto& [x, y] : pairs_payload<ComplexVector>(p, real.dim(), where,
                                                           decode_complex_vector)) {
      const auto g = complex_cone::gauge(cone, x, y);
      r.distances.push_back({g.bracket.lower, g.bracket.upper, g.exact, g.colinear, {}, {}});
    }
  } else {
    const auto cone = parse_cone(require(p, "cone", where), where + "/cone");
    for (const auto& [x, y] :
         pairs_payload<RealVector>(p, cone.dim(), where, decode_real_vector)) {
      const auto d = real_cone::hilbert_metric(cone, x, y);
      r.distances.push_back(
          {d.value, d.value, d.value, !d.segment.has_value(), d.beta_xy, d.beta_yx});
    }
  }
  r.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int report_exception() {
  try {
    throw;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "cone-gauge: no convergence: %s\n", e.what());
    return kExitConvergence;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "cone-gauge: invalid input: %s\n", e.what());
    return kExitValidation;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "cone-gauge: invalid input: %s\n", e.what());
    return kExitValidation;
  } catch (const PreconditionError& e) {
    std::fprintf(stderr, "cone-gauge: invalid input: %s\n", e.what());
    return kExitValidation;
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "cone-gauge: invalid input: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cone-gauge: error: %s\n", e.what());
    return kExitFailure;
  }
}

}  // namespace cone_gauge::cli
