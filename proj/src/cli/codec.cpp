#include "cone_gauge/cli/codec.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cone_gauge::cli {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string sub(const std::string& where, const std::string& key) { return where + "/" + key; }

bool get_bool(const Json& obj, const char* key, const std::string& where) {
  const Json& j = field(obj, key, where);
  if (!j.is_boolean()) fail(sub(where, key), "expected a boolean");
  return j.get<bool>();
}

int get_int(const Json& obj, const char* key, const std::string& where) {
  const Json& j = field(obj, key, where);
  if (!j.is_number_integer()) fail(sub(where, key), "expected an integer");
  return j.get<int>();
}

double get_real(const Json& obj, const char* key, const std::string& where) {
  return decode_real(field(obj, key, where), sub(where, key));
}

std::optional<double> get_optional_real(const Json& obj, const char* key,
                                        const std::string& where) {
  const Json& j = field(obj, key, where);
  if (j.is_null()) return std::nullopt;
  return decode_real(j, sub(where, key));
}

Json encode_optional(const std::optional<double>& v) { return v ? encode_real(*v) : Json(nullptr); }

template <std::size_t N>
Json encode_indices(const std::array<int, N>& a) {
  Json out = Json::array();
  for (int v : a) out.push_back(v);
  return out;
}

template <std::size_t N>
std::array<int, N> decode_indices(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != N) fail(where, "expected " + std::to_string(N) + " indices");
  std::array<int, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!j[i].is_number_integer()) fail(where, "expected integer indices");
    out[i] = j[i].get<int>();
  }
  return out;
}

Json certificate_json(const domination::GapCertificate& c) {
  const auto& k = c.constants;
  return {
      {"certified", c.certified},
      {"condition_lhs", encode_real(c.condition_lhs)},
      {"condition_rhs", encode_real(c.condition_rhs)},
      {"delta_p", encode_real(c.delta_p)},
      {"delta_c_upper", encode_real(c.delta_c_upper)},
      {"eta", encode_optional(c.eta)},
      {"eta_complement", encode_optional(c.eta_complement)},
      {"rho0", encode_real(c.rho0)},
      {"n0", c.n0},
      {"x0", encode_vector(c.x0)},
      {"aux_constant", encode_real(c.aux_constant)},
      {"inner_radius", encode_real(c.inner_radius)},
      {"constants",
       {{"alpha", encode_real(k.alpha)},
        {"beta", encode_real(k.beta)},
        {"gamma", encode_real(k.gamma)},
        {"alpha_witness", encode_indices(k.alpha_witness)},
        {"beta_witness", encode_indices(k.beta_witness)},
        {"gamma_witness", encode_indices(k.gamma_witness)}}},
      {"notes", c.notes},
  };
}

domination::GapCertificate certificate_from(const Json& j, const std::string& where) {
  domination::GapCertificate c;
  c.certified = get_bool(j, "certified", where);
  c.condition_lhs = get_real(j, "condition_lhs", where);
  c.condition_rhs = get_real(j, "condition_rhs", where);
  c.delta_p = get_real(j, "delta_p", where);
  c.delta_c_upper = get_real(j, "delta_c_upper", where);
  c.eta = get_optional_real(j, "eta", where);
  c.eta_complement = get_optional_real(j, "eta_complement", where);
  c.rho0 = get_real(j, "rho0", where);
  c.n0 = get_int(j, "n0", where);
  c.x0 = decode_real_vector(field(j, "x0", where), sub(where, "x0"));
  c.aux_constant = get_real(j, "aux_constant", where);
  c.inner_radius = get_real(j, "inner_radius", where);
  const std::string kw = sub(where, "constants");
  const Json& k = field(j, "constants", where);
  c.constants.alpha = get_real(k, "alpha", kw);
  c.constants.beta = get_real(k, "beta", kw);
  c.constants.gamma = get_real(k, "gamma", kw);
  c.constants.alpha_witness =
      decode_indices<4>(field(k, "alpha_witness", kw), sub(kw, "alpha_witness"));
  c.constants.beta_witness =
      decode_indices<2>(field(k, "beta_witness", kw), sub(kw, "beta_witness"));
  c.constants.gamma_witness =
      decode_indices<4>(field(k, "gamma_witness", kw), sub(kw, "gamma_witness"));
  const Json& notes = field(j, "notes", where);
  if (!notes.is_string()) fail(sub(where, "notes"), "expected a string");
  c.notes = notes.get<std::string>();
  if (c.certified && !c.eta) fail(where, "certified without a contraction factor");
  return c;
}

Json rpf_json(const RpfDetails& r) {
  return {{"sigma", encode_real(r.sigma)},
          {"sigma_prime", encode_real(r.sigma_prime)},
          {"half_delta_p", encode_real(r.half_delta_p)},
          {"s0", encode_real(r.s0)},
          {"simplified_lhs", encode_real(r.simplified_lhs)},
          {"sharp_lhs", encode_real(r.sharp_lhs)},
          {"simplified_certified", r.simplified_certified},
          {"sharp_certified", r.sharp_certified}};
}

RpfDetails rpf_from(const Json& j, const std::string& where) {
  RpfDetails r;
  r.sigma = get_real(j, "sigma", where);
  r.sigma_prime = get_real(j, "sigma_prime", where);
  r.half_delta_p = get_real(j, "half_delta_p", where);
  r.s0 = get_real(j, "s0", where);
  r.simplified_lhs = get_real(j, "simplified_lhs", where);
  r.sharp_lhs = get_real(j, "sharp_lhs", where);
  r.simplified_certified = get_bool(j, "simplified_certified", where);
  r.sharp_certified = get_bool(j, "sharp_certified", where);
  return r;
}

Json spectral_json(const operators::SpectralReport& s) {
  return {{"lambda1", encode_complex(s.lambda1)},
          {"lambda2", encode_complex(s.lambda2)},
          {"lambda2_abs", encode_real(s.lambda2_abs)},
          {"ratio", encode_real(s.ratio)},
          {"h", encode_vector(s.h)},
          {"cstar", encode_vector(s.cstar)},
          {"iterations", s.iterations},
          {"deflated_iterations", s.deflated_iterations},
          {"residual", encode_real(s.residual)},
          {"decay_slope", encode_real(s.decay_slope)}};
}

operators::SpectralReport spectral_from(const Json& j, const std::string& where) {
  operators::SpectralReport s;
  s.lambda1 = decode_complex(field(j, "lambda1", where), sub(where, "lambda1"));
  s.lambda2 = decode_complex(field(j, "lambda2", where), sub(where, "lambda2"));
  s.lambda2_abs = get_real(j, "lambda2_abs", where);
  s.ratio = get_real(j, "ratio", where);
  s.h = decode_complex_vector(field(j, "h", where), sub(where, "h"));
  s.cstar = decode_complex_vector(field(j, "cstar", where), sub(where, "cstar"));
  s.iterations = get_int(j, "iterations", where);
  s.deflated_iterations = get_int(j, "deflated_iterations", where);
  s.residual = get_real(j, "residual", where);
  s.decay_slope = get_real(j, "decay_slope", where);
  return s;
}

Json distance_json(const DistanceRecord& d) {
  Json out = {{"lower", encode_real(d.lower)},
              {"upper", encode_real(d.upper)},
              {"exact", encode_optional(d.exact)},
              {"colinear", d.colinear}};
  if (d.beta_xy) out["beta_xy"] = encode_real(*d.beta_xy);
  if (d.beta_yx) out["beta_yx"] = encode_real(*d.beta_yx);
  return out;
}

DistanceRecord distance_from(const Json& j, const std::string& where) {
  DistanceRecord d;
  d.lower = get_real(j, "lower", where);
  d.upper = get_real(j, "upper", where);
  d.exact = get_optional_real(j, "exact", where);
  d.colinear = get_bool(j, "colinear", where);
  if (j.contains("beta_xy")) d.beta_xy = get_real(j, "beta_xy", where);
  if (j.contains("beta_yx")) d.beta_yx = get_real(j, "beta_yx", where);
  if (!(d.lower <= d.upper)) fail(where, "lower exceeds upper");
  return d;
}

}  // namespace

Json encode_real(double v) {
  if (std::isnan(v)) throw std::invalid_argument("encode_real: NaN");
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double decode_real(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  fail(where, "expected a real number or \"inf\"");
}

Json encode_complex(Complex z) { return Json::array({encode_real(z.real()), encode_real(z.imag())}); }

Complex decode_complex(const Json& j, const std::string& where) {
  if (j.is_array()) {
    if (j.size() != 2) fail(where, "complex scalars are [re, im]");
    return {decode_real(j[0], where + "/0"), decode_real(j[1], where + "/1")};
  }
  return {decode_real(j, where), 0.0};
}

Json encode_vector(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(encode_real(v[i]));
  return out;
}

Json encode_vector(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(encode_complex(v[i]));
  return out;
}

RealVector decode_real_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  RealVector out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = decode_real(j[i], where + "/" + std::to_string(i));
  return out;
}

ComplexVector decode_complex_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  ComplexVector out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = decode_complex(j[i], where + "/" + std::to_string(i));
  return out;
}

Json encode_matrix(const RealMatrix& a) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) out.push_back(encode_vector(RealVector(a.row(i))));
  return out;
}

Json encode_matrix(const ComplexMatrix& a) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    out.push_back(encode_vector(ComplexVector(a.row(i).transpose())));
  return out;
}

namespace {

template <class Matrix, class Decode>
Matrix decode_rows(const Json& j, const std::string& where, Decode decode) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(where, "rows must be non-empty arrays");
  Matrix out(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string row = where + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != cols) fail(row, "ragged matrix");
    const auto v = decode(j[i], row);
    out.row(static_cast<Eigen::Index>(i)) = v.transpose();
  }
  return out;
}

}  // namespace

RealMatrix decode_real_matrix(const Json& j, const std::string& where) {
  return decode_rows<RealMatrix>(j, where, decode_real_vector);
}

ComplexMatrix decode_complex_matrix(const Json& j, const std::string& where) {
  return decode_rows<ComplexMatrix>(j, where, decode_complex_vector);
}

Json to_json(const Report& r) {
  Json out = {{"version", r.version}, {"job", r.job}, {"timing_ms", encode_real(r.timing_ms)}};
  if (r.certificate) out["certificate"] = certificate_json(*r.certificate);
  if (r.rpf) out["rpf"] = rpf_json(*r.rpf);
  if (r.spectral) out["spectral"] = spectral_json(*r.spectral);
  Json d = Json::array();
  for (const auto& rec : r.distances) d.push_back(distance_json(rec));
  out["distances"] = std::move(d);
  return out;
}

Report report_from_json(const Json& j) {
  const std::string root = "report";
  if (!j.is_object()) fail(root, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "version" && key != "job" && key != "timing_ms" && key != "certificate" &&
        key != "rpf" && key != "spectral" && key != "distances") {
      fail(root, "unknown field '" + key + "'");
    }
  }
  Report r;
  const Json& version = field(j, "version", root);
  if (!version.is_string() || version.get<std::string>() != kVersion)
    fail(sub(root, "version"), std::string("expected \"") + kVersion + "\"");
  r.version = version.get<std::string>();
  r.job = field(j, "job", root);
  if (!r.job.is_object()) fail(sub(root, "job"), "expected an object");
  r.timing_ms = get_real(j, "timing_ms", root);
  if (j.contains("certificate"))
    r.certificate = certificate_from(j["certificate"], sub(root, "certificate"));
  if (j.contains("rpf")) r.rpf = rpf_from(j["rpf"], sub(root, "rpf"));
  if (j.contains("spectral")) r.spectral = spectral_from(j["spectral"], sub(root, "spectral"));
  const Json& d = field(j, "distances", root);
  if (!d.is_array()) fail(sub(root, "distances"), "expected an array");
  for (std::size_t i = 0; i < d.size(); ++i)
    r.distances.push_back(distance_from(d[i], sub(root, "distances/" + std::to_string(i))));
  if (r.certificate && r.certificate->certified && r.spectral && !(r.spectral->ratio < 1.0))
    fail(root, "certified report with spectral ratio >= 1");
  return r;
}

void validate_report(const Json& j) { (void)report_from_json(j); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return Json::parse(text.str());
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace cone_gauge::cli
