#pragma once

// JSON and CSV encodings.
//
//   matrix:        {"rows": r, "cols": c, "data": [[re, im], ...]}  row-major
//   grid function: {"n_points": n, "domain_start": k, "values": [matrix, ...]}
//
// Infinity markers serialise as the string "inf"; fields that were not
// computed serialise as null.

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "axc/douglas.hpp"
#include "axc/oracle.hpp"
#include "axc/projpair.hpp"

namespace axc::io {

using json = nlohmann::json;

namespace detail {

inline double finite_number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorKind::Parse, std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorKind::Parse, std::string(what) + " must be finite");
  return v;
}

inline std::size_t count(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 0) {
    throw Error(ErrorKind::Parse, std::string("missing or invalid \"") + key + "\"");
  }
  return j.at(key).get<std::size_t>();
}

inline json extended(const douglas::ExtendedReal& x) {
  return x.finite ? json(x.value) : json("inf");
}

inline douglas::ExtendedReal parse_extended(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return douglas::ExtendedReal::infinite();
  return douglas::ExtendedReal::of(finite_number(j, "extended scalar"));
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> parse_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace detail

// -- matrices ---------------------------------------------------------------

inline json to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Parse, "matrix must be a JSON object");
  const std::size_t rows = detail::count(j, "rows");
  const std::size_t cols = detail::count(j, "cols");
  if (!j.contains("data") || !j.at("data").is_array()) {
    throw Error(ErrorKind::Parse, "matrix \"data\" must be an array");
  }
  const json& data = j.at("data");
  if (data.size() != rows * cols) {
    throw Error(ErrorKind::Parse, "matrix \"data\" has " + std::to_string(data.size()) +
                                      " entries, expected rows*cols = " +
                                      std::to_string(rows * cols));
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index c = 0; c < m.cols(); ++c, ++k) {
      const json& entry = data[k];
      if (!entry.is_array() || entry.size() != 2) {
        throw Error(ErrorKind::Parse, "matrix entries must be [re, im] pairs");
      }
      m(i, c) = Complex(detail::finite_number(entry[0], "real part"),
                        detail::finite_number(entry[1], "imaginary part"));
    }
  }
  return m;
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

inline Matrix parse_matrix(const std::string& text) { return matrix_from_json(parse_text(text)); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Matrix load_matrix(const std::string& path) { return parse_matrix(read_file(path)); }

// -- tolerance, majorization, reports ----------------------------------------

inline json to_json(const ToleranceConfig& tol) {
  return {{"rank_rtol", tol.rank_rtol},
          {"psd_atol", tol.psd_atol},
          {"residual_atol", tol.residual_atol}};
}

inline json to_json(const MajorizationResult& m) {
  return {{"finite", m.finite}, {"mu_star", m.finite ? json(m.mu_star) : json("inf")}};
}

inline MajorizationResult majorization_from_json(const json& j) {
  MajorizationResult m;
  m.finite = j.at("finite").get<bool>();
  m.mu_star = m.finite ? detail::finite_number(j.at("mu_star"), "mu_star") : 0.0;
  return m;
}

inline douglas::Verdict verdict_from_string(const std::string& s) {
  using douglas::Verdict;
  for (Verdict v : {Verdict::Unsolvable, Verdict::SolvableGeneral, Verdict::SolvableHermitian,
                    Verdict::SolvablePositive}) {
    if (douglas::to_string(v) == s) return v;
  }
  throw Error(ErrorKind::Parse, "unknown verdict " + s);
}

inline douglas::LambdaStatus lambda_status_from_string(const std::string& s) {
  using douglas::LambdaStatus;
  for (LambdaStatus v : {LambdaStatus::Converged, LambdaStatus::Divergent,
                         LambdaStatus::Inconclusive}) {
    if (douglas::to_string(v) == s) return v;
  }
  throw Error(ErrorKind::Parse, "unknown lambda status " + s);
}

inline json to_json(const douglas::SolvabilityReport& r) {
  json j;
  j["range_ok"] = r.range_ok;
  j["ca_star_hermitian"] = r.ca_star_hermitian;
  j["ca_star_psd"] = detail::optional_json(r.ca_star_psd);
  j["t_min"] = r.t_min ? detail::extended(*r.t_min) : json(nullptr);
  j["dp_range_eq"] = detail::optional_json(r.dp_range_eq);
  if (r.lambda_estimate) {
    const auto& l = *r.lambda_estimate;
    j["lambda_estimate"] = {{"value", l.value},
                            {"status", douglas::to_string(l.status)},
                            {"horizon", l.horizon}};
  } else {
    j["lambda_estimate"] = nullptr;
  }
  j["verdict"] = douglas::to_string(r.verdict);
  j["criteria_agree"] = detail::optional_json(r.criteria_agree);
  j["certificate"] = {
      {"failed_condition", r.certificate.failed_condition},
      {"range_residual", r.certificate.range_residual},
      {"hermitian_defect", r.certificate.hermitian_defect},
      {"ca_star_min_eigenvalue", detail::optional_json(r.certificate.ca_star_min_eigenvalue)},
      {"dp_range_residual", detail::optional_json(r.certificate.dp_range_residual)},
  };
  return j;
}

inline douglas::SolvabilityReport report_from_json(const json& j) {
  douglas::SolvabilityReport r;
  try {
    r.range_ok = j.at("range_ok").get<bool>();
    r.ca_star_hermitian = j.at("ca_star_hermitian").get<bool>();
    r.ca_star_psd = detail::parse_optional<bool>(j, "ca_star_psd");
    if (!j.at("t_min").is_null()) r.t_min = detail::parse_extended(j.at("t_min"));
    r.dp_range_eq = detail::parse_optional<bool>(j, "dp_range_eq");
    if (!j.at("lambda_estimate").is_null()) {
      const json& l = j.at("lambda_estimate");
      r.lambda_estimate = douglas::LambdaEstimate{
          l.at("value").get<double>(), lambda_status_from_string(l.at("status").get<std::string>()),
          l.at("horizon").get<std::uint64_t>()};
    }
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.criteria_agree = detail::parse_optional<bool>(j, "criteria_agree");
    const json& c = j.at("certificate");
    r.certificate.failed_condition = c.at("failed_condition").get<std::string>();
    r.certificate.range_residual = c.at("range_residual").get<double>();
    r.certificate.hermitian_defect = c.at("hermitian_defect").get<double>();
    r.certificate.ca_star_min_eigenvalue = detail::parse_optional<double>(c, "ca_star_min_eigenvalue");
    r.certificate.dp_range_residual = detail::parse_optional<double>(c, "dp_range_residual");
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  return r;
}

// -- grid functions -----------------------------------------------------------

inline json to_json(const projpair::GridFunction& f) {
  json values = json::array();
  for (const auto& v : f.values) values.push_back(to_json(Matrix(v)));
  return {{"n_points", f.grid.size()}, {"domain_start", f.domain_start}, {"values", values}};
}

inline projpair::GridFunction grid_function_from_json(const json& j) {
  const std::size_t n = detail::count(j, "n_points");
  const std::size_t start = j.contains("domain_start") ? detail::count(j, "domain_start") : 0;
  if (!j.contains("values") || !j.at("values").is_array()) {
    throw Error(ErrorKind::Parse, "grid function \"values\" must be an array");
  }
  projpair::GridFunction f{projpair::Grid(n), start, {}};
  if (start >= n || j.at("values").size() != n - start) {
    throw Error(ErrorKind::Parse, "grid function has the wrong number of values");
  }
  for (const json& v : j.at("values")) {
    const Matrix m = matrix_from_json(v);
    if (m.rows() != 2 || m.cols() != 2) throw Error(ErrorKind::Parse, "values must be 2x2");
    f.values.emplace_back(m);
  }
  return f;
}

inline void write_csv(std::ostream& out, const projpair::GridFunction& f) {
  out << "t,re11,im11,re12,im12,re21,im21,re22,im22\n";
  out.precision(17);
  for (std::size_t i = f.domain_start; i < f.grid.size(); ++i) {
    const projpair::Mat2& v = f.at(i);
    out << f.grid.t(i);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out << ',' << v(r, c).real() << ',' << v(r, c).imag();
    out << '\n';
  }
}

inline json to_json(const projpair::NonexistenceCertificate& c) {
  return {{"boundary_value", c.boundary_value},
          {"interior_limit", c.interior_limit},
          {"gap", c.gap},
          {"grid_resolution", c.grid_resolution},
          {"candidate_residual", c.candidate_residual}};
}

inline projpair::NonexistenceCertificate certificate_from_json(const json& j) {
  projpair::NonexistenceCertificate c;
  c.boundary_value = detail::finite_number(j.at("boundary_value"), "boundary_value");
  c.interior_limit = detail::finite_number(j.at("interior_limit"), "interior_limit");
  c.gap = detail::finite_number(j.at("gap"), "gap");
  c.grid_resolution = detail::count(j, "grid_resolution");
  c.candidate_residual = detail::finite_number(j.at("candidate_residual"), "candidate_residual");
  return c;
}

// -- verify reports -----------------------------------------------------------

inline json to_json(const oracle::PropertyReport& r) {
  json props = json::array();
  for (const auto& p : r.properties) {
    props.push_back({{"name", p.name}, {"checked", p.checked}, {"passed", p.passed}});
  }
  json j = {{"trials", r.spec.trials},
            {"seed", r.spec.seed},
            {"min_dim", r.spec.min_dim},
            {"max_dim", r.spec.max_dim},
            {"rank_policy", oracle::to_string(r.spec.rank_policy)},
            {"properties", props},
            {"violations", r.violations()}};
  if (r.first_failure) {
    const auto& f = *r.first_failure;
    j["first_failure"] = {{"property", f.property},
                          {"trial", f.trial},
                          {"detail", f.detail},
                          {"a", to_json(f.a)},
                          {"c", to_json(f.c)}};
  } else {
    j["first_failure"] = nullptr;
  }
  return j;
}

}  // namespace axc::io
