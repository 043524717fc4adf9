#pragma once
// JSON model files and assessment reports.
//
// {
//   "format_version": 1,
//   "variant": "me" | "mp1" | "mp2" | "rect" | "ltri" | "utri",
//   "method": "ccc" | "scc" | "given",
//   "names": [...], "lower": [...], "upper": [...],
//   "correlation": [row-major n*n],
//   "shape": [row-major n*n]        (MP variants)
//   "covariance": [row-major n*n]   (ME)
// }
//
// Hand-written MP files may give "scaled_shape" (the product D_X S, as it is
// usually printed) instead of "shape", and may omit "correlation"; R is then
// recovered by normalizing S S^T to unit diagonal, which undoes the row
// weights for every rule with H H^T = R (not MP-I).

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncvx/correlation.hpp"
#include "ncvx/domain.hpp"
#include "ncvx/error.hpp"
#include "ncvx/model.hpp"

namespace ncvx {

inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline nlohmann::json flatten(const Matrix& m) { return nlohmann::json(m.data()); }

inline const nlohmann::json& require_key(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw Error(Errc::ParseError, std::string("model file lacks key '") + key + "'");
  return j.at(key);
}

inline std::vector<double> real_array(const nlohmann::json& j, const char* key, std::size_t expected) {
  const nlohmann::json& a = require_key(j, key);
  if (!a.is_array()) throw Error(Errc::ParseError, std::string("'") + key + "' must be an array");
  if (a.size() != expected) {
    throw Error(Errc::ParseError, std::string("'") + key + "' has " + std::to_string(a.size()) +
                                      " entries, expected " + std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!a[k].is_number()) {
      throw Error(Errc::ParseError, std::string("'") + key + "' entry " + std::to_string(k) + " is not a number");
    }
    out.push_back(a[k].get<double>());
  }
  return out;
}

inline Matrix square_from(const nlohmann::json& j, const char* key, std::size_t n) {
  return Matrix::from_rows(n, n, real_array(j, key, n * n));
}

inline ShapeMatrix shape_from_scaled(const Matrix& scaled, const MarginalSpec& spec) {
  constexpr double kRowSumTolerance = 0.01;
  const std::size_t n = spec.size();
  ShapeMatrix s{Matrix(n, n), Vector(n, std::nan(""))};
  for (std::size_t i = 0; i < n; ++i) {
    const double radius = spec.interval(i).radius();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += std::abs(scaled(i, j) / radius);
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw Error(Errc::ParseError, "row " + std::to_string(i + 1) + " of 'scaled_shape' divided by its radius sums to " +
                                        std::to_string(sum) + ", not 1");
    }
    for (std::size_t j = 0; j < n; ++j) s.entries(i, j) = scaled(i, j) / radius / sum;
  }
  return s;
}

inline Matrix correlation_from_shape(const Matrix& s) {
  const Matrix g = s * s.transposed();
  const std::size_t n = g.rows();
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = i == j ? 1.0 : g(i, j) / std::sqrt(g(i, i) * g(j, j));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) r(j, i) = r(i, j);
  return r;
}

}  // namespace detail

inline nlohmann::json model_to_json(const ConvexModel& model) {
  nlohmann::json j;
  j["format_version"] = kModelFormatVersion;
  j["variant"] = std::string(variant_tag(model.variant()));
  j["method"] = std::string(method_tag(model.correlation().method()));
  j["names"] = model.spec().names();
  j["lower"] = model.spec().lowers();
  j["upper"] = model.spec().uppers();
  j["correlation"] = detail::flatten(model.correlation().matrix());
  if (model.shape()) {
    j["shape"] = detail::flatten(model.shape()->entries);
    bool weights_known = true;
    for (double w : model.shape()->weights) weights_known = weights_known && std::isfinite(w);
    if (weights_known) j["shape_weights"] = model.shape()->weights;
  }
  if (model.covariance()) j["covariance"] = detail::flatten(*model.covariance());
  return j;
}

inline std::string serialize(const ConvexModel& model) { return model_to_json(model).dump(2) + "\n"; }

inline ConvexModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "model file must be a JSON object");
  const nlohmann::json& version = detail::require_key(j, "format_version");
  if (!version.is_number_integer() || version.get<int>() != kModelFormatVersion) {
    throw Error(Errc::ParseError, "unsupported format_version " + version.dump());
  }
  const nlohmann::json& variant_node = detail::require_key(j, "variant");
  if (!variant_node.is_string()) throw Error(Errc::ParseError, "'variant' must be a string");
  const ModelVariant variant = parse_variant(variant_node.get<std::string>());
  CorrelationMethod method = CorrelationMethod::Given;
  if (j.contains("method")) {
    if (!j.at("method").is_string()) throw Error(Errc::ParseError, "'method' must be a string");
    method = parse_method(j.at("method").get<std::string>());
  }

  const nlohmann::json& names_node = detail::require_key(j, "names");
  if (!names_node.is_array()) throw Error(Errc::ParseError, "'names' must be an array");
  std::vector<std::string> names;
  for (const auto& name : names_node) {
    if (!name.is_string()) throw Error(Errc::ParseError, "'names' entries must be strings");
    names.push_back(name.get<std::string>());
  }
  const std::size_t n = names.size();
  if (n == 0) throw Error(Errc::ParseError, "'names' is empty");
  const auto lower = detail::real_array(j, "lower", n);
  const auto upper = detail::real_array(j, "upper", n);
  std::vector<Interval> intervals;
  for (std::size_t i = 0; i < n; ++i) intervals.emplace_back(lower[i], upper[i]);
  MarginalSpec spec(std::move(names), std::move(intervals));

  std::optional<ShapeMatrix> shape;
  if (is_parallelepiped(variant)) {
    if (j.contains("shape")) {
      Vector weights(n, std::nan(""));
      if (j.contains("shape_weights")) weights = detail::real_array(j, "shape_weights", n);
      shape = ShapeMatrix{detail::square_from(j, "shape", n), std::move(weights)};
    } else if (j.contains("scaled_shape")) {
      shape = detail::shape_from_scaled(detail::square_from(j, "scaled_shape", n), spec);
    }
  }

  Matrix r;
  if (j.contains("correlation")) {
    r = detail::square_from(j, "correlation", n);
  } else if (shape && variant != ModelVariant::MpI) {
    r = detail::correlation_from_shape(shape->entries);
  } else {
    throw Error(Errc::ParseError, "model file lacks key 'correlation'");
  }
  CorrelationMatrix correlation(std::move(r), method, variant);

  if (variant == ModelVariant::Ellipsoid) return build_model(variant, spec, correlation);
  if (!shape) return build_model(variant, spec, correlation);
  return ConvexModel::from_parts(variant, std::move(spec), std::move(correlation), std::move(shape));
}

inline ConvexModel deserialize(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  try {
    return model_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

inline nlohmann::json report_to_json(const AssessmentReport& r) {
  return {{"enclosed", r.enclosed}, {"total", r.total},       {"kappa", r.kappa},   {"nu", r.nu},
          {"nu_bar", r.nu_bar},     {"excluded", r.excluded}, {"levels", r.levels}};
}

inline AssessmentReport report_from_json(const nlohmann::json& j) {
  try {
    AssessmentReport r;
    r.enclosed = j.at("enclosed").get<std::size_t>();
    r.total = j.at("total").get<std::size_t>();
    r.kappa = j.at("kappa").get<double>();
    r.nu = j.at("nu").get<double>();
    r.nu_bar = j.at("nu_bar").get<double>();
    r.excluded = j.at("excluded").get<std::vector<std::size_t>>();
    if (j.contains("levels")) r.levels = j.at("levels").get<std::vector<double>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

}  // namespace ncvx
