#pragma once

#include <array>
#include <string>
#include <string_view>

#include "ncvx/error.hpp"

namespace ncvx {

/// Convex model family. Ellipsoid is the ME model; the other five are the
/// parallelepiped (MP) variants, distinguished by how the core of the shape
/// matrix is derived from R.
enum class ModelVariant { Ellipsoid, MpI, MpII, Rectangular, LowerTriangular, UpperTriangular };

inline constexpr std::array<ModelVariant, 6> kAllVariants = {
    ModelVariant::Ellipsoid,   ModelVariant::MpII,           ModelVariant::MpI,
    ModelVariant::Rectangular, ModelVariant::LowerTriangular, ModelVariant::UpperTriangular};

inline bool is_parallelepiped(ModelVariant v) noexcept { return v != ModelVariant::Ellipsoid; }

/// Short tag used by the CLI and in model files.
inline std::string_view variant_tag(ModelVariant v) {
  switch (v) {
    case ModelVariant::Ellipsoid: return "me";
    case ModelVariant::MpI: return "mp1";
    case ModelVariant::MpII: return "mp2";
    case ModelVariant::Rectangular: return "rect";
    case ModelVariant::LowerTriangular: return "ltri";
    case ModelVariant::UpperTriangular: return "utri";
  }
  return "?";
}

inline std::string_view variant_display_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::Ellipsoid: return "ME";
    case ModelVariant::MpI: return "MP-I";
    case ModelVariant::MpII: return "MP-II";
    case ModelVariant::Rectangular: return "RectMP";
    case ModelVariant::LowerTriangular: return "LTriMP";
    case ModelVariant::UpperTriangular: return "UTriMP";
  }
  return "?";
}

inline ModelVariant parse_variant(std::string_view tag) {
  for (ModelVariant v : kAllVariants)
    if (tag == variant_tag(v) || tag == variant_display_name(v)) return v;
  throw Error(Errc::ParseError, "unknown model variant '" + std::string(tag) + "'");
}

enum class CorrelationMethod { Ccc, Scc, Given };

inline std::string_view method_tag(CorrelationMethod m) {
  switch (m) {
    case CorrelationMethod::Ccc: return "ccc";
    case CorrelationMethod::Scc: return "scc";
    case CorrelationMethod::Given: return "given";
  }
  return "?";
}

inline CorrelationMethod parse_method(std::string_view tag) {
  if (tag == "ccc") return CorrelationMethod::Ccc;
  if (tag == "scc") return CorrelationMethod::Scc;
  if (tag == "given") return CorrelationMethod::Given;
  throw Error(Errc::ParseError, "unknown correlation method '" + std::string(tag) + "'");
}

}  // namespace ncvx
