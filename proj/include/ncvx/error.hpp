#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ncvx {

/// Failure codes shared by every module.
enum class Errc {
  DegenerateInterval,
  DuplicateName,
  NameMismatch,
  SampleOutsideMarginal,
  DimensionMismatch,
  ZeroDeviation,
  InfeasibleFit,
  MissingPair,
  DuplicatePair,
  NotPositiveDefinite,
  SingularShape,
  NotEllipsoid,
  IndexOutOfRange,
  ParseError,
  SyntaxError,
  UnknownCharacter,
  NoSurfaceFound,
  UnboundVariable,
  InvalidArgument,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::DegenerateInterval: return "DegenerateInterval";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::NameMismatch: return "NameMismatch";
    case Errc::SampleOutsideMarginal: return "SampleOutsideMarginal";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ZeroDeviation: return "ZeroDeviation";
    case Errc::InfeasibleFit: return "InfeasibleFit";
    case Errc::MissingPair: return "MissingPair";
    case Errc::DuplicatePair: return "DuplicatePair";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::SingularShape: return "SingularShape";
    case Errc::NotEllipsoid: return "NotEllipsoid";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ParseError: return "ParseError";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownCharacter: return "UnknownCharacter";
    case Errc::NoSurfaceFound: return "NoSurfaceFound";
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Numeric failures (a matrix is not PD, a fit or search found nothing) as
/// opposed to malformed input. The CLI maps these to exit code 3.
inline bool is_numeric_failure(Errc code) {
  switch (code) {
    case Errc::NotPositiveDefinite:
    case Errc::SingularShape:
    case Errc::InfeasibleFit:
    case Errc::NoSurfaceFound:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  /// Error carrying the byte offset into parsed text where it was detected.
  Error(Errc code, const std::string& what, std::size_t offset)
      : std::runtime_error(std::string(errc_name(code)) + ": offset " + std::to_string(offset) + ": " + what),
        code_(code),
        offset_(offset) {}

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  Errc code_;
  std::optional<std::size_t> offset_;
};

}  // namespace ncvx
