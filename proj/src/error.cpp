#include "qfts/error.hpp"

namespace qfts {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::RecordTooShort: return "RecordTooShort";
    case Errc::FieldParseError: return "FieldParseError";
    case Errc::EmptyLineList: return "EmptyLineList";
    case Errc::GridNotUniform: return "GridNotUniform";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::GridOutsideSupport: return "GridOutsideSupport";
    case Errc::AxisMismatch: return "AxisMismatch";
    case Errc::NonUniformAxis: return "NonUniformAxis";
    case Errc::NyquistViolation: return "NyquistViolation";
    case Errc::DomainError: return "DomainError";
    case Errc::DegenerateWidths: return "DegenerateWidths";
    case Errc::EmptyValidBand: return "EmptyValidBand";
    case Errc::WindowOutsideBand: return "WindowOutsideBand";
    case Errc::KernelWiderThanBand: return "KernelWiderThanBand";
    case Errc::SingularNormalMatrix: return "SingularNormalMatrix";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code(Errc code) noexcept {
  switch (code) {
    case Errc::ConfigError:
      return 2;
    case Errc::IoError:
    case Errc::RecordTooShort:
    case Errc::FieldParseError:
    case Errc::EmptyLineList:
      return 3;
    default:
      return 4;
  }
}

}  // namespace qfts
