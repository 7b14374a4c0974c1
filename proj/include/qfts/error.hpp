#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qfts {

enum class Errc {
  // input data
  RecordTooShort,
  FieldParseError,
  EmptyLineList,
  // grids and axes
  GridNotUniform,
  GridMismatch,
  GridOutsideSupport,
  AxisMismatch,
  NonUniformAxis,
  NyquistViolation,
  // numerical domain
  DomainError,
  DegenerateWidths,
  EmptyValidBand,
  WindowOutsideBand,
  KernelWiderThanBand,
  SingularNormalMatrix,
  NoConvergence,
  // plumbing
  ConfigError,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Process exit code for a failed CLI command: 2 config, 3 I/O, 4 numerical.
int exit_code(Errc code) noexcept;

}  // namespace qfts
