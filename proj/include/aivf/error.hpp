#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aivf {

enum class Errc {
  SumNotOne,
  NonPositive,
  TooSmall,
  IndexOutOfRange,
  UnknownSymbol,
  FirstSymbolBelowType,
  TypeMismatch,
  InvalidTree,
  Infeasible,
  SingularSystem,
  CycleDetected,
  IterationCap,
  LpUnbounded,
  LpInfeasible,
  CertificateMismatch,
  TooLarge,
  HeaderMismatch,
  TruncatedStream,
  Parse,
  Io,
};

std::string_view errc_name(Errc code);

// All library failures are reported through this exception; `code()` names the
// failure kind so callers and tests can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace aivf
