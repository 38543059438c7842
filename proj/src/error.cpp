#include "aivf/error.hpp"

namespace aivf {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::SumNotOne: return "SumNotOne";
    case Errc::NonPositive: return "NonPositive";
    case Errc::TooSmall: return "TooSmall";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::UnknownSymbol: return "UnknownSymbol";
    case Errc::FirstSymbolBelowType: return "FirstSymbolBelowType";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::InvalidTree: return "InvalidTree";
    case Errc::Infeasible: return "Infeasible";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::IterationCap: return "IterationCap";
    case Errc::LpUnbounded: return "LpUnbounded";
    case Errc::LpInfeasible: return "LpInfeasible";
    case Errc::CertificateMismatch: return "CertificateMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::HeaderMismatch: return "HeaderMismatch";
    case Errc::TruncatedStream: return "TruncatedStream";
    case Errc::Parse: return "Parse";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace aivf
