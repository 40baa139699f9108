#include "arithdyn/error.hpp"

namespace arithdyn {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kBadReduction: return "BadReduction";
    case Errc::kDegreeCapExceeded: return "DegreeCapExceeded";
    case Errc::kCharTooSmall: return "CharTooSmall";
    case Errc::kPeriodicInput: return "PeriodicInput";
    case Errc::kPreperiodicInput: return "PreperiodicInput";
    case Errc::kModulusTooLarge: return "ModulusTooLarge";
    case Errc::kBadPrime: return "BadPrime";
    case Errc::kEmptySystem: return "EmptySystem";
    case Errc::kInsufficientData: return "InsufficientData";
    case Errc::kHeightOverflow: return "HeightOverflow";
    case Errc::kFitFailure: return "FitFailure";
    case Errc::kNoCertificateFound: return "NoCertificateFound";
    case Errc::kInvalidCycleData: return "InvalidCycleData";
    case Errc::kUnsupportedQ: return "UnsupportedQ";
    case Errc::kTorsionInput: return "TorsionInput";
    case Errc::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace arithdyn
