#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arithdyn {

// Mathematical-domain failures. Every variant maps to CLI exit status 3.
enum class Errc {
  kBadReduction,
  kDegreeCapExceeded,
  kCharTooSmall,
  kPeriodicInput,
  kPreperiodicInput,
  kModulusTooLarge,
  kBadPrime,
  kEmptySystem,
  kInsufficientData,
  kHeightOverflow,
  kFitFailure,
  kNoCertificateFound,
  kInvalidCycleData,
  kUnsupportedQ,
  kTorsionInput,
  kInvalidArgument,
};

std::string_view errc_name(Errc code);

class MathError : public std::domain_error {
 public:
  MathError(Errc code, const std::string& what)
      : std::domain_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Malformed textual input (maps, points, equations, configs). Exit status 2.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Filesystem and persistence failures. Exit status 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace arithdyn
