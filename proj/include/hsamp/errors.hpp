#pragma once

#include <stdexcept>
#include <string>

namespace hsamp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureFailed : Error { using Error::Error; };
struct CalibrationInconsistent : Error { using Error::Error; };
struct TailMassExceeded : Error { using Error::Error; };
struct NotAFrame : Error { using Error::Error; };
struct CertificationFailed : Error { using Error::Error; };
struct SingularKernel : Error { using Error::Error; };
struct TailTooLarge : Error { using Error::Error; };
struct MultiplierVanishes : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace hsamp
