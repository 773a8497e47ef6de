#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdots {

enum class ErrorKind {
  NonHermitian,
  NonFinite,
  InvalidArgument,
  DegenerateSpectrum,
  BasisMismatch,
  SignalDomain,
  SingularExtraction,
  NonHermitianDrive,
  OccupancyNotNormalized,
  ZeroProbability,
  ZeroMarginal,
  InvalidDensity,
  GridTooCoarse,
  QuadratureNotConverged,
  Config,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qdots
