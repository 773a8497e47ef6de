#include "qdots/error.hpp"

namespace qdots {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::SignalDomain: return "SignalDomain";
    case ErrorKind::SingularExtraction: return "SingularExtraction";
    case ErrorKind::NonHermitianDrive: return "NonHermitianDrive";
    case ErrorKind::OccupancyNotNormalized: return "OccupancyNotNormalized";
    case ErrorKind::ZeroProbability: return "ZeroProbability";
    case ErrorKind::ZeroMarginal: return "ZeroMarginal";
    case ErrorKind::InvalidDensity: return "InvalidDensity";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace qdots
