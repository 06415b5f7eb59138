#include "screwbif/error.hpp"

namespace screwbif {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Mean: return "E_MEAN";
    case ErrorCode::Parity: return "E_PARITY";
    case ErrorCode::Grid: return "E_GRID";
    case ErrorCode::Order: return "E_ORDER";
    case ErrorCode::Mode: return "E_MODE";
    case ErrorCode::Resolution: return "E_RESOLUTION";
    case ErrorCode::IftDomain: return "E_IFT_DOMAIN";
    case ErrorCode::NoConverge: return "E_NO_CONVERGE";
    case ErrorCode::Geometry: return "E_GEOMETRY";
    case ErrorCode::Blowup: return "E_BLOWUP";
    case ErrorCode::InvalidArgument: return "E_INVALID_ARGUMENT";
  }
  return "E_UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace screwbif
