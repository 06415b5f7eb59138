#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace screwbif {

enum class ErrorCode {
  Mean,           // antiderivative of a field with non-zero mean
  Parity,         // field parity does not match the operation's domain
  Grid,           // fields live on different grids
  Order,          // derivative order above the configured maximum
  Mode,           // invalid Fourier mode index (k < 2)
  Resolution,     // grid cannot resolve the requested modes
  IftDomain,      // inner elimination left its Newton neighbourhood
  NoConverge,     // outer Newton solve failed
  Geometry,       // 1 + u_s - v/R dropped below 1/2
  Blowup,         // arclength defect exceeded defect_max during integration
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace screwbif
