#pragma once

#include <stdexcept>
#include <string>

namespace fsc {

// Mirrors the fsc_status codes of the public C API.
enum class ErrorCode {
  invalid_argument = 1,
  parse = 2,
  truncation = 3,
  regime = 4,      // negative free cumulants where the nonnegative regime is required
  numeric = 5,     // solver non-convergence, CDF calibration failure
  size = 6,        // enumeration bound exceeded
  io = 7,
  contract = 9,    // adaptedness / dimension-contract violation
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace fsc
