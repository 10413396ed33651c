#pragma once

#include <stdexcept>
#include <string>

namespace scfec {

// Error categories shared between the C++ core and the C API, which maps
// them 1:1 onto scf_status codes.
enum class Err {
  kInvalidArgument,
  kNonPrimitivePolynomial,
  kInvalidParameters,
  kLengthMismatch,
  kOutOfRange,
  kDivisionByZero,
  kConfig,
  kIo,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void raise(Err code, const std::string& what) { throw Error(code, what); }

}  // namespace scfec
