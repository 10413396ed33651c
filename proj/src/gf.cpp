#include "scfec/gf.hpp"

#include <string>

namespace scfec {

uint32_t Field::default_primitive_poly(int nu) {
  // Verified by exhaustive search: smallest-bitmask primitive polynomial of
  // each degree. Construction re-validates primitivity in build_tables().
  switch (nu) {
    case 3: return 0xB;
    case 4: return 0x13;
    case 5: return 0x25;
    case 6: return 0x43;
    case 7: return 0x83;
    case 8: return 0x11D;
    case 9: return 0x211;
    case 10: return 0x409;
    case 11: return 0x805;
    case 12: return 0x1053;
    default:
      raise(Err::kInvalidArgument, "nu must be in [3, 12], got " + std::to_string(nu));
  }
}

Field::Field(int nu) : Field(nu, default_primitive_poly(nu)) {}

Field::Field(int nu, uint32_t primitive_poly) : nu_(nu), poly_(primitive_poly) {
  if (nu < kMinNu || nu > kMaxNu)
    raise(Err::kInvalidArgument, "nu must be in [3, 12], got " + std::to_string(nu));
  if (poly_ >> nu != 1u)
    raise(Err::kNonPrimitivePolynomial,
          "polynomial bitmask must have degree nu (top bit 1 << nu set)");
  build_tables();
}

void Field::build_tables() {
  const int ord = order();
  exp_.assign(2 * ord, 0);
  log_.assign(size(), 0);

  // Walk the powers of alpha = x. The polynomial is primitive iff the walk
  // first returns to 1 after exactly 2^nu - 1 steps and visits no duplicates.
  uint32_t v = 1;
  for (int i = 0; i < ord; ++i) {
    if (v == 1 && i != 0)
      raise(Err::kNonPrimitivePolynomial, "polynomial is not primitive (alpha has short order)");
    if (log_[v] != 0 && v != 1)
      raise(Err::kNonPrimitivePolynomial, "polynomial is not primitive (reducible)");
    exp_[i] = static_cast<uint16_t>(v);
    log_[v] = static_cast<uint16_t>(i);
    v <<= 1;
    if (v >> nu_) v ^= poly_;
  }
  if (v != 1) raise(Err::kNonPrimitivePolynomial, "polynomial is not primitive");
  for (int i = 0; i < ord; ++i) exp_[ord + i] = exp_[i];
}

int Field::pow(int a, int e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  long idx = static_cast<long>(log_[a]) * e % order();
  return exp_[idx];
}

}  // namespace scfec
