#pragma once

#include <cstdint>
#include <vector>

#include "scfec/error.hpp"

namespace scfec {

// GF(2^nu) arithmetic over a primitive polynomial, via exp/log tables.
// Elements are integers in [0, 2^nu); alpha (the class of x) is 2.
// Immutable after construction and safe to share across threads.
class Field {
 public:
  static constexpr int kMinNu = 3;
  static constexpr int kMaxNu = 12;

  // Lexicographically smallest primitive polynomial of each degree
  // (bitmask, bit d = coefficient of x^d).
  static uint32_t default_primitive_poly(int nu);

  explicit Field(int nu);
  Field(int nu, uint32_t primitive_poly);

  int nu() const { return nu_; }
  uint32_t primitive_poly() const { return poly_; }
  int size() const { return 1 << nu_; }
  int order() const { return (1 << nu_) - 1; }

  int add(int a, int b) const { return a ^ b; }

  int mul(int a, int b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  int inv(int a) const {
    if (a == 0) raise(Err::kDivisionByZero, "inverse of zero");
    return exp_[order() - log_[a]];
  }

  int div(int a, int b) const { return mul(a, inv(b)); }

  int sqr(int a) const { return mul(a, a); }

  // alpha^i for any i >= 0 (reduced mod the group order).
  int alpha_pow(int i) const { return exp_[i % order()]; }

  // Discrete log base alpha; a must be nonzero.
  int log(int a) const {
    if (a == 0) raise(Err::kDivisionByZero, "log of zero");
    return log_[a];
  }

  int pow(int a, int e) const;

  const std::vector<uint16_t>& exp_table() const { return exp_; }
  const std::vector<uint16_t>& log_table() const { return log_; }

 private:
  void build_tables();

  int nu_;
  uint32_t poly_;
  std::vector<uint16_t> exp_;  // size 2*order, doubled to skip a mod in mul()
  std::vector<uint16_t> log_;  // size 2^nu; log_[0] unused
};

}  // namespace scfec
