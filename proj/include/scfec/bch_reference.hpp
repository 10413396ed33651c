#pragma once

#include <cstdint>
#include <vector>

#include "scfec/bch.hpp"
#include "scfec/bits.hpp"

namespace scfec {

// Reference bounded-distance decoder: exhaustively tries every flip pattern of
// weight <= t_eff and accepts the unique pattern that produces a valid
// codeword. Intended as the arbiter for decode_bdd in tests and self-tests;
// exhaustive search keeps it practical for n <= 64 (it works, slowly, beyond).
//
// Independence: validity is established through generator-polynomial division
// over GF(2) plus the overall parity check — none of the exp/log-table
// syndrome or locator algebra used by ExtendedBchCode::decode_bdd.
class ReferenceBdd {
 public:
  explicit ReferenceBdd(const ExtendedBchCode& code);

  // Same contract as ExtendedBchCode::decode_bdd. Scans the entire pattern
  // space and raises Internal if two distinct valid patterns are found (that
  // would contradict 2*t_eff < d_min, i.e. indicate a broken code).
  void decode(const BitVec& word, int t_eff, DecodeOutcome& out) const;

  // Validity via polynomial division: g(x) divides the word polynomial and
  // the overall parity is even.
  bool is_codeword(const BitVec& word) const;

 private:
  // Remainder of the BCH-part word polynomial mod g, as bitmask words.
  std::vector<uint64_t> remainder_of(const BitVec& word) const;

  const ExtendedBchCode& code_;
  int n_;
  int rem_words_;
  // delta_[p] = remainder of x^(n-2-p) mod g: flipping position p XORs this
  // into the word's remainder. Position n-1 (overall parity) contributes
  // nothing to the polynomial.
  std::vector<std::vector<uint64_t>> delta_;
};

}  // namespace scfec
