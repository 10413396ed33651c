#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "scfec/bits.hpp"
#include "scfec/gf.hpp"

namespace scfec {

// Result of one bounded-distance decode attempt.
//   corrected == true : flipping `locations` yields the unique codeword within
//                       the decoding radius. Empty locations = word was
//                       already a codeword.
//   corrected == false: no codeword within the radius was found (Failure).
// Positions are 1-based (1..n), matching the rest of the codec API.
struct DecodeOutcome {
  bool corrected = false;
  std::vector<uint16_t> locations;

  void reset() {
    corrected = false;
    locations.clear();
  }
};

// Binary primitive BCH code of length 2^nu - 1 extended by one overall parity
// bit, so n = 2^nu and guaranteed minimum distance 2t + 2. Codeword layout is
// systematic: positions 1..k hold the message verbatim, k+1..n-1 the BCH
// parity bits, and position n the overall (even) parity bit.
//
// Immutable after construction; safe to share across threads.
class ExtendedBchCode {
 public:
  ExtendedBchCode(const Field& field, int t);

  // Testing hook: builds the code, then replaces the generator polynomial
  // (bitmask vector, bit d of word d/64 = coefficient of x^d). Used by the
  // self-test negative control to prove the oracle suite detects a broken
  // encoder/reference-decoder pair. Not for production use.
  static ExtendedBchCode with_generator_for_tests(const Field& field, int t,
                                                  std::vector<uint64_t> generator);

  const Field& field() const { return field_; }
  int n() const { return n_; }
  int k() const { return k_; }
  int t() const { return t_; }
  int a() const { return n_ / 2; }
  int d_min_guaranteed() const { return 2 * t_ + 2; }
  // Rate of a staircase code built from this component code: 2k/n - 1.
  double staircase_rate() const { return 2.0 * k_ / n_ - 1.0; }

  const std::vector<uint64_t>& generator() const { return gen_; }
  int generator_degree() const { return gen_degree_; }

  // Systematic encode of a k-bit message into an n-bit codeword.
  void encode(const BitVec& message, BitVec& codeword) const;
  BitVec encode(const BitVec& message) const;

  // True iff all syndromes vanish and the overall parity is even.
  bool is_codeword(const BitVec& word) const;

  enum class Algorithm {
    kAuto,            // Peterson for t <= 2, Berlekamp-Massey otherwise
    kPeterson,        // closed-form locator (only valid for t <= 2)
    kBerlekampMassey  // general path
  };

  // Bounded-distance decode with effective radius t_eff (1 <= t_eff <= t):
  // if some codeword lies within Hamming distance t_eff of `word`, report its
  // differing positions (that codeword is unique since 2*t_eff < d_min);
  // otherwise report Failure. Anything algebraically irregular (locator
  // degree too high, missing roots, parity inconsistency) is a Failure.
  void decode_bdd(const BitVec& word, int t_eff, DecodeOutcome& out,
                  Algorithm alg = Algorithm::kAuto) const;

  // XORs the given 1-based positions into the word. Involution: applying the
  // same set twice restores the word. Throws OutOfRange for positions outside
  // 1..word.size().
  static void apply_flips(BitVec& word, const std::vector<uint16_t>& locations);

 private:
  void build(const std::vector<uint64_t>* generator_override);
  void decode_peterson(const BitVec& word, int t_eff, DecodeOutcome& out) const;
  void decode_bm(const BitVec& word, int t_eff, DecodeOutcome& out) const;
  // Shared tail: fold the overall-parity bit into the located BCH-part errors
  // and enforce the t_eff radius. locs are 0-based BCH-part positions.
  void finish_outcome(const BitVec& word, int t_eff, int e1, const uint16_t* locs,
                      DecodeOutcome& out) const;

  // Position p (0-based, p < n-1) corresponds to the field locator
  // alpha^(n-2-p); the word polynomial is sum_p bit_p * x^(n-2-p).
  int position_of(int elem) const { return n_ - 2 - field_.log(elem); }

  Field field_;
  int t_;
  int n_;
  int k_;
  int gen_degree_;
  std::vector<uint64_t> gen_;
  // syn_tab_[m][p] = (alpha^(n-2-p))^(2m+1): per-position contribution to the
  // odd syndromes S_1, S_3, ..., S_{2t-1}. Even syndromes follow by squaring.
  std::vector<std::vector<uint16_t>> syn_tab_;
  // quad_sol_[c] = a solution y of y^2 + y = c, or 0xFFFF when none exists.
  std::vector<uint16_t> quad_sol_;
};

}  // namespace scfec
