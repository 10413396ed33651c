#include "scfec/bch_reference.hpp"

#include <algorithm>

namespace scfec {

ReferenceBdd::ReferenceBdd(const ExtendedBchCode& code) : code_(code), n_(code.n()) {
  const int dg = code_.generator_degree();
  rem_words_ = (dg + 63) / 64;
  const std::vector<uint64_t>& g = code_.generator();

  // delta_[p] = x^(n-2-p) mod g, built by long division of a single term.
  delta_.assign(n_ - 1, std::vector<uint64_t>(rem_words_, 0));
  for (int p = 0; p < n_ - 1; ++p) {
    int d = n_ - 2 - p;
    // dividend: x^d
    std::vector<uint64_t> v(d / 64 + 1, 0);
    v[d >> 6] = 1ull << (d & 63);
    for (int deg = d; deg >= dg; --deg) {
      if (!((v[deg >> 6] >> (deg & 63)) & 1u)) continue;
      int shift = deg - dg;
      // v ^= g << shift
      int wsh = shift >> 6, bsh = shift & 63;
      for (int w = static_cast<int>(g.size()) - 1; w >= 0; --w) {
        uint64_t gw = g[w];
        if (!gw) continue;
        size_t lo = static_cast<size_t>(w + wsh);
        if (bsh == 0) {
          v[lo] ^= gw;
        } else {
          v[lo] ^= gw << bsh;
          if (lo + 1 < v.size()) v[lo + 1] ^= gw >> (64 - bsh);
        }
      }
    }
    for (int w = 0; w < rem_words_ && w < static_cast<int>(v.size()); ++w) delta_[p][w] = v[w];
  }
}

std::vector<uint64_t> ReferenceBdd::remainder_of(const BitVec& word) const {
  std::vector<uint64_t> rem(rem_words_, 0);
  word.for_each_set([&](int p) {
    if (p >= n_ - 1) return;
    for (int w = 0; w < rem_words_; ++w) rem[w] ^= delta_[p][w];
  });
  return rem;
}

bool ReferenceBdd::is_codeword(const BitVec& word) const {
  if (word.parity()) return false;
  for (uint64_t w : remainder_of(word)) {
    if (w) return false;
  }
  return true;
}

void ReferenceBdd::decode(const BitVec& word, int t_eff, DecodeOutcome& out) const {
  out.reset();
  std::vector<uint64_t> base = remainder_of(word);
  const bool base_parity = word.parity();

  std::vector<uint16_t> best;
  int found = 0;
  std::vector<uint64_t> rem(rem_words_);
  std::vector<uint16_t> picked;
  picked.reserve(t_eff);

  // Depth-first enumeration of ascending position subsets, maintaining the
  // would-be remainder incrementally. A candidate is valid when the remainder
  // cancels and the flipped word's overall parity is even.
  auto consider_leaf = [&](const std::vector<uint64_t>& r, int weight) {
    if (base_parity != static_cast<bool>(weight & 1)) return;
    for (uint64_t w : r)
      if (w) return;
    ++found;
    if (found == 1) best = picked;
  };

  auto recurse = [&](auto&& self, int next_pos, int remaining,
                     std::vector<uint64_t>& cur) -> void {
    consider_leaf(cur, static_cast<int>(picked.size()));
    if (remaining == 0) return;
    for (int p = next_pos; p < n_; ++p) {
      if (p < n_ - 1) {
        for (int w = 0; w < rem_words_; ++w) cur[w] ^= delta_[p][w];
      }
      picked.push_back(static_cast<uint16_t>(p + 1));  // report 1-based
      self(self, p + 1, remaining - 1, cur);
      picked.pop_back();
      if (p < n_ - 1) {
        for (int w = 0; w < rem_words_; ++w) cur[w] ^= delta_[p][w];
      }
    }
  };
  rem = base;
  recurse(recurse, 0, t_eff, rem);

  if (found > 1)
    raise(Err::kInternal, "reference decoder found two codewords within the radius");
  if (found == 1) {
    out.corrected = true;
    out.locations = std::move(best);
  }
}

}  // namespace scfec
