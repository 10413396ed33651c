#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "scfec/error.hpp"

namespace scfec {

// Fixed-length bit vector backed by 64-bit words. Indices are 0-based here;
// the 1-based positions used by the codec API are converted at that boundary.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(int nbits) : n_(nbits), w_((nbits + 63) / 64, 0) {}

  int size() const { return n_; }
  int word_count() const { return static_cast<int>(w_.size()); }
  uint64_t word(int i) const { return w_[i]; }
  uint64_t& word(int i) { return w_[i]; }

  void resize(int nbits) {
    n_ = nbits;
    w_.assign((nbits + 63) / 64, 0);
  }

  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  bool get(int p) const { return (w_[p >> 6] >> (p & 63)) & 1u; }

  void set(int p, bool v) {
    uint64_t mask = 1ull << (p & 63);
    if (v)
      w_[p >> 6] |= mask;
    else
      w_[p >> 6] &= ~mask;
  }

  void flip(int p) { w_[p >> 6] ^= 1ull << (p & 63); }

  int popcount() const {
    int c = 0;
    for (uint64_t w : w_) c += std::popcount(w);
    return c;
  }

  // XOR of all bits (0 = even weight).
  bool parity() const {
    uint64_t acc = 0;
    for (uint64_t w : w_) acc ^= w;
    return std::popcount(acc) & 1;
  }

  int diff_count(const BitVec& other) const {
    int c = 0;
    for (size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] ^ other.w_[i]);
    return c;
  }

  template <typename F>
  void for_each_set(F&& f) const {
    for (size_t wi = 0; wi < w_.size(); ++wi) {
      uint64_t w = w_[wi];
      while (w) {
        f(static_cast<int>(wi * 64 + std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  bool operator==(const BitVec& other) const = default;

 private:
  int n_ = 0;
  std::vector<uint64_t> w_;
};

// Square a x a bit matrix, row-major, each row padded to whole 64-bit words.
// Rows/columns are 0-based internally.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int a) : a_(a), wpr_((a + 63) / 64), w_(static_cast<size_t>(a) * wpr_, 0) {}

  int a() const { return a_; }
  int words_per_row() const { return wpr_; }

  bool get(int r, int c) const { return (w_[idx(r, c)] >> (c & 63)) & 1u; }

  void set(int r, int c, bool v) {
    uint64_t mask = 1ull << (c & 63);
    if (v)
      w_[idx(r, c)] |= mask;
    else
      w_[idx(r, c)] &= ~mask;
  }

  void flip(int r, int c) { w_[idx(r, c)] ^= 1ull << (c & 63); }

  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  const uint64_t* row(int r) const { return w_.data() + static_cast<size_t>(r) * wpr_; }
  uint64_t* row(int r) { return w_.data() + static_cast<size_t>(r) * wpr_; }

  int popcount() const {
    int c = 0;
    for (uint64_t w : w_) c += std::popcount(w);
    return c;
  }

  int diff_count(const BitMatrix& other) const {
    int c = 0;
    for (size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] ^ other.w_[i]);
    return c;
  }

  bool operator==(const BitMatrix& other) const = default;

 private:
  size_t idx(int r, int c) const { return static_cast<size_t>(r) * wpr_ + (c >> 6); }

  int a_ = 0;
  int wpr_ = 0;
  std::vector<uint64_t> w_;
};

}  // namespace scfec
