#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "scfec/bch.hpp"
#include "scfec/bits.hpp"

namespace scfec {

// Identifies a component codeword inside the decoding window: position
// i in 1..W-1 (pairing blocks i-1 and i) and row j in 1..a.
struct CwId {
  int i = 0;
  int j = 0;
  bool operator==(const CwId&) const = default;
};

// Physical location of one bit: window block index (0-based, 0 = oldest
// in-window block) plus 1-based row/column inside that block.
struct BitLocation {
  int block = 0;
  int row = 0;
  int col = 0;
  bool operator==(const BitLocation&) const = default;
};

// Configuration of a staircase code and its window decoder.
struct StaircaseParams {
  std::shared_ptr<const ExtendedBchCode> code;
  int W = 8;             // window size in blocks (>= 2)
  int ell = 7;           // decoding iterations per window position (>= 1)
  int T = 1;             // anchor conflict threshold before backtracking (>= 0)
  int t_eff_last = 0;    // decoding radius at position W-1; 0 = default max(1, t-1)
  // Scripted-decoder tests can drive the window machinery without a real
  // component code: leave `code` null and set the geometry here instead.
  // Mutually exclusive with `code`; such a setup can only decode through an
  // injected decode function.
  int schematic_a = 0;
  int schematic_t = 0;
  static constexpr int kInfiniteT = std::numeric_limits<int>::max();

  int a() const { return code ? code->a() : schematic_a; }
  int t() const { return code ? code->t() : schematic_t; }

  // Validates and resolves defaults (t_eff_last). Throws InvalidParameters.
  void validate();
};

// Component word geometry. Word (i,j) reads column j of block i-1 (bits
// 1..a) followed by row j of block i (bits a+1..n). All arguments and
// results 1-based except BitLocation::block.
BitLocation locate_bit(const StaircaseParams& params, int i, int j, int e);

// The other component word protecting bit e of word (i,j), if it lies inside
// the window: e <= a pairs with (i-1, e), e = a+m with (i+1, m).
std::optional<CwId> orthogonal_of(const StaircaseParams& params, int i, int j, int e);

// Sliding window of W received blocks under decoding. Block 0 is the oldest.
class Window {
 public:
  Window(int a, int W);
  Window(const std::shared_ptr<const ExtendedBchCode>& code, int W);

  int W() const { return W_; }
  int a() const { return a_; }
  int n() const { return 2 * a_; }

  BitMatrix& block(int b) { return blocks_[b]; }
  const BitMatrix& block(int b) const { return blocks_[b]; }

  // Assembles component word (i,j) into `out` (resized to n).
  void extract_word(int i, int j, BitVec& out) const;

  bool get_bit(int i, int j, int e) const;
  void flip_bit(int i, int j, int e);

  // Slides the window: returns the emitted oldest block and admits
  // `incoming` as the new block W-1.
  BitMatrix shift(BitMatrix incoming);

 private:
  void check_ij(int i, int j) const;

  int a_;
  int W_;
  std::vector<BitMatrix> blocks_;
};

// Streaming staircase encoder. Each new block's row j is the tail of the
// systematic component codeword whose head is column j of the previous
// block; rows therefore carry k-a payload bits followed by n-k parity bits.
class StaircaseEncoder {
 public:
  explicit StaircaseEncoder(std::shared_ptr<const ExtendedBchCode> code);

  int a() const { return a_; }
  // Payload bits consumed per block.
  int data_bits_per_block() const { return (code_->k() - a_) * a_; }

  // Encodes the next block from row-major payload bits (a rows of k-a bits).
  BitMatrix encode_next(const BitVec& data);

  // The previous block (B_0 starts all-zero).
  const BitMatrix& prev() const { return prev_; }

  void reset();

 private:
  std::shared_ptr<const ExtendedBchCode> code_;
  int a_;
  BitMatrix prev_;
  BitVec msg_;
  BitVec cw_;
};

}  // namespace scfec
