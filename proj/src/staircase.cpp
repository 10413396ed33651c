#include "scfec/staircase.hpp"

#include <cstring>
#include <string>

#include "scfec/error.hpp"

namespace scfec {

void StaircaseParams::validate() {
  if (!code) {
    if (schematic_a < 1 || schematic_t < 1) {
      raise(Err::kInvalidParameters,
            "staircase: set a component code, or schematic a/t for scripted decoding");
    }
  } else if (schematic_a != 0 || schematic_t != 0) {
    raise(Err::kInvalidParameters,
          "staircase: schematic geometry conflicts with a real component code");
  }
  if (W < 2) raise(Err::kInvalidParameters, "staircase: W must be >= 2, got " + std::to_string(W));
  if (ell < 1) raise(Err::kInvalidParameters, "staircase: ell must be >= 1, got " + std::to_string(ell));
  if (T < 0) raise(Err::kInvalidParameters, "staircase: T must be >= 0, got " + std::to_string(T));
  const int radius = t();
  if (t_eff_last == 0) t_eff_last = (radius > 1) ? radius - 1 : 1;
  if (t_eff_last < 1 || t_eff_last > radius) {
    raise(Err::kInvalidParameters,
          "staircase: t_eff_last must be in [1, t], got " + std::to_string(t_eff_last));
  }
}

namespace {

void check_cw_args(int W, int a, int i, int j) {
  if (i < 1 || i > W - 1) {
    raise(Err::kOutOfRange, "codeword position i=" + std::to_string(i) +
                                " outside [1, " + std::to_string(W - 1) + "]");
  }
  if (j < 1 || j > a) {
    raise(Err::kOutOfRange,
          "codeword row j=" + std::to_string(j) + " outside [1, " + std::to_string(a) + "]");
  }
}

void check_bit_arg(int a, int e) {
  if (e < 1 || e > 2 * a) {
    raise(Err::kOutOfRange,
          "bit index e=" + std::to_string(e) + " outside [1, " + std::to_string(2 * a) + "]");
  }
}

}  // namespace

BitLocation locate_bit(const StaircaseParams& params, int i, int j, int e) {
  const int a = params.a();
  check_cw_args(params.W, a, i, j);
  check_bit_arg(a, e);
  if (e <= a) return BitLocation{i - 1, e, j};  // column j of the older block
  return BitLocation{i, j, e - a};              // row j of the newer block
}

std::optional<CwId> orthogonal_of(const StaircaseParams& params, int i, int j, int e) {
  const int a = params.a();
  check_cw_args(params.W, a, i, j);
  check_bit_arg(a, e);
  if (e <= a) {
    if (i - 1 >= 1) return CwId{i - 1, e};
    return std::nullopt;
  }
  if (i + 1 <= params.W - 1) return CwId{i + 1, e - a};
  return std::nullopt;
}

Window::Window(int a, int W) : a_(a), W_(W) {
  if (a_ < 1) raise(Err::kInvalidParameters, "window: a must be >= 1");
  if (W_ < 2) raise(Err::kInvalidParameters, "window: W must be >= 2");
  blocks_.assign(static_cast<size_t>(W_), BitMatrix(a_));
}

Window::Window(const std::shared_ptr<const ExtendedBchCode>& code, int W)
    : Window(code ? code->a()
                  : (raise(Err::kInvalidParameters, "window: component code is null"), 0),
             W) {}

void Window::check_ij(int i, int j) const { check_cw_args(W_, a_, i, j); }

void Window::extract_word(int i, int j, BitVec& out) const {
  check_ij(i, j);
  out.resize(2 * a_);
  const BitMatrix& older = blocks_[static_cast<size_t>(i - 1)];
  const BitMatrix& newer = blocks_[static_cast<size_t>(i)];
  for (int r = 0; r < a_; ++r) out.set(r, older.get(r, j - 1));
  if (a_ % 64 == 0) {
    // Row j occupies whole words: copy it into the upper half directly.
    const uint64_t* src = newer.row(j - 1);
    const int wpr = newer.words_per_row();
    for (int w = 0; w < wpr; ++w) out.word(a_ / 64 + w) = src[w];
  } else {
    for (int c = 0; c < a_; ++c) out.set(a_ + c, newer.get(j - 1, c));
  }
}

bool Window::get_bit(int i, int j, int e) const {
  check_ij(i, j);
  check_bit_arg(a_, e);
  if (e <= a_) return blocks_[static_cast<size_t>(i - 1)].get(e - 1, j - 1);
  return blocks_[static_cast<size_t>(i)].get(j - 1, e - a_ - 1);
}

void Window::flip_bit(int i, int j, int e) {
  check_ij(i, j);
  check_bit_arg(a_, e);
  if (e <= a_) {
    blocks_[static_cast<size_t>(i - 1)].flip(e - 1, j - 1);
  } else {
    blocks_[static_cast<size_t>(i)].flip(j - 1, e - a_ - 1);
  }
}

BitMatrix Window::shift(BitMatrix incoming) {
  if (incoming.a() != a_) raise(Err::kLengthMismatch, "window: incoming block has wrong size");
  BitMatrix emitted = std::move(blocks_.front());
  for (size_t b = 0; b + 1 < blocks_.size(); ++b) blocks_[b] = std::move(blocks_[b + 1]);
  blocks_.back() = std::move(incoming);
  return emitted;
}

StaircaseEncoder::StaircaseEncoder(std::shared_ptr<const ExtendedBchCode> code)
    : code_(std::move(code)) {
  if (!code_) raise(Err::kInvalidParameters, "encoder: component code is null");
  a_ = code_->a();
  if (code_->k() <= a_) {
    raise(Err::kInvalidParameters, "encoder: component code needs k > n/2 for a positive rate");
  }
  prev_ = BitMatrix(a_);
  msg_.resize(code_->k());
  cw_.resize(code_->n());
}

BitMatrix StaircaseEncoder::encode_next(const BitVec& data) {
  const int payload = code_->k() - a_;
  if (static_cast<int>(data.size()) != payload * a_) {
    raise(Err::kLengthMismatch, "encoder: expected " + std::to_string(payload * a_) +
                                    " payload bits, got " + std::to_string(data.size()));
  }
  BitMatrix next(a_);
  for (int j = 0; j < a_; ++j) {
    // Message = column j of the previous block, then this row's payload.
    for (int r = 0; r < a_; ++r) msg_.set(r, prev_.get(r, j));
    for (int m = 0; m < payload; ++m) msg_.set(a_ + m, data.get(j * payload + m));
    code_->encode(msg_, cw_);
    // Row j of the new block is the codeword tail (payload + parity bits).
    for (int c = 0; c < a_; ++c) next.set(j, c, cw_.get(a_ + c));
  }
  prev_ = next;
  return next;
}

void StaircaseEncoder::reset() { prev_ = BitMatrix(a_); }

}  // namespace scfec
