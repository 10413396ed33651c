#include "scfec/bch.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace scfec {
namespace {

// GF(2)[x] helpers on bitmask-vector polynomials (bit d of word d/64 = coeff of x^d).

int poly_degree(const std::vector<uint64_t>& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
    if (p[i]) return i * 64 + 63 - std::countl_zero(p[i]);
  }
  return -1;
}

bool poly_get(const std::vector<uint64_t>& p, int d) {
  return (p[d >> 6] >> (d & 63)) & 1u;
}

void poly_set(std::vector<uint64_t>& p, int d) {
  size_t need = static_cast<size_t>(d / 64) + 1;
  if (p.size() < need) p.resize(need, 0);
  p[d >> 6] |= 1ull << (d & 63);
}

std::vector<uint64_t> poly_mul(const std::vector<uint64_t>& x, const std::vector<uint64_t>& y) {
  int dx = poly_degree(x), dy = poly_degree(y);
  std::vector<uint64_t> r((dx + dy) / 64 + 1, 0);
  for (int i = 0; i <= dx; ++i) {
    if (!poly_get(x, i)) continue;
    for (int j = 0; j <= dy; ++j) {
      if (poly_get(y, j)) r[(i + j) >> 6] ^= 1ull << ((i + j) & 63);
    }
  }
  return r;
}

}  // namespace

ExtendedBchCode::ExtendedBchCode(const Field& field, int t) : field_(field), t_(t) {
  build(nullptr);
}

ExtendedBchCode ExtendedBchCode::with_generator_for_tests(const Field& field, int t,
                                                          std::vector<uint64_t> generator) {
  ExtendedBchCode code(field, t);
  if (poly_degree(generator) != code.gen_degree_)
    raise(Err::kInvalidArgument, "generator override must keep the original degree");
  code.gen_ = std::move(generator);
  return code;
}

void ExtendedBchCode::build(const std::vector<uint64_t>* generator_override) {
  const int ord = field_.order();
  n_ = field_.size();
  if (t_ < 1) raise(Err::kInvalidParameters, "t must be >= 1");
  if (2 * t_ >= ord) raise(Err::kInvalidParameters, "t too large for field order");

  if (generator_override) {
    gen_ = *generator_override;
  } else {
    // g(x) = lcm of the minimal polynomials of alpha^1 .. alpha^2t. Walk the
    // cyclotomic cosets once each; the product of (x - alpha^j) over a coset
    // has binary coefficients by construction.
    std::vector<bool> covered(ord, false);
    gen_.assign(1, 1);
    for (int c = 1; c <= 2 * t_; ++c) {
      int rep = c % ord;
      if (covered[rep]) continue;
      // Gather the coset {c, 2c, 4c, ...} mod ord.
      std::vector<int> coset;
      int x = rep;
      while (!covered[x]) {
        covered[x] = true;
        coset.push_back(x);
        x = (2 * x) % ord;
      }
      // Minimal polynomial: product over the coset of (x + alpha^j), computed
      // with field coefficients, then checked to be binary.
      std::vector<int> mp{1};
      for (int j : coset) {
        int root = field_.alpha_pow(j);
        std::vector<int> next(mp.size() + 1, 0);
        for (size_t d = 0; d < mp.size(); ++d) {
          next[d + 1] ^= mp[d];
          next[d] ^= field_.mul(mp[d], root);
        }
        mp = std::move(next);
      }
      std::vector<uint64_t> mp_bits(1, 0);
      for (size_t d = 0; d < mp.size(); ++d) {
        if (mp[d] == 1) {
          poly_set(mp_bits, static_cast<int>(d));
        } else if (mp[d] != 0) {
          raise(Err::kInternal, "minimal polynomial has non-binary coefficient");
        }
      }
      gen_ = poly_mul(gen_, mp_bits);
    }
  }

  gen_degree_ = poly_degree(gen_);
  k_ = n_ - 1 - gen_degree_;
  if (k_ <= n_ / 2)
    raise(Err::kInvalidParameters,
          "component code dimension k=" + std::to_string(k_) + " must exceed n/2=" +
              std::to_string(n_ / 2) + " (staircase rate would be non-positive)");

  // Per-position odd-syndrome contributions.
  syn_tab_.assign(t_, std::vector<uint16_t>(n_ - 1));
  for (int p = 0; p < n_ - 1; ++p) {
    int loc = field_.alpha_pow(n_ - 2 - p);
    for (int m = 0; m < t_; ++m)
      syn_tab_[m][p] = static_cast<uint16_t>(field_.pow(loc, 2 * m + 1));
  }

  // Solutions of y^2 + y = c for the closed-form two-error locator.
  quad_sol_.assign(field_.size(), 0xFFFF);
  for (int y = 0; y < field_.size(); ++y) {
    int c = field_.sqr(y) ^ y;
    if (quad_sol_[c] == 0xFFFF) quad_sol_[c] = static_cast<uint16_t>(y);
  }
}

void ExtendedBchCode::encode(const BitVec& message, BitVec& codeword) const {
  if (message.size() != k_)
    raise(Err::kLengthMismatch,
          "message length " + std::to_string(message.size()) + " != k=" + std::to_string(k_));
  codeword.resize(n_);

  // Message bits occupy positions 0..k-1 <=> coefficients x^(n-2) .. x^(n-1-k).
  // Feed them high-degree-first through a division register to get
  // m(x) * x^(deg g) mod g(x); the remainder fills positions k..n-2.
  const int dg = gen_degree_;
  const int rwords = (dg + 63) / 64;
  uint64_t reg[64] = {0};  // dg <= n-1-k < n <= 4096 bits
  auto reg_top = [&]() { return (reg[(dg - 1) >> 6] >> ((dg - 1) & 63)) & 1u; };
  auto reg_shift_xor = [&](bool feedback) {
    // reg = (reg << 1) mod 2^dg, then xor g's low dg coefficients if feedback.
    for (int w = rwords - 1; w > 0; --w) reg[w] = (reg[w] << 1) | (reg[w - 1] >> 63);
    reg[0] <<= 1;
    if (feedback) {
      for (int w = 0; w < rwords; ++w) reg[w] ^= gen_[w];
      // knock out the x^dg term that g's top coefficient would add
      reg[dg >> 6] &= ~(1ull << (dg & 63));
    }
  };

  for (int p = 0; p < k_; ++p) {
    bool bit = message.get(p);
    codeword.set(p, bit);
    bool fb = bit ^ (reg_top() != 0);
    reg_shift_xor(fb);
  }
  // Remainder coefficient x^d lands at position n-2-d, i.e. positions k..n-2
  // take coefficients dg-1 down to 0.
  for (int i = 0; i < dg; ++i) {
    bool bit = (reg[(dg - 1 - i) >> 6] >> ((dg - 1 - i) & 63)) & 1u;
    codeword.set(k_ + i, bit);
  }
  // Overall parity: make total codeword weight even.
  bool par = false;
  for (int p = 0; p < n_ - 1; ++p) par ^= codeword.get(p);
  codeword.set(n_ - 1, par);
}

BitVec ExtendedBchCode::encode(const BitVec& message) const {
  BitVec cw(n_);
  encode(message, cw);
  return cw;
}

bool ExtendedBchCode::is_codeword(const BitVec& word) const {
  if (word.size() != n_) raise(Err::kLengthMismatch, "word length != n");
  if (word.parity()) return false;
  // For binary words S_2i = S_i^2, so the odd syndromes carry all information.
  std::vector<int> s(t_, 0);
  bool nonzero = false;
  word.for_each_set([&](int p) {
    if (p >= n_ - 1) return;
    for (int m = 0; m < t_; ++m) s[m] ^= syn_tab_[m][p];
  });
  for (int m = 0; m < t_; ++m) nonzero |= (s[m] != 0);
  return !nonzero;
}

void ExtendedBchCode::finish_outcome(const BitVec& word, int t_eff, int e1, const uint16_t* locs,
                                     DecodeOutcome& out) const {
  // Every codeword has even weight, so the word's overall parity equals the
  // parity of its total error count; a mismatch with the e1 located BCH-part
  // errors means the overall parity bit itself (position n) is in error.
  int parity_flip = (word.parity() ? 1 : 0) ^ (e1 & 1);
  int total = e1 + parity_flip;
  if (total > t_eff) return;  // stays Failure
  out.corrected = true;
  out.locations.assign(locs, locs + e1);
  for (auto& p : out.locations) p += 1;  // to 1-based
  if (parity_flip) out.locations.push_back(static_cast<uint16_t>(n_));
  std::sort(out.locations.begin(), out.locations.end());
}

void ExtendedBchCode::decode_bdd(const BitVec& word, int t_eff, DecodeOutcome& out,
                                 Algorithm alg) const {
  if (word.size() != n_) raise(Err::kLengthMismatch, "word length != n");
  if (t_eff < 1 || t_eff > t_)
    raise(Err::kInvalidArgument, "t_eff must be in [1, t]");
  out.reset();
  if (alg == Algorithm::kAuto) alg = (t_ <= 2) ? Algorithm::kPeterson : Algorithm::kBerlekampMassey;
  if (alg == Algorithm::kPeterson) {
    if (t_ > 2) raise(Err::kInvalidArgument, "Peterson path supports t <= 2 only");
    decode_peterson(word, t_eff, out);
  } else {
    decode_bm(word, t_eff, out);
  }
}

void ExtendedBchCode::decode_peterson(const BitVec& word, int t_eff, DecodeOutcome& out) const {
  int s1 = 0, s3 = 0;
  const uint16_t* tab1 = syn_tab_[0].data();
  const uint16_t* tab3 = t_ >= 2 ? syn_tab_[1].data() : nullptr;
  word.for_each_set([&](int p) {
    if (p >= n_ - 1) return;
    s1 ^= tab1[p];
    if (tab3) s3 ^= tab3[p];
  });

  uint16_t locs[2] = {0, 0};
  if (s1 == 0 && s3 == 0) {
    finish_outcome(word, t_eff, 0, locs, out);
    return;
  }
  if (s1 != 0) {
    int s1_cubed = field_.mul(field_.sqr(s1), s1);
    if (t_ == 1 || s3 == s1_cubed) {
      locs[0] = static_cast<uint16_t>(position_of(s1));
      finish_outcome(word, t_eff, 1, locs, out);
      return;
    }
    // Two-error locator x^2 + s1*x + sigma2 with sigma2 = (s3 + s1^3)/s1.
    // Substituting x = s1*y reduces it to y^2 + y = c, c = (s3 + s1^3)/s1^3.
    int c = field_.div(s3 ^ s1_cubed, s1_cubed);
    uint16_t y0 = quad_sol_[c];
    if (y0 == 0xFFFF) return;  // no roots: Failure
    int x1 = field_.mul(s1, y0);
    int x2 = x1 ^ s1;
    if (x1 == 0 || x2 == 0) return;  // degenerate (would need sigma2 == 0)
    int p1 = position_of(x1), p2 = position_of(x2);
    locs[0] = static_cast<uint16_t>(std::min(p1, p2));
    locs[1] = static_cast<uint16_t>(std::max(p1, p2));
    finish_outcome(word, t_eff, 2, locs, out);
    return;
  }
  // s1 == 0, s3 != 0: inconsistent with any 1- or 2-error pattern.
}

void ExtendedBchCode::decode_bm(const BitVec& word, int t_eff, DecodeOutcome& out) const {
  const int two_t = 2 * t_;
  // Odd syndromes from the table, even ones by squaring (S_2i = S_i^2).
  std::vector<int> S(two_t + 1, 0);
  word.for_each_set([&](int p) {
    if (p >= n_ - 1) return;
    for (int m = 0; m < t_; ++m) S[2 * m + 1] ^= syn_tab_[m][p];
  });
  bool all_zero = true;
  for (int m = 0; m < t_; ++m) all_zero &= (S[2 * m + 1] == 0);
  if (all_zero) {
    uint16_t none[1] = {0};
    finish_outcome(word, t_eff, 0, none, out);
    return;
  }
  for (int i = 1; 2 * i <= two_t; ++i) S[2 * i] = field_.sqr(S[i]);

  // Berlekamp-Massey for the error locator Lambda(x).
  std::vector<int> lambda(two_t + 1, 0), b(two_t + 1, 0), tvec(two_t + 1, 0);
  lambda[0] = 1;
  b[0] = 1;
  int L = 0, m = 1, bb = 1;
  for (int r = 0; r < two_t; ++r) {
    int delta = S[r + 1];
    for (int i = 1; i <= L; ++i) delta ^= field_.mul(lambda[i], S[r + 1 - i]);
    if (delta == 0) {
      ++m;
    } else if (2 * L <= r) {
      tvec = lambda;
      int coef = field_.div(delta, bb);
      for (int i = 0; i + m <= two_t; ++i)
        if (b[i]) lambda[i + m] ^= field_.mul(coef, b[i]);
      L = r + 1 - L;
      b = tvec;
      bb = delta;
      m = 1;
    } else {
      int coef = field_.div(delta, bb);
      for (int i = 0; i + m <= two_t; ++i)
        if (b[i]) lambda[i + m] ^= field_.mul(coef, b[i]);
      ++m;
    }
  }
  if (L > t_) return;  // more errors than the code can locate
  int actual_deg = 0;
  for (int i = L; i >= 1; --i)
    if (lambda[i]) {
      actual_deg = i;
      break;
    }
  if (actual_deg != L) return;  // degenerate locator

  // Chien search: position p has locator alpha^(n-2-p); p is in error iff
  // Lambda(alpha^-(n-2-p)) == 0. Collect and require exactly L distinct roots.
  std::vector<uint16_t> locs;
  locs.reserve(L);
  const int ord = field_.order();
  for (int p = 0; p < n_ - 1 && static_cast<int>(locs.size()) <= L; ++p) {
    int xinv_log = (ord - (n_ - 2 - p) % ord) % ord;
    int acc = lambda[0];
    for (int i = 1; i <= L; ++i) {
      if (lambda[i])
        acc ^= field_.mul(lambda[i], field_.alpha_pow(static_cast<int>(
                                         (static_cast<long>(xinv_log) * i) % ord)));
    }
    if (acc == 0) locs.push_back(static_cast<uint16_t>(p));
  }
  if (static_cast<int>(locs.size()) != L) return;  // missing or excess roots
  finish_outcome(word, t_eff, L, locs.data(), out);
}

void ExtendedBchCode::apply_flips(BitVec& word, const std::vector<uint16_t>& locations) {
  for (uint16_t e : locations) {
    if (e < 1 || e > word.size())
      raise(Err::kOutOfRange, "flip position " + std::to_string(e) + " outside 1.." +
                                  std::to_string(word.size()));
    word.flip(e - 1);
  }
}

}  // namespace scfec
