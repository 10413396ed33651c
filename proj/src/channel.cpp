#include "scfec/channel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "scfec/error.hpp"

namespace scfec {

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) raise(Err::kInvalidArgument, "q_inv: p must be in (0, 1)");
  // q_func is strictly decreasing; bisect over a range wide enough for any
  // double that erfc can resolve.
  double lo = -45.0, hi = 45.0;
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (q_func(mid) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double crossover_from_eb_n0(double eb_n0_db, double rate) {
  if (!(rate > 0.0)) raise(Err::kInvalidArgument, "crossover_from_eb_n0: rate must be positive");
  const double gamma = std::pow(10.0, eb_n0_db / 10.0);
  return q_func(std::sqrt(2.0 * rate * gamma));
}

double eb_n0_from_crossover(double p, double rate) {
  if (!(rate > 0.0)) raise(Err::kInvalidArgument, "eb_n0_from_crossover: rate must be positive");
  if (p == 0.0) return std::numeric_limits<double>::infinity();
  if (!(p > 0.0 && p < 0.5)) {
    raise(Err::kInvalidArgument, "eb_n0_from_crossover: p must be in [0, 0.5)");
  }
  const double x = q_inv(p);  // sqrt(2 * R * gamma)
  const double gamma = x * x / (2.0 * rate);
  return 10.0 * std::log10(gamma);
}

void transmit(BitMatrix& block, double p, Xoshiro256StarStar& rng) {
  if (!(p >= 0.0 && p < 0.5)) {
    raise(Err::kInvalidArgument, "transmit: p must be in [0, 0.5), got " + std::to_string(p));
  }
  // Flip iff u < threshold with threshold = round(p * 2^64): an exact
  // Bernoulli draw on the generator's 64-bit output.
  const uint64_t threshold = static_cast<uint64_t>(std::llround(p * 0x1p64));
  const int a = block.a();
  for (int r = 0; r < a; ++r) {
    for (int c = 0; c < a; ++c) {
      if (rng.next() < threshold) block.flip(r, c);
    }
  }
}

}  // namespace scfec
