#pragma once

#include "scfec/bits.hpp"
#include "scfec/rng.hpp"

namespace scfec {

// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_func(double x);

// Inverse of q_func on (0, 1); q_inv(0.5) = 0.
double q_inv(double p);

// BSC crossover probability for BPSK over AWGN with hard decisions at the
// given Eb/N0 (dB) and code rate: p = Q(sqrt(2 * R * 10^(db/10))).
double crossover_from_eb_n0(double eb_n0_db, double rate);

// Inverse mapping; returns +infinity for p == 0. Requires 0 <= p < 0.5.
double eb_n0_from_crossover(double p, double rate);

// Flips each bit of the block independently with probability p (exact
// integer-threshold Bernoulli on the raw generator output, so results are
// bit-reproducible across platforms). Requires 0 <= p < 0.5.
void transmit(BitMatrix& block, double p, Xoshiro256StarStar& rng);

}  // namespace scfec
