#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scfec/decoder.hpp"
#include "scfec/staircase.hpp"

namespace scfec {

struct StoppingRule {
  uint64_t min_bit_errors = 100;  // stop once this many post-FEC bit errors are observed
  uint64_t max_blocks = 1000000;  // hard cap on measured blocks
};

struct TrialStats {
  uint64_t blocks_emitted = 0;  // measured (post-warm-up) emitted blocks
  uint64_t pre_fec_bit_errors = 0;
  uint64_t post_fec_bit_errors = 0;
  uint64_t block_errors = 0;     // measured blocks with >= 1 residual bit error
  DecodeCounters counters;       // decoder activity over the whole stream
};

struct SimConfig {
  StaircaseParams params;
  DecoderKind decoder = DecoderKind::kConventional;
  double p = 0.0;  // BSC crossover probability, [0, 0.5)
  uint64_t seed = 1;
  StoppingRule stop;
  // Transmit all-zero codewords instead of encoding random data; the BER
  // statistics are distributionally identical (code linearity, symmetric
  // channel) but the encoder is bypassed.
  bool all_zero_fast = false;
};

// One output row: the configuration echo plus measured statistics.
struct TrialResult {
  DecoderKind decoder = DecoderKind::kConventional;
  int nu = 0;
  int t = 0;
  int a = 0;
  int W = 0;
  int ell = 0;
  int T = 0;
  int t_eff_last = 0;
  double p = 0.0;
  double eb_n0_db = 0.0;  // +infinity when p == 0
  uint64_t seed = 0;
  TrialStats stats;

  uint64_t measured_bits() const {
    return stats.blocks_emitted * static_cast<uint64_t>(a) * static_cast<uint64_t>(a);
  }
  double pre_fec_ber() const;
  double post_fec_ber() const;
  // 95% confidence interval on the post-FEC BER (normal approximation).
  double ber_ci_low() const;
  double ber_ci_high() const;
};

// Encodes a pseudo-random stream, transmits it over the BSC, window-decodes,
// and accumulates statistics on emitted blocks after a W-block warm-up.
// Fully determined by (config, seed).
TrialResult run_stream(const SimConfig& config);

struct SweepConfig {
  StaircaseParams params;
  std::vector<double> ps;  // channel points, one output row per (point, decoder)
  std::vector<DecoderKind> decoders;
  uint64_t master_seed = 1;
  StoppingRule stop;
  int threads = 1;
  bool all_zero_fast = false;
};

// Runs every (point, decoder) pair; rows are seeded by row index so results
// are byte-identical for any thread count.
std::vector<TrialResult> run_sweep(const SweepConfig& config);

std::string csv_header();
std::string csv_row(const TrialResult& r);
// JSON array of row objects with the same field names as the CSV columns;
// eb_n0_db is null where the CSV reports inf.
std::string json_rows(const std::vector<TrialResult>& rows);

}  // namespace scfec
