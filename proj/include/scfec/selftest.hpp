#pragma once

#include <cstdint>
#include <string>

#include "scfec/bch.hpp"

namespace scfec {

// Workload for one decode_bdd-vs-reference comparison suite. For each of
// `num_codewords` random codewords the checker compares both decoders, at
// every radius 1..t, on the clean word and on every flip pattern up to
// `exhaustive_max_weight` (skipped when negative). Independently it checks
// `random_patterns` random flip patterns of weight 0..random_max_weight, each
// on a fresh random codeword.
struct OracleCheckSpec {
  int num_codewords = 20;
  int exhaustive_max_weight = -1;
  uint64_t random_patterns = 0;
  int random_max_weight = 0;
  uint64_t seed = 0x5eedf00dULL;
};

// True iff decode_bdd and ReferenceBdd agree (outcome and flip locations) on
// every pattern the spec generates. On disagreement, appends a description of
// the first failing pattern to *why (when non-null) and returns false.
bool bdd_matches_reference(const ExtendedBchCode& code, const OracleCheckSpec& spec,
                           std::string* why);

// Builds the (field, t) code, then flips one mid-degree coefficient of its
// generator polynomial. Negative control: the oracle suites must notice.
ExtendedBchCode corrupted_generator_code(const Field& field, int t);

// Scripted decoder scenarios exercising the anchor bookkeeping on a small
// schematic window (no component code; outcomes come from a lookup table).
bool scenario_freeze_by_anchor(std::string* why);
bool scenario_backtrack_at_threshold(std::string* why);

// Plants a 3x3 error square straddling a block boundary so that every touched
// component word sees more errors than its radius; the window must come out
// of a full decode unchanged.
bool stall_pattern_is_stable(std::string* why);

// Streams noiseless blocks through all three decoders; output must be
// error-free and the stream must run to its block cap.
bool noiseless_stream_is_clean(std::string* why);

struct SelftestOptions {
  // Deliberately corrupts the generator used by the oracle suites. The
  // self-test is then expected to FAIL; a pass would mean the comparison
  // checks are vacuous.
  bool corrupt_generator = false;
};

struct SelftestReport {
  bool pass = true;
  std::string detail;  // one line per suite: "<name>: ok" or "<name>: FAIL <why>"
};

// Runs every built-in consistency suite and collects a line-per-suite report.
SelftestReport run_selftest(const SelftestOptions& options);

}  // namespace scfec
