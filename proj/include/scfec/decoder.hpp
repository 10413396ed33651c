#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "scfec/bch.hpp"
#include "scfec/bits.hpp"
#include "scfec/staircase.hpp"

namespace scfec {

enum class DecoderKind { kConventional, kGenie, kAnchor };

// "conventional" | "genie" | "anchor".
const char* decoder_name(DecoderKind kind);
DecoderKind decoder_from_name(const std::string& name);

// Pluggable component decoder; tests use it to script outcomes. Default is
// the component code's bounded-distance decoder.
using DecodeFn =
    std::function<void(const BitVec& word, int i, int j, int t_eff, DecodeOutcome& out)>;

struct DecodeCounters {
  uint64_t corrections = 0;     // applied non-empty flip sets
  uint64_t miscorrections = 0;  // applied corrections that left the word != transmitted word
  uint64_t freezes = 0;
  uint64_t backtracks = 0;
  uint64_t failures = 0;       // fresh component decodes whose final outcome is Failure
  uint64_t fresh_decodes = 0;  // component decodes actually run (cache misses)

  DecodeCounters& operator+=(const DecodeCounters& o) {
    corrections += o.corrections;
    miscorrections += o.miscorrections;
    freezes += o.freezes;
    backtracks += o.backtracks;
    failures += o.failures;
    fresh_decodes += o.fresh_decodes;
    return *this;
  }
  void reset() { *this = DecodeCounters{}; }
};

// Cached outcome of the last component decode of one word.
struct CacheEntry {
  DecodeOutcome outcome;
  int t_eff_used = 0;
  bool dirty = true;  // bits changed since the outcome was computed (or never decoded)
};

// Per-window decode cache, indexed by codeword position/row. A word is
// re-decoded only when marked dirty; this is behaviorally identical to
// always re-decoding since outcomes depend only on the word's bits.
class DecodeCache {
 public:
  DecodeCache(int W, int a);

  CacheEntry& at(int i, int j) { return entries_[idx(i, j)]; }
  const CacheEntry& at(int i, int j) const { return entries_[idx(i, j)]; }
  void mark_dirty(int i, int j) { entries_[idx(i, j)].dirty = true; }
  void reset();

  // Window slide: entries move one position toward the emission edge and the
  // vacated newest position starts fresh. A cached Failure decided at a
  // reduced radius is invalidated when its new position allows a larger one
  // (a cached success stays valid: a larger radius finds the same codeword).
  void shift(int t_full);

 private:
  size_t idx(int i, int j) const {
    return static_cast<size_t>(i - 1) * static_cast<size_t>(a_) + static_cast<size_t>(j - 1);
  }
  int W_;
  int a_;
  std::vector<CacheEntry> entries_;
};

// Ground-truth view of the transmitted stream, kept aligned with the decoding
// window. Gates flips in the idealized decoder and counts miscorrections in
// the others. Simulation-only: decoders must run without one attached.
class GenieContext {
 public:
  GenieContext(int a, int W) : win_(a, W) {}
  GenieContext(const std::shared_ptr<const ExtendedBchCode>& code, int W) : win_(code, W) {}

  BitMatrix shift(BitMatrix transmitted) { return win_.shift(std::move(transmitted)); }
  void extract_word(int i, int j, BitVec& out) const { win_.extract_word(i, j, out); }
  Window& window() { return win_; }
  const Window& window() const { return win_; }

 private:
  Window win_;
};

// Sliding-window decoder that immediately applies every successful component
// decode, visiting words in the schedule l=1..ell, i=W-1..1, j=1..a at the
// full decoding radius. With genie gating enabled, a correction is applied
// only if it restores the transmitted word; any other success is treated
// (and counted) as a failure, so miscorrections never enter the window.
class ConventionalDecoder {
 public:
  ConventionalDecoder(StaircaseParams params, bool genie_gated);

  // Required before decoding when genie-gated; otherwise optional, enabling
  // miscorrection counting only.
  void attach_genie(const GenieContext* genie) { genie_ = genie; }
  void set_decode_fn(DecodeFn fn) { decode_fn_ = std::move(fn); }

  void reset();
  void on_shift() { cache_.shift(params_.t()); }
  void decode_window(Window& win, DecodeCounters& counters);

  const StaircaseParams& params() const { return params_; }
  const DecodeCache& cache() const { return cache_; }

 private:
  void process(Window& win, int i, int j, DecodeCounters& c);

  StaircaseParams params_;
  bool genie_gated_;
  const GenieContext* genie_ = nullptr;
  DecodeFn decode_fn_;
  DecodeCache cache_;
  BitVec word_;
  BitVec tx_;
};

}  // namespace scfec
