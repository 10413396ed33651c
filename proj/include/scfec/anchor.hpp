#pragma once

#include <cstdint>
#include <vector>

#include "scfec/decoder.hpp"

namespace scfec {

enum class CwStatus { kNone, kAnchor, kFrozen };

// Decoding state of one component word under the anchor decoder.
struct CodewordState {
  CwStatus status = CwStatus::kNone;
  // Bit positions (1-based, sorted) flipped when this word became an anchor;
  // reversing them restores the pre-anchoring bits exactly.
  std::vector<uint16_t> applied_flips;
  // Flat ids of codewords this word is in conflict with (sorted, unique).
  // Symmetric: x lists y iff y lists x. Edges survive unfreezing and are
  // dropped when either endpoint is backtracked, demoted, or leaves the window.
  std::vector<int> conflicts;
  // Flat ids of the anchors that froze this word (sorted, unique; empty
  // unless status == kFrozen).
  std::vector<int> frozen_by;
};

enum class FlipPhase { kApply, kReverse };

// Observation hooks for instrumentation and audit logging in tests.
// Handlers run synchronously at the point of the state change.
class AnchorObserver {
 public:
  virtual ~AnchorObserver() = default;
  virtual void on_fresh_decode(CwId, const DecodeOutcome&, int /*t_eff*/) {}
  virtual void on_freeze(CwId /*word*/, CwId /*anchor*/) {}
  virtual void on_conflict_add(CwId, CwId) {}
  virtual void on_conflict_remove(CwId, CwId) {}
  virtual void on_mark(CwId /*anchor*/, CwId /*by*/) {}
  virtual void on_flip(CwId /*actor*/, int /*bit*/, BitLocation, FlipPhase) {}
  virtual void on_anchor(CwId) {}
  virtual void on_backtrack(CwId) {}
  // Anchor lost its status because a backtracking reversal changed one of its
  // bits; its own flips are not reversed.
  virtual void on_demote(CwId) {}
  virtual void on_unfreeze(CwId) {}
  virtual void on_shift() {}
};

// Miscorrection-avoiding window decoder. Successful component decodes promote
// words to anchors; a proposed flip that lands inside an anchor either freezes
// the proposing word (anchor trusted: fewer than T other conflicts) or marks
// the anchor for backtracking (threshold reached). Marked anchors have their
// flips reversed and their state cleared before the new flips are applied.
// Position W-1 decodes with the reduced radius t_eff_last; all other
// positions use the full radius t.
class AnchorDecoder {
 public:
  explicit AnchorDecoder(StaircaseParams params);

  // Observational only (miscorrection counting); never gates decisions.
  void attach_genie(const GenieContext* genie) { genie_ = genie; }
  void set_decode_fn(DecodeFn fn) { decode_fn_ = std::move(fn); }
  void set_observer(AnchorObserver* obs) { observer_ = obs; }

  const StaircaseParams& params() const { return params_; }
  int t_eff_at(int i) const {
    return (i == params_.W - 1) ? params_.t_eff_last : params_.t();
  }

  int flat_id(int i, int j) const { return (i - 1) * params_.a() + (j - 1); }
  CwId cw_of(int flat) const {
    return CwId{flat / params_.a() + 1, flat % params_.a() + 1};
  }

  CodewordState& state(int i, int j) { return states_[static_cast<size_t>(flat_id(i, j))]; }
  const CodewordState& state(int i, int j) const {
    return states_[static_cast<size_t>(flat_id(i, j))];
  }
  CacheEntry& cache_entry(int i, int j) { return cache_.at(i, j); }
  const DecodeCache& cache() const { return cache_; }

  void reset();

  // Window slide: codeword state and cache move one position toward the
  // emission edge; state for the departing position is dropped (severing its
  // conflict edges and releasing words it froze) and the new position W-1
  // starts unanchored.
  void on_shift();

  // Populates the decode cache for every stale word without changing any bits
  // or any codeword state (position W-1 at t_eff_last).
  void initial_decode_pass(Window& win, DecodeCounters& counters);

  // One scheduled visit of word (i,j): refresh its outcome if stale, skip
  // anchors and frozen words, then freeze/mark/apply per the anchor rules.
  void process_codeword(Window& win, int i, int j, DecodeCounters& counters);

  // initial_decode_pass followed by ell sweeps of i=W-1..1, j=1..a.
  void decode_window(Window& win, DecodeCounters& counters);

 private:
  void run_decode(int i, int j, int t_eff, CacheEntry& e);
  void unfreeze(int fid);
  void add_conflict_edge(int x, int y);
  void remove_conflict_edges_of(int fid);
  void unfreeze_dependents_of(int fid);
  void backtrack_anchor(Window& win, int fid, DecodeCounters& c, int processing_fid,
                        bool& rebounced);
  void demote_collateral(int fid);

  StaircaseParams params_;
  const GenieContext* genie_ = nullptr;
  DecodeFn decode_fn_;
  AnchorObserver* observer_ = nullptr;
  DecodeCache cache_;
  std::vector<CodewordState> states_;
  std::vector<int> marked_;      // anchors marked for backtracking (transient per call)
  std::vector<uint16_t> flips_;  // private copy of the flip set being acted on
  BitVec word_;
  BitVec tx_;
};

}  // namespace scfec
