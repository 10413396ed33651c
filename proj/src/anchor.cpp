#include "scfec/anchor.hpp"

#include <algorithm>

#include "scfec/error.hpp"

namespace scfec {

namespace {

StaircaseParams validate_params(StaircaseParams p) {
  p.validate();
  return p;
}

// Sorted-unique insertion; returns true if the value was absent.
bool insert_unique(std::vector<int>& v, int value) {
  auto it = std::lower_bound(v.begin(), v.end(), value);
  if (it != v.end() && *it == value) return false;
  v.insert(it, value);
  return true;
}

// Returns true if the value was present (and removed).
bool erase_value(std::vector<int>& v, int value) {
  auto it = std::lower_bound(v.begin(), v.end(), value);
  if (it == v.end() || *it != value) return false;
  v.erase(it);
  return true;
}

bool contains(const std::vector<int>& v, int value) {
  return std::binary_search(v.begin(), v.end(), value);
}

}  // namespace

AnchorDecoder::AnchorDecoder(StaircaseParams params)
    : params_(validate_params(std::move(params))), cache_(params_.W, params_.a()) {
  states_.assign(static_cast<size_t>(params_.W - 1) * static_cast<size_t>(params_.a()),
                 CodewordState{});
  word_.resize(2 * params_.a());
  tx_.resize(2 * params_.a());
}

void AnchorDecoder::reset() {
  cache_.reset();
  for (CodewordState& s : states_) s = CodewordState{};
}

void AnchorDecoder::run_decode(int i, int j, int t_eff, CacheEntry& e) {
  if (decode_fn_) {
    decode_fn_(word_, i, j, t_eff, e.outcome);
  } else {
    if (!params_.code) {
      raise(Err::kInvalidParameters, "decoding without a component code needs a decode function");
    }
    params_.code->decode_bdd(word_, t_eff, e.outcome);
  }
  e.t_eff_used = t_eff;
  e.dirty = false;
  if (observer_) observer_->on_fresh_decode(CwId{i, j}, e.outcome, t_eff);
}

void AnchorDecoder::initial_decode_pass(Window& win, DecodeCounters& counters) {
  for (int i = params_.W - 1; i >= 1; --i) {
    for (int j = 1; j <= params_.a(); ++j) {
      CacheEntry& e = cache_.at(i, j);
      if (!e.dirty) continue;
      win.extract_word(i, j, word_);
      run_decode(i, j, t_eff_at(i), e);
      ++counters.fresh_decodes;
      if (!e.outcome.corrected) ++counters.failures;
    }
  }
}

void AnchorDecoder::decode_window(Window& win, DecodeCounters& counters) {
  initial_decode_pass(win, counters);
  for (int l = 0; l < params_.ell; ++l) {
    for (int i = params_.W - 1; i >= 1; --i) {
      for (int j = 1; j <= params_.a(); ++j) {
        process_codeword(win, i, j, counters);
      }
    }
  }
}

void AnchorDecoder::process_codeword(Window& win, int i, int j, DecodeCounters& c) {
  const int self = flat_id(i, j);
  CodewordState& st = states_[static_cast<size_t>(self)];
  // Frozen words stay untouched until a bit change unfreezes them; anchors
  // carry no stale bits by construction (any change demotes them first).
  if (st.status != CwStatus::kNone) return;

  CacheEntry& e = cache_.at(i, j);
  bool have_word = false;
  if (e.dirty) {
    win.extract_word(i, j, word_);
    have_word = true;
    run_decode(i, j, t_eff_at(i), e);
    ++c.fresh_decodes;
    if (!e.outcome.corrected) ++c.failures;
  }

  // Step 1: a failed decode proposes nothing.
  if (!e.outcome.corrected) return;

  if (e.outcome.locations.empty()) {
    // The word is already a codeword; it anchors as-is, able to freeze
    // later contradicting proposals.
    st.status = CwStatus::kAnchor;
    st.applied_flips.clear();
    if (observer_) observer_->on_anchor(CwId{i, j});
    return;
  }

  // Private copy: cache refreshes below must not alias the set being applied.
  flips_.assign(e.outcome.locations.begin(), e.outcome.locations.end());
  // The pre-flip word is needed later for miscorrection bookkeeping; capture
  // it before any backtracking can move this word's bits.
  if (!have_word && genie_) {
    win.extract_word(i, j, word_);
    have_word = true;
  }

  // Step 2: test every proposed flip against the anchor registry.
  marked_.clear();
  for (uint16_t bit : flips_) {
    auto o = orthogonal_of(params_, i, j, bit);
    if (!o) continue;  // partner outside the window: flip is ungated
    const int ofid = flat_id(o->i, o->j);
    CodewordState& os = states_[static_cast<size_t>(ofid)];
    if (os.status != CwStatus::kAnchor) continue;
    int conflicts_elsewhere = static_cast<int>(os.conflicts.size());
    if (contains(os.conflicts, self)) --conflicts_elsewhere;
    if (conflicts_elsewhere < params_.T) {
      // The anchor is still trusted: freeze this word instead of flipping.
      st.status = CwStatus::kFrozen;
      insert_unique(st.frozen_by, ofid);
      add_conflict_edge(self, ofid);
      marked_.clear();  // freezing wins over any marks set earlier in this call
      ++c.freezes;
      if (observer_) observer_->on_freeze(CwId{i, j}, *o);
      return;
    }
    if (insert_unique(marked_, ofid) && observer_) observer_->on_mark(*o, CwId{i, j});
  }

  // Backtrack marked anchors before touching any bits ourselves: the merged
  // effect equals flipping first and reversing afterwards (flips commute),
  // and this way no live anchor's bits are ever modified by an apply.
  bool rebounced = false;
  for (int mfid : marked_) backtrack_anchor(win, mfid, c, self, rebounced);

  // Step 3: apply the flips and put every word they touch back in play.
  for (uint16_t bit : flips_) {
    win.flip_bit(i, j, bit);
    if (observer_) {
      observer_->on_flip(CwId{i, j}, bit, locate_bit(params_, i, j, bit), FlipPhase::kApply);
    }
    auto o = orthogonal_of(params_, i, j, bit);
    if (!o) continue;
    const int ofid = flat_id(o->i, o->j);
    CodewordState& os = states_[static_cast<size_t>(ofid)];
    if (os.status == CwStatus::kAnchor) {
      raise(Err::kInternal, "applied flip reached a live anchor");
    }
    cache_.mark_dirty(o->i, o->j);
    if (os.status == CwStatus::kFrozen) unfreeze(ofid);
  }
  ++c.corrections;
  if (genie_) {
    // A correction is a miscorrection iff the word as decoded (pre-flip bits
    // plus this call's flips) differs from the transmitted word.
    ExtendedBchCode::apply_flips(word_, flips_);
    genie_->extract_word(i, j, tx_);
    if (!(word_ == tx_)) ++c.miscorrections;
  }

  if (rebounced) {
    // A backtracked anchor shared a bit with this word, so its reversal moved
    // our bits mid-call and the window no longer holds the decoded codeword.
    // Leave the word unanchored; its entry is already marked for a fresh look.
    return;
  }

  st.status = CwStatus::kAnchor;
  st.applied_flips = std::move(flips_);
  flips_ = {};
  // The window now holds this word's decoded codeword.
  e.outcome.corrected = true;
  e.outcome.locations.clear();
  if (observer_) observer_->on_anchor(CwId{i, j});
}

void AnchorDecoder::backtrack_anchor(Window& win, int fid, DecodeCounters& c,
                                     int processing_fid, bool& rebounced) {
  CodewordState& ms = states_[static_cast<size_t>(fid)];
  if (ms.status != CwStatus::kAnchor) return;  // demoted earlier in this pass
  const CwId m = cw_of(fid);
  if (observer_) observer_->on_backtrack(m);
  for (uint16_t bit : ms.applied_flips) {
    win.flip_bit(m.i, m.j, bit);
    if (observer_) {
      observer_->on_flip(m, bit, locate_bit(params_, m.i, m.j, bit), FlipPhase::kReverse);
    }
    auto o = orthogonal_of(params_, m.i, m.j, bit);
    if (!o) continue;
    const int ofid = flat_id(o->i, o->j);
    cache_.mark_dirty(o->i, o->j);
    if (ofid == processing_fid) rebounced = true;
    CodewordState& os = states_[static_cast<size_t>(ofid)];
    if (os.status == CwStatus::kFrozen) {
      unfreeze(ofid);
    } else if (os.status == CwStatus::kAnchor) {
      demote_collateral(ofid);
    }
  }
  // The reversal changed this word's own bits: look at it afresh later.
  cache_.mark_dirty(m.i, m.j);
  ms.status = CwStatus::kNone;
  ms.applied_flips.clear();
  remove_conflict_edges_of(fid);
  unfreeze_dependents_of(fid);
  ++c.backtracks;
}

void AnchorDecoder::demote_collateral(int fid) {
  CodewordState& s = states_[static_cast<size_t>(fid)];
  s.status = CwStatus::kNone;
  s.applied_flips.clear();  // its bits no longer match what anchoring recorded
  remove_conflict_edges_of(fid);
  unfreeze_dependents_of(fid);
  if (observer_) observer_->on_demote(cw_of(fid));
}

void AnchorDecoder::unfreeze(int fid) {
  CodewordState& s = states_[static_cast<size_t>(fid)];
  s.status = CwStatus::kNone;
  s.frozen_by.clear();  // conflict edges are kept: the disagreement happened
  if (observer_) observer_->on_unfreeze(cw_of(fid));
}

void AnchorDecoder::add_conflict_edge(int x, int y) {
  const bool added_x = insert_unique(states_[static_cast<size_t>(x)].conflicts, y);
  const bool added_y = insert_unique(states_[static_cast<size_t>(y)].conflicts, x);
  if ((added_x || added_y) && observer_) observer_->on_conflict_add(cw_of(x), cw_of(y));
}

void AnchorDecoder::remove_conflict_edges_of(int fid) {
  CodewordState& s = states_[static_cast<size_t>(fid)];
  for (int partner : s.conflicts) {
    erase_value(states_[static_cast<size_t>(partner)].conflicts, fid);
    if (observer_) observer_->on_conflict_remove(cw_of(fid), cw_of(partner));
  }
  s.conflicts.clear();
}

void AnchorDecoder::unfreeze_dependents_of(int fid) {
  for (size_t s = 0; s < states_.size(); ++s) {
    CodewordState& os = states_[s];
    if (!erase_value(os.frozen_by, fid)) continue;
    if (os.frozen_by.empty() && os.status == CwStatus::kFrozen) {
      os.status = CwStatus::kNone;
      if (observer_) observer_->on_unfreeze(cw_of(static_cast<int>(s)));
    }
  }
}

void AnchorDecoder::on_shift() {
  cache_.shift(params_.t());
  const int a = params_.a();
  const int total = static_cast<int>(states_.size());
  // Sever all edges touching the codewords that leave with the emitted block.
  for (int d = 0; d < a && d < total; ++d) {
    CodewordState& ds = states_[static_cast<size_t>(d)];
    for (int partner : ds.conflicts) {
      erase_value(states_[static_cast<size_t>(partner)].conflicts, d);
    }
    ds = CodewordState{};
  }
  // Departing anchors release the words they froze (bits are unchanged, so
  // the released words retry from their cached outcomes).
  for (int s = a; s < total; ++s) {
    CodewordState& os = states_[static_cast<size_t>(s)];
    bool removed = false;
    for (int d = 0; d < a; ++d) removed = erase_value(os.frozen_by, d) || removed;
    if (removed && os.frozen_by.empty() && os.status == CwStatus::kFrozen) {
      os.status = CwStatus::kNone;
      if (observer_) observer_->on_unfreeze(cw_of(s));
    }
  }
  // Slide the surviving state down one position and renumber its references.
  for (int s = 0; s + a < total; ++s) states_[static_cast<size_t>(s)] =
      std::move(states_[static_cast<size_t>(s + a)]);
  for (int s = std::max(total - a, 0); s < total; ++s) {
    states_[static_cast<size_t>(s)] = CodewordState{};
  }
  for (int s = 0; s + a < total; ++s) {
    CodewordState& os = states_[static_cast<size_t>(s)];
    for (int& v : os.conflicts) v -= a;
    for (int& v : os.frozen_by) v -= a;
  }
  if (observer_) observer_->on_shift();
}

}  // namespace scfec
