#include "scfec/decoder.hpp"

#include "scfec/error.hpp"

namespace scfec {

const char* decoder_name(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::kConventional:
      return "conventional";
    case DecoderKind::kGenie:
      return "genie";
    case DecoderKind::kAnchor:
      return "anchor";
  }
  return "?";
}

DecoderKind decoder_from_name(const std::string& name) {
  if (name == "conventional") return DecoderKind::kConventional;
  if (name == "genie") return DecoderKind::kGenie;
  if (name == "anchor") return DecoderKind::kAnchor;
  raise(Err::kInvalidArgument, "unknown decoder '" + name +
                                   "' (expected conventional, genie, or anchor)");
}

DecodeCache::DecodeCache(int W, int a) : W_(W), a_(a) {
  if (W < 2 || a < 1) raise(Err::kInvalidParameters, "decode cache: bad dimensions");
  entries_.assign(static_cast<size_t>(W - 1) * static_cast<size_t>(a), CacheEntry{});
}

void DecodeCache::reset() {
  for (CacheEntry& e : entries_) e = CacheEntry{};
}

void DecodeCache::shift(int t_full) {
  const size_t a = static_cast<size_t>(a_);
  for (size_t s = 0; s + a < entries_.size(); ++s) {
    entries_[s] = std::move(entries_[s + a]);
    CacheEntry& e = entries_[s];
    if (!e.dirty && !e.outcome.corrected && e.t_eff_used < t_full) e.dirty = true;
  }
  for (size_t s = entries_.size() - a; s < entries_.size(); ++s) entries_[s] = CacheEntry{};
}

namespace {

StaircaseParams validate_params(StaircaseParams p) {
  p.validate();
  return p;
}

}  // namespace

ConventionalDecoder::ConventionalDecoder(StaircaseParams params, bool genie_gated)
    : params_(validate_params(std::move(params))),
      genie_gated_(genie_gated),
      cache_(params_.W, params_.a()) {
  word_.resize(2 * params_.a());
  tx_.resize(2 * params_.a());
}

void ConventionalDecoder::reset() { cache_.reset(); }

void ConventionalDecoder::decode_window(Window& win, DecodeCounters& counters) {
  if (genie_gated_ && !genie_) {
    raise(Err::kInvalidParameters, "idealized decoding requires an attached genie context");
  }
  for (int l = 0; l < params_.ell; ++l) {
    for (int i = params_.W - 1; i >= 1; --i) {
      for (int j = 1; j <= params_.a(); ++j) {
        process(win, i, j, counters);
      }
    }
  }
}

void ConventionalDecoder::process(Window& win, int i, int j, DecodeCounters& c) {
  CacheEntry& e = cache_.at(i, j);
  // A clean entry was fully acted upon at its last visit: a Failure leaves
  // nothing to do and a success was already applied (leaving a codeword).
  if (!e.dirty) return;

  const int t_eff = params_.t();
  win.extract_word(i, j, word_);
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
  ++c.fresh_decodes;

  if (!e.outcome.corrected) {
    ++c.failures;
    return;
  }
  if (e.outcome.locations.empty()) return;  // already a codeword

  bool apply = true;
  bool miscorrected = false;
  if (genie_) {
    genie_->extract_word(i, j, tx_);
    ExtendedBchCode::apply_flips(word_, e.outcome.locations);
    miscorrected = !(word_ == tx_);
    if (genie_gated_ && miscorrected) apply = false;
  }

  if (!apply) {
    // Idealized decoding: a would-be miscorrection is treated as a failure.
    e.outcome.corrected = false;
    e.outcome.locations.clear();
    ++c.failures;
    return;
  }

  for (uint16_t bit : e.outcome.locations) {
    win.flip_bit(i, j, bit);
    if (auto o = orthogonal_of(params_, i, j, bit)) cache_.mark_dirty(o->i, o->j);
  }
  ++c.corrections;
  if (miscorrected) ++c.miscorrections;
  // The word is now a codeword; record that so the clean entry remains a
  // faithful decode outcome for the current bits.
  e.outcome.corrected = true;
  e.outcome.locations.clear();
}

}  // namespace scfec
