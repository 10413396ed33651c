#include "scfec/selftest.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "scfec/anchor.hpp"
#include "scfec/bch_reference.hpp"
#include "scfec/decoder.hpp"
#include "scfec/error.hpp"
#include "scfec/rng.hpp"
#include "scfec/sim.hpp"
#include "scfec/staircase.hpp"

namespace scfec {

namespace {

bool fail(std::string* why, const std::string& message) {
  if (why) *why += message;
  return false;
}

std::string describe_pattern(const BitVec& word, const BitVec& codeword, int t_eff,
                             const DecodeOutcome& fast, const DecodeOutcome& slow) {
  std::string s = "t_eff=" + std::to_string(t_eff) + " flipped={";
  bool first = true;
  for (int p = 0; p < word.size(); ++p) {
    if (word.get(p) == codeword.get(p)) continue;
    if (!first) s += ",";
    s += std::to_string(p + 1);
    first = false;
  }
  auto outcome_str = [](const DecodeOutcome& o) {
    if (!o.corrected) return std::string("Failure");
    std::string r = "Corrected{";
    for (size_t i = 0; i < o.locations.size(); ++i) {
      if (i) r += ",";
      r += std::to_string(o.locations[i]);
    }
    return r + "}";
  };
  s += "} fast=" + outcome_str(fast) + " reference=" + outcome_str(slow);
  return s;
}

bool outcomes_equal(const DecodeOutcome& x, const DecodeOutcome& y) {
  if (x.corrected != y.corrected) return false;
  return !x.corrected || x.locations == y.locations;
}

bool field_arithmetic_ok(std::string* why) {
  Field f(4);  // GF(16) over the default polynomial
  if (f.mul(0b0010, 0b1000) != 0b0011) {
    return fail(why, "alpha * alpha^3 should reduce to alpha + 1 in GF(16)");
  }
  for (int x = 1; x < 16; ++x) {
    if (f.mul(x, f.inv(x)) != 1) {
      return fail(why, "x * inv(x) != 1 for x=" + std::to_string(x));
    }
  }
  for (int i = 0; i < f.order(); ++i) {
    if (f.log(f.alpha_pow(i)) != i) {
      return fail(why, "exp/log roundtrip failed at exponent " + std::to_string(i));
    }
  }
  if (f.alpha_pow(f.order()) != 1) return fail(why, "alpha does not have full order");
  Field g(6);  // GF(64)
  for (int x : {1, 5, 33}) {
    for (int y : {2, 7, 40}) {
      for (int z : {3, 21, 63}) {
        if (g.mul(x, y ^ z) != (g.mul(x, y) ^ g.mul(x, z))) {
          return fail(why, "multiplication does not distribute over addition in GF(64)");
        }
      }
    }
  }
  bool rejected = false;
  try {
    Field bad(4, 0x1F);  // x^4+x^3+x^2+x+1: irreducible but x has order 5, not 15
  } catch (const Error& e) {
    rejected = (e.code() == Err::kNonPrimitivePolynomial);
  }
  if (!rejected) return fail(why, "non-primitive polynomial was accepted");
  return true;
}

// Scripted bounded-distance decoder: looks the (i, j) position up in a table
// and ignores the word contents. Unlisted positions report Failure.
DecodeFn scripted_decoder(std::map<std::pair<int, int>, std::vector<uint16_t>> table) {
  return [table = std::move(table)](const BitVec&, int i, int j, int,
                                    DecodeOutcome& out) {
    out.reset();
    auto it = table.find({i, j});
    if (it == table.end()) return;
    out.corrected = true;
    out.locations = it->second;
  };
}

StaircaseParams schematic_params() {
  StaircaseParams sp;
  sp.schematic_a = 6;
  sp.schematic_t = 2;
  sp.W = 6;
  sp.ell = 1;
  sp.T = 1;
  sp.t_eff_last = 2;
  return sp;
}

}  // namespace

ExtendedBchCode corrupted_generator_code(const Field& field, int t) {
  ExtendedBchCode good(field, t);
  std::vector<uint64_t> gen = good.generator();
  const int mid = good.generator_degree() / 2;  // keep the degree intact
  gen[static_cast<size_t>(mid / 64)] ^= 1ull << (mid % 64);
  return ExtendedBchCode::with_generator_for_tests(field, t, std::move(gen));
}

bool bdd_matches_reference(const ExtendedBchCode& code, const OracleCheckSpec& spec,
                           std::string* why) {
  ReferenceBdd ref(code);
  Xoshiro256StarStar rng(spec.seed);
  const int n = code.n();
  const int t = code.t();
  BitVec msg(code.k());
  BitVec cw(n);
  BitVec word(n);
  DecodeOutcome fast, slow;

  auto check_word = [&]() -> bool {
    for (int te = 1; te <= t; ++te) {
      code.decode_bdd(word, te, fast);
      ref.decode(word, te, slow);
      if (!outcomes_equal(fast, slow)) {
        fail(why, describe_pattern(word, cw, te, fast, slow));
        return false;
      }
    }
    return true;
  };

  if (spec.exhaustive_max_weight >= 0) {
    // Every flip pattern of weight <= exhaustive_max_weight on each codeword.
    std::function<bool(int, int)> patterns = [&](int start, int remaining) -> bool {
      if (remaining == 0) return true;
      for (int p = start; p < n; ++p) {
        word.flip(p);
        if (!check_word()) return false;
        if (!patterns(p + 1, remaining - 1)) return false;
        word.flip(p);
      }
      return true;
    };
    for (int c = 0; c < spec.num_codewords; ++c) {
      fill_random(msg, rng);
      code.encode(msg, cw);
      word = cw;
      if (!check_word()) return false;
      if (!patterns(0, spec.exhaustive_max_weight)) return false;
    }
  }

  // Random patterns, each on a fresh random codeword.
  std::vector<int> picked;
  for (uint64_t it = 0; it < spec.random_patterns; ++it) {
    fill_random(msg, rng);
    code.encode(msg, cw);
    word = cw;
    const int w = static_cast<int>(rng.next_below(
        static_cast<uint64_t>(spec.random_max_weight) + 1));
    picked.clear();
    while (static_cast<int>(picked.size()) < w) {
      int p = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
      bool dup = false;
      for (int q : picked) dup = dup || (q == p);
      if (!dup) {
        picked.push_back(p);
        word.flip(p);
      }
    }
    if (!check_word()) return false;
  }
  return true;
}

bool scenario_freeze_by_anchor(std::string* why) {
  StaircaseParams sp = schematic_params();
  AnchorDecoder dec(sp);
  dec.set_decode_fn(scripted_decoder({
      {{4, 4}, {}},        // anchors without flipping anything
      {{3, 4}, {10, 12}},  // bit 10 lands on the word protected by that anchor
  }));
  Window win(sp.a(), sp.W);
  DecodeCounters c;

  dec.process_codeword(win, 4, 4, c);
  if (dec.state(4, 4).status != CwStatus::kAnchor) return fail(why, "(4,4) did not anchor");
  if (!dec.state(4, 4).applied_flips.empty()) return fail(why, "(4,4) anchored with flips");

  dec.process_codeword(win, 3, 4, c);
  const int fid44 = dec.flat_id(4, 4);
  const int fid34 = dec.flat_id(3, 4);
  const CodewordState& frozen = dec.state(3, 4);
  const CodewordState& anchor = dec.state(4, 4);
  if (frozen.status != CwStatus::kFrozen) return fail(why, "(3,4) was not frozen");
  if (frozen.frozen_by != std::vector<int>{fid44}) return fail(why, "(3,4) frozen_by wrong");
  if (frozen.conflicts != std::vector<int>{fid44}) {
    return fail(why, "conflict edge missing on (3,4)");
  }
  if (anchor.status != CwStatus::kAnchor) return fail(why, "(4,4) lost anchor status");
  if (anchor.conflicts != std::vector<int>{fid34}) {
    return fail(why, "conflict edge missing on (4,4)");
  }
  if (c.freezes != 1) return fail(why, "expected exactly one freeze");
  if (c.corrections != 0) return fail(why, "no flips should have been applied");
  if (c.backtracks != 0) return fail(why, "no backtrack should have happened");
  for (int b = 0; b < sp.W; ++b) {
    if (win.block(b).popcount() != 0) return fail(why, "window bits changed");
  }
  return true;
}

bool scenario_backtrack_at_threshold(std::string* why) {
  StaircaseParams sp = schematic_params();
  AnchorDecoder dec(sp);
  dec.set_decode_fn(scripted_decoder({
      {{1, 3}, {5, 7}},   // first anchor, flips two bits
      {{2, 1}, {3}},      // conflicts with it -> frozen (threshold not reached)
      {{2, 2}, {3, 10}},  // second conflict reaches T=1 -> backtrack
  }));
  Window win(sp.a(), sp.W);
  DecodeCounters c;

  dec.process_codeword(win, 1, 3, c);
  if (dec.state(1, 3).status != CwStatus::kAnchor) return fail(why, "(1,3) did not anchor");
  if (dec.state(1, 3).applied_flips != std::vector<uint16_t>{5, 7}) {
    return fail(why, "(1,3) flips not recorded");
  }
  // Bit 5 of (1,3) = block 0 row 5 col 3; bit 7 = bit a+1 = block 1 row 3 col 1.
  if (!win.get_bit(1, 3, 5) || !win.get_bit(1, 3, 7)) {
    return fail(why, "(1,3) flips not applied to the window");
  }
  if (c.corrections != 1) return fail(why, "first anchor should count one correction");

  dec.process_codeword(win, 2, 1, c);
  if (dec.state(2, 1).status != CwStatus::kFrozen) return fail(why, "(2,1) was not frozen");
  if (dec.state(2, 1).frozen_by != std::vector<int>{dec.flat_id(1, 3)}) {
    return fail(why, "(2,1) frozen_by wrong");
  }
  if (c.freezes != 1) return fail(why, "expected one freeze");

  dec.process_codeword(win, 2, 2, c);
  if (c.backtracks != 1) return fail(why, "conflict threshold should trigger a backtrack");
  const CodewordState& old_anchor = dec.state(1, 3);
  if (old_anchor.status != CwStatus::kNone) return fail(why, "(1,3) not demoted");
  if (!old_anchor.applied_flips.empty()) return fail(why, "(1,3) flips not cleared");
  if (!old_anchor.conflicts.empty()) return fail(why, "(1,3) conflicts not cleared");
  const CodewordState& thawed = dec.state(2, 1);
  if (thawed.status != CwStatus::kNone) return fail(why, "(2,1) was not unfrozen");
  if (!thawed.frozen_by.empty()) return fail(why, "(2,1) frozen_by not cleared");
  if (!thawed.conflicts.empty()) return fail(why, "(2,1) conflict edge not removed");
  const CodewordState& winner = dec.state(2, 2);
  if (winner.status != CwStatus::kAnchor) return fail(why, "(2,2) did not anchor");
  if (winner.applied_flips != std::vector<uint16_t>{3, 10}) {
    return fail(why, "(2,2) flips not recorded");
  }
  if (c.corrections != 2) return fail(why, "backtracked round should count a correction");

  // Net window content: (1,3)'s flips reversed, (2,2)'s flips applied.
  if (win.get_bit(1, 3, 5) || win.get_bit(1, 3, 7)) {
    return fail(why, "(1,3) flips were not reversed");
  }
  if (!win.get_bit(2, 2, 3) || !win.get_bit(2, 2, 10)) {
    return fail(why, "(2,2) flips missing from the window");
  }
  int total = 0;
  for (int b = 0; b < sp.W; ++b) total += win.block(b).popcount();
  if (total != 2) return fail(why, "unexpected extra bits in the window");
  // Words whose bits were touched by the reversal must be re-decoded later.
  if (!dec.cache_entry(1, 3).dirty) return fail(why, "(1,3) cache entry not dirtied");
  if (!dec.cache_entry(2, 1).dirty) return fail(why, "(2,1) cache entry not dirtied");
  return true;
}

bool stall_pattern_is_stable(std::string* why) {
  auto code = std::make_shared<const ExtendedBchCode>(Field(6), 2);  // n=64, radius 2
  StaircaseParams sp;
  sp.code = code;
  sp.W = 4;
  sp.ell = 7;
  sp.T = 1;
  sp.t_eff_last = 2;
  Window win(code, sp.W);
  // 3x3 error square in the third block: every component word that sees it
  // sees exactly three errors, one more than the decoding radius.
  for (int r = 0; r < 3; ++r) {
    for (int col = 0; col < 3; ++col) win.block(2).flip(r, col);
  }
  const int a = sp.a();
  BitVec word(2 * a);
  for (int i = 2; i <= 3; ++i) {
    for (int j = 1; j <= a; ++j) {
      win.extract_word(i, j, word);
      const int expect = (j <= 3) ? 3 : 0;
      if (word.popcount() != expect) {
        return fail(why, "error square precondition violated at (" + std::to_string(i) +
                             "," + std::to_string(j) + ")");
      }
    }
  }
  ConventionalDecoder dec(sp, /*genie_gated=*/false);
  DecodeCounters c;
  dec.decode_window(win, c);
  if (c.corrections != 0) return fail(why, "stalled pattern was (mis)corrected");
  if (c.miscorrections != 0) return fail(why, "miscorrection reported without a genie");
  if (win.block(2).popcount() != 9) return fail(why, "error square was altered");
  for (int b : {0, 1, 3}) {
    if (win.block(b).popcount() != 0) return fail(why, "clean blocks were altered");
  }
  for (int r = 0; r < 3; ++r) {
    for (int col = 0; col < 3; ++col) {
      if (!win.block(2).get(r, col)) return fail(why, "error square bit cleared");
    }
  }
  return true;
}

bool noiseless_stream_is_clean(std::string* why) {
  SimConfig cfg;
  cfg.params.code = std::make_shared<const ExtendedBchCode>(Field(4), 1);
  cfg.params.W = 4;
  cfg.params.ell = 2;
  cfg.params.T = 1;
  cfg.params.t_eff_last = 1;
  cfg.p = 0.0;
  cfg.seed = 7;
  cfg.stop.min_bit_errors = 1;
  cfg.stop.max_blocks = 40;
  for (DecoderKind kind :
       {DecoderKind::kConventional, DecoderKind::kGenie, DecoderKind::kAnchor}) {
    cfg.decoder = kind;
    TrialResult r = run_stream(cfg);
    const std::string who = decoder_name(kind);
    if (r.stats.blocks_emitted != 40) {
      return fail(why, who + ": expected 40 measured blocks, got " +
                           std::to_string(r.stats.blocks_emitted));
    }
    if (r.stats.pre_fec_bit_errors != 0) {
      return fail(why, who + ": noiseless channel delivered bit errors");
    }
    if (r.stats.post_fec_bit_errors != 0) {
      return fail(why, who + ": decoder introduced bit errors on a clean stream");
    }
    if (r.stats.counters.corrections != 0 || r.stats.counters.miscorrections != 0 ||
        r.stats.counters.failures != 0) {
      return fail(why, who + ": decoder activity on a clean stream");
    }
  }
  return true;
}

SelftestReport run_selftest(const SelftestOptions& options) {
  SelftestReport report;
  auto suite = [&report](const char* name, const std::function<bool(std::string*)>& fn) {
    std::string why;
    bool ok = false;
    try {
      ok = fn(&why);
    } catch (const std::exception& e) {
      ok = false;
      why = std::string("exception: ") + e.what();
    }
    report.detail += name;
    if (ok) {
      report.detail += ": ok\n";
    } else {
      report.detail += ": FAIL ";
      report.detail += why.empty() ? "(no detail)" : why;
      report.detail += "\n";
      report.pass = false;
    }
  };

  const bool corrupt = options.corrupt_generator;
  auto make_code = [corrupt](int nu, int t) {
    Field f(nu);
    return corrupt ? corrupted_generator_code(f, t) : ExtendedBchCode(f, t);
  };

  suite("field-arithmetic", field_arithmetic_ok);
  suite("bdd-reference-n16", [&](std::string* why) {
    OracleCheckSpec spec;
    spec.num_codewords = 8;
    spec.exhaustive_max_weight = 2;  // whole pattern space through weight 2
    spec.random_patterns = 500;
    spec.random_max_weight = 4;
    return bdd_matches_reference(make_code(4, 1), spec, why);
  });
  suite("bdd-reference-n32", [&](std::string* why) {
    OracleCheckSpec spec;
    spec.num_codewords = 2;
    spec.exhaustive_max_weight = 2;
    spec.random_patterns = 500;
    spec.random_max_weight = 5;
    return bdd_matches_reference(make_code(5, 2), spec, why);
  });
  suite("freeze-scenario", scenario_freeze_by_anchor);
  suite("backtrack-scenario", scenario_backtrack_at_threshold);
  suite("stall-pattern", stall_pattern_is_stable);
  suite("noiseless-stream", noiseless_stream_is_clean);
  return report;
}

}  // namespace scfec
