// Acceptance harness: nine end-to-end checks of the staircase FEC library,
// printed as exactly one PASS/FAIL line each. Exit status is 0 iff all pass.
//
// The checks cover component-decoder equivalence against an independent
// reference decoder (1), CLI parameter reporting (2), scripted anchor-logic
// scenarios (3), noiseless-stream correctness (4), decoder BER ordering at a
// located operating point (5), miscorrection suppression at that point (6),
// the effect of a reduced decoding radius on miscorrections (7), a randomized
// state-machine invariant fuzz (8), and byte-level determinism (9).
//
// The CLI binary is taken from the STAIRCASE_CLI_BIN environment variable
// (falling back to ./staircase), so checks 2 and 9 exercise the shipped
// executable end to end.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "scfec/anchor.hpp"
#include "scfec/bch.hpp"
#include "scfec/bits.hpp"
#include "scfec/channel.hpp"
#include "scfec/decoder.hpp"
#include "scfec/error.hpp"
#include "scfec/gf.hpp"
#include "scfec/rng.hpp"
#include "scfec/selftest.hpp"
#include "scfec/sim.hpp"
#include "scfec/staircase.hpp"

namespace {

using namespace scfec;

constexpr uint64_t kMasterSeed = 0x5CA1AB1Eull;

using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[4096];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return std::string(buf);
}

void print_line(int num, bool pass, const std::string& detail) {
  std::printf("%s: criterion %d - %s\n", pass ? "PASS" : "FAIL", num, detail.c_str());
  std::fflush(stdout);
}

std::string cli_bin() {
  const char* env = std::getenv("STAIRCASE_CLI_BIN");
  return (env != nullptr && env[0] != '\0') ? std::string(env) : std::string("./staircase");
}

// Runs the CLI with the given arguments, capturing stdout+stderr; returns the
// exit code (negative on popen/abnormal-exit problems).
int run_cli(const std::string& args, std::string* out) {
  out->clear();
  const std::string cmd = "\"" + cli_bin() + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return -1;
  char buf[8192];
  size_t nr = 0;
  while ((nr = fread(buf, 1, sizeof buf, pipe)) > 0) out->append(buf, nr);
  const int st = pclose(pipe);
  return WIFEXITED(st) ? WEXITSTATUS(st) : -2;
}

// The reference configuration used by checks 4-6 and 9:
// nu=8, t=2 component code; W=8, ell=7, T=1, t_eff_last=1.
StaircaseParams reference_params(std::shared_ptr<const ExtendedBchCode> code) {
  StaircaseParams p;
  p.code = std::move(code);
  p.W = 8;
  p.ell = 7;
  p.T = 1;
  p.t_eff_last = 1;
  p.validate();
  return p;
}

std::string csv_of(const std::vector<TrialResult>& rows) {
  std::string s = csv_header();
  s += '\n';
  for (const TrialResult& r : rows) {
    s += csv_row(r);
    s += '\n';
  }
  return s;
}

// ---------------------------------------------------------------------------
// Criterion 1: the production bounded-distance decoder agrees exactly with an
// independently implemented reference decoder (outcome and flip locations) at
// every radius, over exhaustive low-weight patterns and bulk random patterns.
// ---------------------------------------------------------------------------
bool criterion1(std::string* d) {
  const auto t0 = Clock::now();
  std::string why;
  bool ok_all = true;

  {
    Field f(4);
    ExtendedBchCode c(f, 1);
    OracleCheckSpec s;
    s.num_codewords = 100;
    s.exhaustive_max_weight = 2;
    s.random_patterns = 0;
    s.random_max_weight = 0;
    s.seed = derive_seed(kMasterSeed, 101);
    if (!bdd_matches_reference(c, s, &why)) {
      ok_all = false;
      why = "(nu=4,t=1): " + why;
    }
  }
  if (ok_all) {
    Field f(5);
    ExtendedBchCode c(f, 2);
    OracleCheckSpec s;
    s.num_codewords = 0;
    s.exhaustive_max_weight = -1;
    s.random_patterns = 100000;
    s.random_max_weight = 4;
    s.seed = derive_seed(kMasterSeed, 102);
    if (!bdd_matches_reference(c, s, &why)) {
      ok_all = false;
      why = "(nu=5,t=2): " + why;
    }
  }
  if (ok_all) {
    Field f(6);
    ExtendedBchCode c(f, 2);
    OracleCheckSpec s;
    s.num_codewords = 0;
    s.exhaustive_max_weight = -1;
    s.random_patterns = 100000;
    s.random_max_weight = 4;
    s.seed = derive_seed(kMasterSeed, 103);
    if (!bdd_matches_reference(c, s, &why)) {
      ok_all = false;
      why = "(nu=6,t=2): " + why;
    }
  }

  const double el = secs_since(t0);
  const bool ok = ok_all && el <= 300.0;
  *d = fmt(
      "bounded-distance decoder vs. independent reference, every radius 1..t: "
      "(nu=4,t=1) exhaustive weight<=2 on 100 random codewords; (nu=5,t=2) and "
      "(nu=6,t=2) 100000 random patterns of weight 0..4 each; %s; %.1fs%s",
      ok_all ? "zero mismatches" : why.c_str(), el, el > 300.0 ? " (over 300s budget)" : "");
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 2: the CLI reports the block size and staircase rate of the
// nu=8, t=2 component code: a=128 and R=0.867 (+-0.0005).
// ---------------------------------------------------------------------------
bool criterion2(std::string* d) {
  std::string out;
  const int rc = run_cli("code-info --nu 8 --t 2", &out);
  int a = -1;
  double R = -1.0;
  size_t pos = 0;
  while (pos < out.size()) {
    size_t eol = out.find('\n', pos);
    if (eol == std::string::npos) eol = out.size();
    const std::string line = out.substr(pos, eol - pos);
    int iv = 0;
    double dv = 0.0;
    if (std::sscanf(line.c_str(), "a = %d", &iv) == 1) a = iv;
    if (std::sscanf(line.c_str(), "R = %lf", &dv) == 1) R = dv;
    pos = eol + 1;
  }
  const bool ok = rc == 0 && a == 128 && std::fabs(R - 0.867) <= 0.0005;
  *d = fmt("CLI code-info --nu 8 --t 2: exit=%d, a=%d (need 128), R=%.7f (need 0.867+-0.0005)",
           rc, a, R);
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 3: the scripted anchor-machinery scenarios (freeze by a trusted
// anchor; backtrack once the conflict threshold is reached) hold with exact
// state assertions.
// ---------------------------------------------------------------------------
bool criterion3(std::string* d) {
  std::string w1, w2;
  const bool ok1 = scenario_freeze_by_anchor(&w1);
  const bool ok2 = scenario_backtrack_at_threshold(&w2);
  *d = std::string("scripted anchor scenarios with exact state assertions: ") +
       "freeze-by-trusted-anchor " + (ok1 ? "ok" : "FAIL [" + w1 + "]") +
       "; backtrack-at-conflict-threshold " + (ok2 ? "ok" : "FAIL [" + w2 + "]");
  return ok1 && ok2;
}

// ---------------------------------------------------------------------------
// Criterion 4: a noiseless (p=0) stream of 1000 blocks at the reference
// configuration decodes with exactly zero post-FEC bit errors under all three
// decoders.
// ---------------------------------------------------------------------------
bool criterion4(const StaircaseParams& ref, std::string* d) {
  const auto t0 = Clock::now();
  const DecoderKind kinds[3] = {DecoderKind::kConventional, DecoderKind::kGenie,
                                DecoderKind::kAnchor};
  uint64_t errs[3] = {0, 0, 0};
  uint64_t blocks[3] = {0, 0, 0};
  for (int k = 0; k < 3; ++k) {
    SimConfig c;
    c.params = ref;
    c.decoder = kinds[k];
    c.p = 0.0;
    c.seed = derive_seed(kMasterSeed, 400);
    c.stop.min_bit_errors = 1;  // a single residual error would stop the run early
    c.stop.max_blocks = 1000;
    const TrialResult r = run_stream(c);
    errs[k] = r.stats.post_fec_bit_errors;
    blocks[k] = r.stats.blocks_emitted;
  }
  const double el = secs_since(t0);
  const bool ok = errs[0] == 0 && errs[1] == 0 && errs[2] == 0 && blocks[0] == 1000 &&
                  blocks[1] == 1000 && blocks[2] == 1000 && el <= 60.0;
  *d = fmt(
      "p=0 stream of 1000 encoded blocks (nu=8 t=2 W=8 ell=7 T=1 t_eff_last=1): post-FEC "
      "bit errors conventional=%" PRIu64 " genie=%" PRIu64 " anchor=%" PRIu64
      " (need exactly 0), blocks %" PRIu64 "/%" PRIu64 "/%" PRIu64 "; %.1fs%s",
      errs[0], errs[1], errs[2], blocks[0], blocks[1], blocks[2], el,
      el > 60.0 ? " (over 60s budget)" : "");
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 5: locate an operating point p* where the conventional decoder's
// post-FEC BER falls in [1e-4, 1e-3], then measure all three decoders there
// with at least 100 bit-error events each and verify
//   genie BER <= anchor BER <= conventional BER,
// with non-overlapping 95% confidence intervals between anchor and
// conventional and anchor BER within 2x of genie BER.
// ---------------------------------------------------------------------------
struct OrderingArtifacts {
  bool pass = false;       // full verdict for this criterion
  bool have_rows = false;  // measurement rows usable by criteria 6 and 9
  double p_star = -1.0;
  SweepConfig sweep;
  std::vector<TrialResult> rows;  // [0]=conventional, [1]=genie, [2]=anchor
  std::string csv_threads1;
};

OrderingArtifacts criterion5(const StaircaseParams& ref, std::string* d) {
  OrderingArtifacts art;
  const auto t0 = Clock::now();

  uint64_t probe_idx = 0;
  auto probe_ber = [&](double p) {
    SimConfig c;
    c.params = ref;
    c.decoder = DecoderKind::kConventional;
    c.p = p;
    c.seed = derive_seed(kMasterSeed, 500 + probe_idx++);
    c.stop.min_bit_errors = 120;
    c.stop.max_blocks = 60000;
    c.all_zero_fast = true;  // probes only locate p*; the measurement encodes real data
    return run_stream(c).post_fec_ber();
  };

  const double band_lo = 1e-4, band_hi = 1e-3;
  double p_star = -1.0;
  double last_high = -1.0;  // largest probed p with BER above the band
  static constexpr double kGrid[] = {0.02,   0.015, 0.012,  0.010, 0.009,  0.008, 0.0075,
                                     0.007,  0.0065, 0.006, 0.0055, 0.005, 0.0045, 0.004,
                                     0.0035, 0.003, 0.0025, 0.002, 0.0015, 0.001};
  for (double p : kGrid) {
    const double ber = probe_ber(p);
    if (ber >= band_lo && ber <= band_hi) {
      p_star = p;
      break;
    }
    if (ber > band_hi) {
      last_high = p;
      continue;
    }
    // The grid jumped from above the band to below it: bisect the gap.
    if (last_high < 0.0) break;
    double hi = last_high, lo = p;
    for (int iter = 0; iter < 24 && p_star < 0.0; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double b = probe_ber(mid);
      if (b >= band_lo && b <= band_hi) {
        p_star = mid;
      } else if (b > band_hi) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    break;
  }
  if (p_star < 0.0) {
    *d = fmt(
        "no operating point found with conventional post-FEC BER in [1e-4,1e-3] "
        "(coarse grid 0.001..0.02 plus bisection, %" PRIu64 " probes, %.0fs)",
        probe_idx, secs_since(t0));
    return art;
  }

  // Refinement: re-estimate on real encoded data, still conventional-only.
  // Post-FEC bit errors arrive in bursts (decoding stalls), so the short
  // probes above can misjudge the rate severalfold; this stage uses larger
  // error budgets and bisects p onto the band's interior, leaving margin for
  // estimator drift in the final measurement. The conventional decoder has
  // plentiful errors everywhere near the band, so these runs stay cheap.
  uint64_t refine_idx = 0;
  auto conv_ber = [&](double p) {
    SimConfig c;
    c.params = ref;
    c.decoder = DecoderKind::kConventional;
    c.p = p;
    c.seed = derive_seed(kMasterSeed, 600 + refine_idx++);
    c.stop.min_bit_errors = 1500;
    c.stop.max_blocks = 30000;
    return run_stream(c).post_fec_ber();
  };
  const double target_lo = 2.5e-4, target_hi = 6e-4;  // interior of the band
  double blo = 0.0, bhi = 0.0;  // bracket: BER(blo) below target, BER(bhi) above
  {
    double cand = p_star;
    bool interior = false;
    for (int i = 0; i < 20 && !interior; ++i) {
      const double v = conv_ber(cand);
      if (v >= target_lo && v <= target_hi) {
        p_star = cand;
        interior = true;
      } else if (v > target_hi) {
        bhi = cand;
      } else {
        blo = cand;
      }
      if (interior) break;
      if (blo > 0.0 && bhi > 0.0)
        cand = 0.5 * (blo + bhi);
      else if (bhi > 0.0)
        cand = bhi * 0.90;
      else
        cand = blo * 1.12;
    }
    if (!interior && blo > 0.0 && bhi > 0.0) p_star = 0.5 * (blo + bhi);
  }

  // Measurement sweep at p*. The in-band condition is re-checked on the long
  // run; if the conventional row still drifts out of the band, its value
  // feeds back into the bracket and the sweep re-runs (the genie and anchor
  // rows dominate a round's cost, so rounds are capped).
  std::vector<TrialResult> rows;
  for (int round = 0; round < 3; ++round) {
    SweepConfig sc;
    sc.params = ref;
    sc.ps = {p_star};
    sc.decoders = {DecoderKind::kConventional, DecoderKind::kGenie, DecoderKind::kAnchor};
    sc.master_seed = kMasterSeed;
    sc.stop.min_bit_errors = 1200;
    sc.stop.max_blocks = 200000;
    sc.threads = 1;
    rows = run_sweep(sc);
    art.sweep = sc;
    const double cb = rows[0].post_fec_ber();
    if (cb >= band_lo && cb <= band_hi) break;
    if (cb > band_hi) {
      bhi = p_star;
    } else {
      blo = p_star;
    }
    p_star = (blo > 0.0 && bhi > 0.0) ? 0.5 * (blo + bhi)
                                      : (cb > band_hi ? p_star * 0.93 : p_star * 1.07);
  }
  art.rows = rows;
  art.have_rows = true;
  art.csv_threads1 = csv_of(rows);
  art.p_star = art.sweep.ps[0];

  const TrialResult& conv = rows[0];
  const TrialResult& gen = rows[1];
  const TrialResult& anc = rows[2];
  const uint64_t ec = conv.stats.post_fec_bit_errors;
  const uint64_t eg = gen.stats.post_fec_bit_errors;
  const uint64_t ea = anc.stats.post_fec_bit_errors;
  const double cber = conv.post_fec_ber();
  const double gber = gen.post_fec_ber();
  const double aber = anc.post_fec_ber();

  const bool in_band = cber >= band_lo && cber <= band_hi;
  const bool enough = ec >= 100 && eg >= 100 && ea >= 100;
  const bool order = gber <= aber && aber <= cber;
  const bool ci_sep = anc.ber_ci_high() < conv.ber_ci_low();
  const bool two_x = aber <= 2.0 * gber;
  const double el = secs_since(t0);
  art.pass = in_band && enough && order && ci_sep && two_x && el <= 3600.0;

  // A decoder that produced no errors at all still bounds its BER from above;
  // spell that bound out so a zero-event row is interpretable on its own.
  std::string zero_note;
  auto note_zero = [&zero_note](const char* name, const TrialResult& r) {
    if (r.stats.post_fec_bit_errors == 0 && r.measured_bits() > 0) {
      zero_note += fmt("; %s: zero errors in %.3g bits (95%% upper bound %.2g)", name,
                       double(r.measured_bits()), 3.6889 / double(r.measured_bits()));
    }
  };
  note_zero("genie", gen);
  note_zero("anchor", anc);

  *d = fmt(
      "p*=%.6g (conventional BER in [1e-4,1e-3]: %s): post-FEC BER conventional=%.4g "
      "[%.4g,%.4g], anchor=%.4g [%.4g,%.4g], genie=%.4g [%.4g,%.4g]; bit-error events "
      "%" PRIu64 "/%" PRIu64 "/%" PRIu64 " over %" PRIu64 "/%" PRIu64 "/%" PRIu64
      " measured blocks (need >=100 events each: %s); genie<=anchor<=conventional: "
      "%s; anchor/conventional 95%% CIs disjoint: %s; anchor<=2x genie: %s%s; %.0fs; note: this "
      "desk-scale CI-separated ordering at p* stands in for large-scale results that are not "
      "reproducible at desk scale (about 0.4 dB additional coding gain at post-FEC BER 1e-9, "
      "and an error floor lowered by over an order of magnitude)",
      art.p_star, in_band ? "yes" : "NO", cber, conv.ber_ci_low(), conv.ber_ci_high(), aber,
      anc.ber_ci_low(), anc.ber_ci_high(), gber, gen.ber_ci_low(), gen.ber_ci_high(), ec, ea,
      eg, conv.stats.blocks_emitted, anc.stats.blocks_emitted, gen.stats.blocks_emitted,
      enough ? "yes" : "NO", order ? "yes" : "NO", ci_sep ? "yes" : "NO",
      two_x ? "yes" : "NO", zero_note.c_str(), el);
  return art;
}

// ---------------------------------------------------------------------------
// Criterion 6: at the same operating point, the anchor decoder's applied
// miscorrection fraction (miscorrections/corrections) is at most 10% of the
// conventional decoder's, and the genie decoder applies exactly zero
// miscorrections.
// ---------------------------------------------------------------------------
bool criterion6(const OrderingArtifacts& art, std::string* d) {
  if (!art.have_rows) {
    *d = "skipped: no operating-point measurement available from criterion 5";
    return false;
  }
  const TrialResult& conv = art.rows[0];
  const TrialResult& gen = art.rows[1];
  const TrialResult& anc = art.rows[2];
  const uint64_t cc = conv.stats.counters.corrections;
  const uint64_t cm = conv.stats.counters.miscorrections;
  const uint64_t ac = anc.stats.counters.corrections;
  const uint64_t am = anc.stats.counters.miscorrections;
  const uint64_t gm = gen.stats.counters.miscorrections;
  const double cf = cc > 0 ? static_cast<double>(cm) / static_cast<double>(cc) : 0.0;
  const double af = ac > 0 ? static_cast<double>(am) / static_cast<double>(ac) : 0.0;
  const bool ok = cc > 0 && ac > 0 && gm == 0 && af <= 0.10 * cf;
  *d = fmt(
      "miscorrection fraction (miscorrections/corrections) at p*=%.6g: conventional "
      "%" PRIu64 "/%" PRIu64 " = %.3e, anchor %" PRIu64 "/%" PRIu64 " = %.3e (= %.1f%% of "
      "conventional, need <=10%%), genie miscorrections = %" PRIu64 " (need exactly 0)",
      art.p_star, cm, cc, cf, am, ac, af, cf > 0.0 ? 100.0 * af / cf : 0.0, gm);
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 7: reducing the decoding radius reduces miscorrections. For the
// nu=8, t=2 code, random weight-3 patterns on random codewords must
// miscorrect at least 10x less often at radius 1 than at radius 2. Because
// the transmitted codeword is farther away than either radius, every
// acceptance counts as a miscorrection. Two supplements make the measurement
// non-vacuous: random weight-4 patterns (where the overall parity bit no
// longer blocks acceptance) measure literal miscorrections of a transmitted
// codeword, and uniform random words measure the acceptance-sphere volume
// ratio directly (expected near n/2).
// ---------------------------------------------------------------------------
bool criterion7(std::string* d) {
  const auto t0 = Clock::now();
  Field f(8);
  ExtendedBchCode code(f, 2);
  const int n = code.n();
  Xoshiro256StarStar rng(derive_seed(kMasterSeed, 700));
  BitVec msg(code.k()), cw, word;
  DecodeOutcome out;
  const uint64_t kPatterns = 100000;
  uint64_t acc[5][3] = {};  // acc[weight][radius]

  for (int wt : {3, 4}) {
    for (uint64_t it = 0; it < kPatterns; ++it) {
      fill_random(msg, rng);
      code.encode(msg, cw);
      word = cw;
      int pos[4];
      int cnt = 0;
      while (cnt < wt) {
        const int p = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
        bool dup = false;
        for (int q = 0; q < cnt; ++q) dup = dup || (pos[q] == p);
        if (!dup) pos[cnt++] = p;
      }
      for (int q = 0; q < cnt; ++q) word.flip(pos[q]);
      for (int te = 1; te <= 2; ++te) {
        code.decode_bdd(word, te, out);
        if (out.corrected) ++acc[wt][te];
      }
    }
  }

  // Acceptance rate of uniform random words: the decoding-sphere volume grows
  // by about a factor of n/2 going from radius 1 to radius 2.
  uint64_t rnd[3] = {};
  BitVec rword(n);
  for (uint64_t it = 0; it < kPatterns; ++it) {
    fill_random(rword, rng);
    for (int te = 1; te <= 2; ++te) {
      code.decode_bdd(rword, te, out);
      if (out.corrected) ++rnd[te];
    }
  }

  const uint64_t m3_1 = acc[3][1], m3_2 = acc[3][2];
  const uint64_t m4_1 = acc[4][1], m4_2 = acc[4][2];
  const bool w3_ok = m3_1 * 10 <= m3_2;  // radius-1 rate at least 10x below radius-2 rate
  const bool w4_ok = m4_2 >= 10 * std::max<uint64_t>(m4_1, 1);
  const bool rnd_ok = rnd[2] >= 10 * std::max<uint64_t>(rnd[1], 1);
  const double el = secs_since(t0);
  const bool ok = w3_ok && w4_ok && rnd_ok && el <= 300.0;
  *d = fmt(
      "(nu=8,t=2), 100000 random patterns per experiment: weight-3 miscorrections "
      "radius1=%" PRIu64 " radius2=%" PRIu64 "%s; weight-4 miscorrections radius1=%" PRIu64
      " radius2=%" PRIu64 " (>=10x suppression by the smaller radius: %s); uniform-random-word "
      "acceptances radius1=%" PRIu64 " radius2=%" PRIu64 " (sphere-volume ratio %.1fx, need "
      ">=10x: %s); %.1fs",
      m3_1, m3_2,
      (m3_1 == 0 && m3_2 == 0)
          ? " (both exactly 0 -- the overall parity bit rules weight-3 acceptances out "
            "entirely, so the required 10x relation holds vacuously)"
          : (w3_ok ? " (10x relation holds)" : " (10x relation VIOLATED)"),
      m4_1, m4_2, w4_ok ? "yes" : "NO", rnd[1], rnd[2],
      rnd[1] > 0 ? static_cast<double>(rnd[2]) / static_cast<double>(rnd[1]) : 0.0,
      rnd_ok ? "yes" : "NO", el);
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 8: randomized fuzz of the anchor decoder's state machine. After
// every process_codeword call a validator checks, over the whole window:
//   - conflict lists are sorted, unique, in range, self-loop-free and
//     symmetric (x lists y iff y lists x);
//   - frozen words have a non-empty freezer list, every freezer is a live
//     anchor, and each freeze is backed by a conflict edge; non-frozen words
//     list no freezers;
//   - a live anchor's bits never change while it stays an anchor, and its
//     recorded flip set never mutates (checked against a snapshot taken when
//     the word anchored);
//   - every backtrack reverses exactly the recorded flip set and fully resets
//     the word's state;
//   - window bits change only through reported flips (an independently
//     maintained mirror window must stay byte-identical).
// ---------------------------------------------------------------------------
struct FuzzAudit final : AnchorObserver {
  struct FlipEv {
    CwId actor;
    int bit;
    FlipPhase phase;
  };
  Window* shadow = nullptr;
  std::vector<FlipEv> flips;      // flip events in the current call
  std::vector<CwId> backtracked;  // backtracks in the current call
  uint64_t freezes = 0, backtracks = 0, anchors = 0, demotes = 0;

  void on_flip(CwId actor, int bit, BitLocation loc, FlipPhase phase) override {
    flips.push_back(FlipEv{actor, bit, phase});
    shadow->block(loc.block).flip(loc.row - 1, loc.col - 1);
  }
  void on_backtrack(CwId w) override {
    backtracked.push_back(w);
    ++backtracks;
  }
  void on_freeze(CwId, CwId) override { ++freezes; }
  void on_anchor(CwId) override { ++anchors; }
  void on_demote(CwId) override { ++demotes; }
};

struct AnchorSnap {
  BitVec word;                    // the word's bits at the moment it anchored
  std::vector<uint16_t> flips;    // its applied flips at that moment
};

bool fuzz_validate(const AnchorDecoder& dec, const Window& win, const Window& shadow,
                   const std::map<int, AnchorSnap>& snaps, std::string* why) {
  const StaircaseParams& P = dec.params();
  const int a = P.a();
  const int total = (P.W - 1) * a;
  for (int b = 0; b < P.W; ++b) {
    if (!(win.block(b) == shadow.block(b))) {
      *why = fmt("window block %d diverged from the flip-audit mirror", b);
      return false;
    }
  }
  BitVec w;
  for (int fid = 0; fid < total; ++fid) {
    const CwId id = dec.cw_of(fid);
    const CodewordState& st = dec.state(id.i, id.j);
    int prev = -1;
    for (int v : st.conflicts) {
      if (v <= prev || v < 0 || v >= total || v == fid) {
        *why = fmt("word (%d,%d): malformed conflict list", id.i, id.j);
        return false;
      }
      prev = v;
      const CwId o = dec.cw_of(v);
      const std::vector<int>& back = dec.state(o.i, o.j).conflicts;
      if (!std::binary_search(back.begin(), back.end(), fid)) {
        *why = fmt("conflict edge (%d,%d)->(%d,%d) is not symmetric", id.i, id.j, o.i, o.j);
        return false;
      }
    }
    prev = -1;
    for (int v : st.frozen_by) {
      if (v <= prev || v < 0 || v >= total || v == fid) {
        *why = fmt("word (%d,%d): malformed freezer list", id.i, id.j);
        return false;
      }
      prev = v;
    }
    if (st.status == CwStatus::kFrozen) {
      if (st.frozen_by.empty()) {
        *why = fmt("word (%d,%d) is frozen with an empty freezer list", id.i, id.j);
        return false;
      }
      for (int v : st.frozen_by) {
        const CwId o = dec.cw_of(v);
        if (dec.state(o.i, o.j).status != CwStatus::kAnchor) {
          *why = fmt("word (%d,%d) lists freezer (%d,%d) which is not a live anchor", id.i,
                     id.j, o.i, o.j);
          return false;
        }
        if (!std::binary_search(st.conflicts.begin(), st.conflicts.end(), v)) {
          *why = fmt("word (%d,%d) was frozen by (%d,%d) without a conflict edge", id.i, id.j,
                     o.i, o.j);
          return false;
        }
      }
    } else if (!st.frozen_by.empty()) {
      *why = fmt("word (%d,%d) is not frozen but lists freezers", id.i, id.j);
      return false;
    }
    if (st.status == CwStatus::kAnchor) {
      const auto it = snaps.find(fid);
      if (it == snaps.end()) {
        *why = fmt("anchor (%d,%d) is missing from the audit snapshot", id.i, id.j);
        return false;
      }
      if (st.applied_flips != it->second.flips) {
        *why = fmt("anchor (%d,%d): recorded flip set mutated after anchoring", id.i, id.j);
        return false;
      }
      win.extract_word(id.i, id.j, w);
      if (!(w == it->second.word)) {
        *why = fmt("anchor (%d,%d): bits changed while anchored", id.i, id.j);
        return false;
      }
    } else if (!st.applied_flips.empty()) {
      *why = fmt("word (%d,%d) is not an anchor but records applied flips", id.i, id.j);
      return false;
    }
  }
  return true;
}

// Drops snapshots of words that are no longer anchors and records new anchors.
void update_snaps(const AnchorDecoder& dec, const Window& win,
                  std::map<int, AnchorSnap>* snaps) {
  const StaircaseParams& P = dec.params();
  const int total = (P.W - 1) * P.a();
  for (auto it = snaps->begin(); it != snaps->end();) {
    const CwId id = dec.cw_of(it->first);
    if (dec.state(id.i, id.j).status != CwStatus::kAnchor) {
      it = snaps->erase(it);
    } else {
      ++it;
    }
  }
  for (int fid = 0; fid < total; ++fid) {
    const CwId id = dec.cw_of(fid);
    const CodewordState& st = dec.state(id.i, id.j);
    if (st.status != CwStatus::kAnchor || snaps->count(fid) != 0) continue;
    AnchorSnap s;
    win.extract_word(id.i, id.j, s.word);
    s.flips = st.applied_flips;
    snaps->emplace(fid, std::move(s));
  }
}

// Verifies, against the pre-call snapshots, that each backtrack in this call
// reversed exactly the flip set recorded when the word anchored and reset it.
bool check_backtracks(const AnchorDecoder& dec, const FuzzAudit& audit,
                      const std::map<int, AnchorSnap>& snaps, std::string* why) {
  for (const CwId& m : audit.backtracked) {
    const int fid = dec.flat_id(m.i, m.j);
    const auto it = snaps.find(fid);
    if (it == snaps.end()) {
      *why = fmt("backtracked word (%d,%d) had no anchor snapshot", m.i, m.j);
      return false;
    }
    std::vector<uint16_t> reversed;
    for (const FuzzAudit::FlipEv& ev : audit.flips) {
      if (ev.phase == FlipPhase::kReverse && ev.actor == m) {
        reversed.push_back(static_cast<uint16_t>(ev.bit));
      }
    }
    std::sort(reversed.begin(), reversed.end());
    std::vector<uint16_t> expected = it->second.flips;
    std::sort(expected.begin(), expected.end());
    if (reversed != expected) {
      *why = fmt("backtrack of (%d,%d) reversed a different flip set than it applied", m.i, m.j);
      return false;
    }
    const CodewordState& st = dec.state(m.i, m.j);
    if (st.status != CwStatus::kNone || !st.applied_flips.empty()) {
      *why = fmt("backtracked word (%d,%d) was not fully reset", m.i, m.j);
      return false;
    }
  }
  return true;
}

bool criterion8(std::string* d) {
  const auto t0 = Clock::now();
  auto code = std::make_shared<const ExtendedBchCode>(Field(4), 1);
  StaircaseParams P;
  P.code = code;
  P.W = 5;
  P.ell = 2;
  P.T = 1;
  P.t_eff_last = 1;
  P.validate();
  AnchorDecoder dec(P);
  Window win(code, P.W);
  Window shadow(code, P.W);
  FuzzAudit audit;
  audit.shadow = &shadow;
  dec.set_observer(&audit);
  std::map<int, AnchorSnap> snaps;
  DecodeCounters cnt;
  Xoshiro256StarStar rng(derive_seed(kMasterSeed, 800));
  const double p_noise = 0.06;  // heavy noise: plenty of miscorrections and conflicts
  const int a = P.a();

  auto do_shift = [&]() {
    dec.on_shift();
    BitMatrix incoming(a);
    transmit(incoming, p_noise, rng);
    BitMatrix mirror = incoming;
    win.shift(std::move(incoming));
    shadow.shift(std::move(mirror));
    std::map<int, AnchorSnap> slid;
    for (auto& [fid, s] : snaps) {
      if (fid >= a) slid.emplace(fid - a, std::move(s));
    }
    snaps = std::move(slid);
  };

  std::string why;
  for (int s = 0; s < P.W; ++s) do_shift();  // start from a fully noisy window
  if (!fuzz_validate(dec, win, shadow, snaps, &why)) {
    *d = "after warm-up: " + why;
    return false;
  }

  const uint64_t kCalls = 10000;
  for (uint64_t call = 0; call < kCalls; ++call) {
    if (call % 37 == 36) {
      do_shift();
      if (!fuzz_validate(dec, win, shadow, snaps, &why)) {
        *d = fmt("after shift at call %" PRIu64 ": %s", call, why.c_str());
        return false;
      }
    }
    const int i = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(P.W - 1)));
    const int j = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(a)));
    audit.flips.clear();
    audit.backtracked.clear();
    dec.process_codeword(win, i, j, cnt);
    if (!check_backtracks(dec, audit, snaps, &why)) {
      *d = fmt("call %" PRIu64 " on (%d,%d): %s", call, i, j, why.c_str());
      return false;
    }
    update_snaps(dec, win, &snaps);
    if (!fuzz_validate(dec, win, shadow, snaps, &why)) {
      *d = fmt("call %" PRIu64 " on (%d,%d): %s", call, i, j, why.c_str());
      return false;
    }
  }

  const bool exercised = cnt.freezes >= 1 && cnt.backtracks >= 1 && cnt.corrections >= 1;
  const bool counters_match = cnt.freezes == audit.freezes && cnt.backtracks == audit.backtracks;
  const double el = secs_since(t0);
  *d = fmt(
      "10000 randomized process-codeword calls on a (nu=4,t=1) W=5 noisy stream, full "
      "invariant audit after every call: zero violations (symmetric conflict edges, frozen "
      "words list only live anchors, anchor bits immutable, backtracks reverse exactly the "
      "recorded flips, bits change only through reported flips); activity: %" PRIu64
      " anchors set, %" PRIu64 " freezes, %" PRIu64 " backtracks, %" PRIu64 " demotions, "
      "%" PRIu64 " corrections; %.1fs%s%s",
      audit.anchors, cnt.freezes, cnt.backtracks, audit.demotes, cnt.corrections, el,
      exercised ? "" : " -- fuzz failed to exercise the freeze/backtrack/correction paths",
      counters_match ? "" : " -- observer event counts disagree with decoder counters");
  return exercised && counters_match;
}

// ---------------------------------------------------------------------------
// Criterion 9: identical (seed, config) produce byte-identical CSV output
// across repeated runs and across worker-thread counts, both through the
// library and end to end through the CLI.
// ---------------------------------------------------------------------------
bool criterion9(const OrderingArtifacts& art, const StaircaseParams& ref, std::string* d) {
  std::string base_csv;
  std::string which;
  SweepConfig sc;
  if (art.have_rows) {
    sc = art.sweep;
    base_csv = art.csv_threads1;
    which = fmt("operating-point sweep at p*=%.6g", art.p_star);
  } else {
    sc.params = ref;
    sc.ps = {0.006};
    sc.decoders = {DecoderKind::kConventional, DecoderKind::kGenie, DecoderKind::kAnchor};
    sc.master_seed = kMasterSeed;
    sc.stop.min_bit_errors = 60;
    sc.stop.max_blocks = 20000;
    sc.threads = 1;
    base_csv = csv_of(run_sweep(sc));
    which = "fallback sweep at p=0.006";
  }
  SweepConfig sc4 = sc;
  sc4.threads = 4;
  const std::string csv4 = csv_of(run_sweep(sc4));
  const bool lib_ok = !base_csv.empty() && csv4 == base_csv;

  const std::string cmd =
      "sweep --nu 4 --t 1 --W 4 --ell 2 --T 1 --t_eff_last 1 --p_list 0.002,0.01 "
      "--decoders conventional,genie,anchor --seed 99 --min_bit_errors 20 --max_blocks 400";
  std::string o1, o2, o3;
  const int r1 = run_cli(cmd + " --threads 2", &o1);
  const int r2 = run_cli(cmd + " --threads 2", &o2);
  const int r3 = run_cli(cmd + " --threads 1", &o3);
  const bool cli_bytes = !o1.empty() && o1 == o2 && o1 == o3;
  const bool cli_ok = r1 == 0 && r2 == 0 && r3 == 0 && cli_bytes;

  *d = fmt(
      "library %s byte-identical across worker counts 1 and 4: %s; CLI sweep run twice at "
      "--threads 2 and once at --threads 1 (exit %d/%d/%d): %s (%zu-byte CSV)",
      which.c_str(), lib_ok ? "yes" : "NO", r1, r2, r3,
      cli_bytes ? "byte-identical" : "outputs DIFFER", o1.size());
  return lib_ok && cli_ok;
}

}  // namespace

int main() {
  int failures = 0;
  std::string d;
  const auto guard = [&](int num, auto&& fn) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      d = std::string("unhandled exception: ") + e.what();
      ok = false;
    }
    print_line(num, ok, d);
    if (!ok) ++failures;
  };

  auto code8 = std::make_shared<const ExtendedBchCode>(Field(8), 2);
  const StaircaseParams ref = reference_params(code8);

  guard(1, [&] { return criterion1(&d); });
  guard(2, [&] { return criterion2(&d); });
  guard(3, [&] { return criterion3(&d); });
  guard(4, [&] { return criterion4(ref, &d); });
  OrderingArtifacts art;
  guard(5, [&] {
    art = criterion5(ref, &d);
    return art.pass;
  });
  guard(6, [&] { return criterion6(art, &d); });
  guard(7, [&] { return criterion7(&d); });
  guard(8, [&] { return criterion8(&d); });
  guard(9, [&] { return criterion9(art, ref, &d); });

  return failures == 0 ? 0 : 1;
}
