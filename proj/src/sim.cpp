#include "scfec/sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "scfec/anchor.hpp"
#include "scfec/channel.hpp"
#include "scfec/error.hpp"
#include "scfec/rng.hpp"

namespace scfec {

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

double TrialResult::pre_fec_ber() const {
  const uint64_t n = measured_bits();
  return n == 0 ? 0.0 : static_cast<double>(stats.pre_fec_bit_errors) / static_cast<double>(n);
}

double TrialResult::post_fec_ber() const {
  const uint64_t n = measured_bits();
  return n == 0 ? 0.0 : static_cast<double>(stats.post_fec_bit_errors) / static_cast<double>(n);
}

namespace {

void ci_bounds(double phat, uint64_t n, double* lo, double* hi) {
  if (n == 0) {
    *lo = 0.0;
    *hi = 0.0;
    return;
  }
  const double half = 1.96 * std::sqrt(phat * (1.0 - phat) / static_cast<double>(n));
  *lo = std::max(0.0, phat - half);
  *hi = std::min(1.0, phat + half);
}

}  // namespace

double TrialResult::ber_ci_low() const {
  double lo, hi;
  ci_bounds(post_fec_ber(), measured_bits(), &lo, &hi);
  return lo;
}

double TrialResult::ber_ci_high() const {
  double lo, hi;
  ci_bounds(post_fec_ber(), measured_bits(), &lo, &hi);
  return hi;
}

TrialResult run_stream(const SimConfig& config) {
  StaircaseParams params = config.params;
  params.validate();
  if (!params.code) {
    raise(Err::kConfig, "run_stream: simulation requires a component code");
  }
  if (!(config.p >= 0.0 && config.p < 0.5)) {
    raise(Err::kConfig, "run_stream: p must be in [0, 0.5)");
  }
  if (config.stop.max_blocks == 0) raise(Err::kConfig, "run_stream: max_blocks must be >= 1");

  const auto& code = params.code;
  const int a = params.a();
  const int W = params.W;

  TrialResult r;
  r.decoder = config.decoder;
  r.nu = code->field().nu();
  r.t = code->t();
  r.a = a;
  r.W = W;
  r.ell = params.ell;
  r.T = params.T;
  r.t_eff_last = params.t_eff_last;
  r.p = config.p;
  r.eb_n0_db = eb_n0_from_crossover(config.p, code->staircase_rate());
  r.seed = config.seed;

  Xoshiro256StarStar data_rng(derive_seed(config.seed, 0));
  Xoshiro256StarStar noise_rng(derive_seed(config.seed, 1));

  Window win(code, W);
  GenieContext genie(code, W);
  StaircaseEncoder enc(code);
  BitVec data(enc.data_bits_per_block());

  std::unique_ptr<ConventionalDecoder> conv;
  std::unique_ptr<AnchorDecoder> anc;
  switch (config.decoder) {
    case DecoderKind::kConventional:
      conv = std::make_unique<ConventionalDecoder>(params, /*genie_gated=*/false);
      conv->attach_genie(&genie);
      break;
    case DecoderKind::kGenie:
      conv = std::make_unique<ConventionalDecoder>(params, /*genie_gated=*/true);
      conv->attach_genie(&genie);
      break;
    case DecoderKind::kAnchor:
      anc = std::make_unique<AnchorDecoder>(params);
      anc->attach_genie(&genie);
      break;
  }

  TrialStats& st = r.stats;
  std::vector<uint64_t> noise_ring(static_cast<size_t>(W), 0);
  const uint64_t warmup_blocks = static_cast<uint64_t>(W);
  uint64_t real_emitted = 0;

  for (uint64_t step = 1;; ++step) {
    BitMatrix tx;
    if (config.all_zero_fast) {
      tx = BitMatrix(a);
    } else {
      fill_random(data, data_rng);
      tx = enc.encode_next(data);
    }
    BitMatrix rx = tx;
    transmit(rx, config.p, noise_rng);
    const uint64_t noise = static_cast<uint64_t>(rx.diff_count(tx));

    BitMatrix emitted_rx = win.shift(std::move(rx));
    BitMatrix emitted_tx = genie.shift(std::move(tx));
    const uint64_t emitted_noise = noise_ring[0];
    for (int b = 0; b + 1 < W; ++b) noise_ring[static_cast<size_t>(b)] = noise_ring[static_cast<size_t>(b) + 1];
    noise_ring[static_cast<size_t>(W) - 1] = noise;

    if (conv) {
      conv->on_shift();
      conv->decode_window(win, st.counters);
    } else {
      anc->on_shift();
      anc->decode_window(win, st.counters);
    }

    if (step <= static_cast<uint64_t>(W)) continue;  // emitted an initialization block
    ++real_emitted;
    if (real_emitted <= warmup_blocks) continue;  // warm-up: transient excluded

    ++st.blocks_emitted;
    st.pre_fec_bit_errors += emitted_noise;
    const uint64_t post = static_cast<uint64_t>(emitted_rx.diff_count(emitted_tx));
    st.post_fec_bit_errors += post;
    if (post != 0) ++st.block_errors;
    if (st.post_fec_bit_errors >= config.stop.min_bit_errors) break;
    if (st.blocks_emitted >= config.stop.max_blocks) break;
  }
  return r;
}

std::vector<TrialResult> run_sweep(const SweepConfig& config) {
  StaircaseParams params = config.params;
  params.validate();
  for (double p : config.ps) {
    if (!(p >= 0.0 && p < 0.5)) raise(Err::kConfig, "run_sweep: every p must be in [0, 0.5)");
  }
  if (config.decoders.empty()) raise(Err::kConfig, "run_sweep: no decoders selected");

  const size_t rows = config.ps.size() * config.decoders.size();
  std::vector<TrialResult> results(rows);
  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= rows) return;
      try {
        SimConfig sim;
        sim.params = params;
        sim.decoder = config.decoders[idx % config.decoders.size()];
        sim.p = config.ps[idx / config.decoders.size()];
        sim.seed = derive_seed(config.master_seed, static_cast<uint64_t>(idx));
        sim.stop = config.stop;
        sim.all_zero_fast = config.all_zero_fast;
        results[idx] = run_stream(sim);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const size_t want = static_cast<size_t>(std::max(config.threads, 1));
  const size_t nthreads = std::min(want, rows);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

std::string csv_header() {
  return "decoder,nu,t,a,W,ell,T,t_eff_last,p,eb_n0_db,seed,blocks,pre_fec_ber,"
         "post_fec_ber,ber_ci_low,ber_ci_high,corrections,miscorrections,freezes,"
         "backtracks,failures";
}

std::string csv_row(const TrialResult& r) {
  std::string out;
  out += decoder_name(r.decoder);
  out += ',';
  out += std::to_string(r.nu) + ',' + std::to_string(r.t) + ',' + std::to_string(r.a) + ',' +
         std::to_string(r.W) + ',' + std::to_string(r.ell) + ',' + std::to_string(r.T) + ',' +
         std::to_string(r.t_eff_last) + ',';
  out += fmt_g(r.p) + ',' + fmt_g(r.eb_n0_db) + ',';
  out += std::to_string(r.seed) + ',' + std::to_string(r.stats.blocks_emitted) + ',';
  out += fmt_g(r.pre_fec_ber()) + ',' + fmt_g(r.post_fec_ber()) + ',' + fmt_g(r.ber_ci_low()) +
         ',' + fmt_g(r.ber_ci_high()) + ',';
  out += std::to_string(r.stats.counters.corrections) + ',' +
         std::to_string(r.stats.counters.miscorrections) + ',' +
         std::to_string(r.stats.counters.freezes) + ',' +
         std::to_string(r.stats.counters.backtracks) + ',' +
         std::to_string(r.stats.counters.failures);
  return out;
}

std::string json_rows(const std::vector<TrialResult>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TrialResult& r : rows) {
    nlohmann::json j;
    j["decoder"] = decoder_name(r.decoder);
    j["nu"] = r.nu;
    j["t"] = r.t;
    j["a"] = r.a;
    j["W"] = r.W;
    j["ell"] = r.ell;
    j["T"] = r.T;
    j["t_eff_last"] = r.t_eff_last;
    j["p"] = r.p;
    if (std::isinf(r.eb_n0_db)) {
      j["eb_n0_db"] = nullptr;
    } else {
      j["eb_n0_db"] = r.eb_n0_db;
    }
    j["seed"] = r.seed;
    j["blocks"] = r.stats.blocks_emitted;
    j["pre_fec_ber"] = r.pre_fec_ber();
    j["post_fec_ber"] = r.post_fec_ber();
    j["ber_ci_low"] = r.ber_ci_low();
    j["ber_ci_high"] = r.ber_ci_high();
    j["corrections"] = r.stats.counters.corrections;
    j["miscorrections"] = r.stats.counters.miscorrections;
    j["freezes"] = r.stats.counters.freezes;
    j["backtracks"] = r.stats.counters.backtracks;
    j["failures"] = r.stats.counters.failures;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace scfec
