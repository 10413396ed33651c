#include "staircase_fec.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "scfec/bch.hpp"
#include "scfec/channel.hpp"
#include "scfec/error.hpp"
#include "scfec/gf.hpp"
#include "scfec/selftest.hpp"
#include "scfec/sim.hpp"

struct scf_code {
  std::shared_ptr<const scfec::ExtendedBchCode> code;
};

namespace {

thread_local std::string g_last_error;

scf_status map_err(scfec::Err code) {
  using scfec::Err;
  switch (code) {
    case Err::kInvalidArgument:
      return SCF_ERR_INVALID_ARGUMENT;
    case Err::kNonPrimitivePolynomial:
      return SCF_ERR_NON_PRIMITIVE_POLYNOMIAL;
    case Err::kInvalidParameters:
      return SCF_ERR_INVALID_PARAMETERS;
    case Err::kLengthMismatch:
      return SCF_ERR_LENGTH_MISMATCH;
    case Err::kOutOfRange:
      return SCF_ERR_OUT_OF_RANGE;
    case Err::kDivisionByZero:
      return SCF_ERR_DIVISION_BY_ZERO;
    case Err::kConfig:
      return SCF_ERR_CONFIG;
    case Err::kIo:
      return SCF_ERR_IO;
    case Err::kInternal:
      return SCF_ERR_INTERNAL;
  }
  return SCF_ERR_INTERNAL;
}

template <typename Fn>
scf_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const scfec::Error& e) {
    g_last_error = e.what();
    return map_err(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SCF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SCF_ERR_INTERNAL;
  }
}

scf_status arg_error(const char* what) {
  g_last_error = what;
  return SCF_ERR_INVALID_ARGUMENT;
}

scf_status fill_buffer(const std::string& s, char* buf, size_t cap, size_t* needed) {
  const size_t want = s.size() + 1;
  if (needed) *needed = want;
  if (buf == nullptr || cap < want) {
    g_last_error = "buffer too small";
    return SCF_ERR_BUFFER_TOO_SMALL;
  }
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  return SCF_OK;
}

scfec::DecoderKind kind_from_int(int d) {
  switch (d) {
    case SCF_DECODER_CONVENTIONAL:
      return scfec::DecoderKind::kConventional;
    case SCF_DECODER_GENIE:
      return scfec::DecoderKind::kGenie;
    case SCF_DECODER_ANCHOR:
      return scfec::DecoderKind::kAnchor;
    default:
      scfec::raise(scfec::Err::kInvalidArgument, "unknown decoder id");
  }
}

int int_from_kind(scfec::DecoderKind k) {
  switch (k) {
    case scfec::DecoderKind::kConventional:
      return SCF_DECODER_CONVENTIONAL;
    case scfec::DecoderKind::kGenie:
      return SCF_DECODER_GENIE;
    case scfec::DecoderKind::kAnchor:
      return SCF_DECODER_ANCHOR;
  }
  return SCF_DECODER_CONVENTIONAL;
}

scfec::SimConfig sim_config_from(const scf_sim_config& c) {
  scfec::Field field = c.primitive_poly != 0 ? scfec::Field(c.nu, c.primitive_poly)
                                             : scfec::Field(c.nu);
  scfec::SimConfig sc;
  sc.params.code = std::make_shared<const scfec::ExtendedBchCode>(field, c.t);
  sc.params.W = c.W;
  sc.params.ell = c.ell;
  sc.params.T = c.T;
  sc.params.t_eff_last = c.t_eff_last;
  sc.decoder = kind_from_int(c.decoder);
  sc.p = c.p;
  sc.seed = c.seed;
  sc.stop.min_bit_errors = c.min_bit_errors;
  sc.stop.max_blocks = c.max_blocks;
  sc.all_zero_fast = c.all_zero_fast != 0;
  return sc;
}

scf_trial_result result_to_c(const scfec::TrialResult& r) {
  scf_trial_result out{};
  out.decoder = int_from_kind(r.decoder);
  out.nu = r.nu;
  out.t = r.t;
  out.a = r.a;
  out.W = r.W;
  out.ell = r.ell;
  out.T = r.T;
  out.t_eff_last = r.t_eff_last;
  out.p = r.p;
  out.eb_n0_db = r.eb_n0_db;
  out.seed = r.seed;
  out.blocks = r.stats.blocks_emitted;
  out.pre_fec_bit_errors = r.stats.pre_fec_bit_errors;
  out.post_fec_bit_errors = r.stats.post_fec_bit_errors;
  out.block_errors = r.stats.block_errors;
  out.pre_fec_ber = r.pre_fec_ber();
  out.post_fec_ber = r.post_fec_ber();
  out.ber_ci_low = r.ber_ci_low();
  out.ber_ci_high = r.ber_ci_high();
  out.corrections = r.stats.counters.corrections;
  out.miscorrections = r.stats.counters.miscorrections;
  out.freezes = r.stats.counters.freezes;
  out.backtracks = r.stats.counters.backtracks;
  out.failures = r.stats.counters.failures;
  return out;
}

scfec::TrialResult result_from_c(const scf_trial_result& c) {
  scfec::TrialResult r;
  r.decoder = kind_from_int(c.decoder);
  r.nu = c.nu;
  r.t = c.t;
  r.a = c.a;
  r.W = c.W;
  r.ell = c.ell;
  r.T = c.T;
  r.t_eff_last = c.t_eff_last;
  r.p = c.p;
  r.eb_n0_db = c.eb_n0_db;
  r.seed = c.seed;
  r.stats.blocks_emitted = c.blocks;
  r.stats.pre_fec_bit_errors = c.pre_fec_bit_errors;
  r.stats.post_fec_bit_errors = c.post_fec_bit_errors;
  r.stats.block_errors = c.block_errors;
  r.stats.counters.corrections = c.corrections;
  r.stats.counters.miscorrections = c.miscorrections;
  r.stats.counters.freezes = c.freezes;
  r.stats.counters.backtracks = c.backtracks;
  r.stats.counters.failures = c.failures;
  return r;
}

void unpack_bits(const uint8_t* bytes, scfec::BitVec& out) {
  for (int p = 0; p < out.size(); ++p) out.set(p, (bytes[p >> 3] >> (p & 7)) & 1);
}

void pack_bits(const scfec::BitVec& in, uint8_t* bytes) {
  const int n = in.size();
  std::memset(bytes, 0, static_cast<size_t>((n + 7) / 8));
  for (int p = 0; p < n; ++p) {
    if (in.get(p)) bytes[p >> 3] |= static_cast<uint8_t>(1u << (p & 7));
  }
}

}  // namespace

extern "C" {

const char* scf_version(void) { return "1.0.0"; }

const char* scf_status_message(scf_status status) {
  switch (status) {
    case SCF_OK:
      return "ok";
    case SCF_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case SCF_ERR_NON_PRIMITIVE_POLYNOMIAL:
      return "non-primitive polynomial";
    case SCF_ERR_INVALID_PARAMETERS:
      return "invalid parameters";
    case SCF_ERR_LENGTH_MISMATCH:
      return "length mismatch";
    case SCF_ERR_OUT_OF_RANGE:
      return "out of range";
    case SCF_ERR_DIVISION_BY_ZERO:
      return "division by zero";
    case SCF_ERR_CONFIG:
      return "config error";
    case SCF_ERR_IO:
      return "io error";
    case SCF_ERR_INTERNAL:
      return "internal error";
    case SCF_ERR_BUFFER_TOO_SMALL:
      return "buffer too small";
    case SCF_ERR_SELFTEST_FAILED:
      return "self-test failed";
  }
  return "unknown status";
}

const char* scf_last_error(void) { return g_last_error.c_str(); }

scf_status scf_code_create(int nu, int t, uint32_t primitive_poly, scf_code** out) {
  if (out == nullptr) return arg_error("out is NULL");
  *out = nullptr;
  return guarded([&]() {
    scfec::Field field =
        primitive_poly != 0 ? scfec::Field(nu, primitive_poly) : scfec::Field(nu);
    auto handle = std::make_unique<scf_code>();
    handle->code = std::make_shared<const scfec::ExtendedBchCode>(field, t);
    *out = handle.release();
    return SCF_OK;
  });
}

void scf_code_destroy(scf_code* code) { delete code; }

scf_status scf_code_get_info(const scf_code* code, scf_code_info* info) {
  if (code == nullptr || code->code == nullptr) return arg_error("code is NULL");
  if (info == nullptr) return arg_error("info is NULL");
  const scfec::ExtendedBchCode& c = *code->code;
  info->nu = c.field().nu();
  info->t = c.t();
  info->n = c.n();
  info->k = c.k();
  info->a = c.a();
  info->d_min = c.d_min_guaranteed();
  info->generator_degree = c.generator_degree();
  info->primitive_poly = c.field().primitive_poly();
  info->staircase_rate = c.staircase_rate();
  return SCF_OK;
}

scf_status scf_encode(const scf_code* code, const uint8_t* message, uint8_t* codeword) {
  if (code == nullptr || code->code == nullptr) return arg_error("code is NULL");
  if (message == nullptr || codeword == nullptr) return arg_error("bit buffer is NULL");
  return guarded([&]() {
    const scfec::ExtendedBchCode& c = *code->code;
    scfec::BitVec msg(c.k());
    scfec::BitVec cw(c.n());
    unpack_bits(message, msg);
    c.encode(msg, cw);
    pack_bits(cw, codeword);
    return SCF_OK;
  });
}

scf_status scf_decode_bdd(const scf_code* code, const uint8_t* word, int t_eff,
                          int* corrected, uint16_t* locations, size_t locations_cap,
                          size_t* num_locations) {
  if (code == nullptr || code->code == nullptr) return arg_error("code is NULL");
  if (word == nullptr || corrected == nullptr) return arg_error("word/corrected is NULL");
  if (num_locations == nullptr) return arg_error("num_locations is NULL");
  return guarded([&]() {
    const scfec::ExtendedBchCode& c = *code->code;
    scfec::BitVec w(c.n());
    unpack_bits(word, w);
    scfec::DecodeOutcome out;
    c.decode_bdd(w, t_eff, out);
    *corrected = out.corrected ? 1 : 0;
    *num_locations = out.locations.size();
    if (!out.locations.empty()) {
      if (locations == nullptr || locations_cap < out.locations.size()) {
        g_last_error = "locations buffer too small";
        return SCF_ERR_BUFFER_TOO_SMALL;
      }
      std::memcpy(locations, out.locations.data(),
                  out.locations.size() * sizeof(uint16_t));
    }
    return SCF_OK;
  });
}

scf_status scf_crossover_from_eb_n0(double eb_n0_db, double rate, double* p) {
  if (p == nullptr) return arg_error("p is NULL");
  return guarded([&]() {
    *p = scfec::crossover_from_eb_n0(eb_n0_db, rate);
    return SCF_OK;
  });
}

scf_status scf_eb_n0_from_crossover(double p, double rate, double* eb_n0_db) {
  if (eb_n0_db == nullptr) return arg_error("eb_n0_db is NULL");
  return guarded([&]() {
    *eb_n0_db = scfec::eb_n0_from_crossover(p, rate);
    return SCF_OK;
  });
}

void scf_sim_config_init(scf_sim_config* config) {
  if (config == nullptr) return;
  *config = scf_sim_config{};
  config->nu = 8;
  config->t = 2;
  config->primitive_poly = 0;
  config->W = 8;
  config->ell = 7;
  config->T = 1;
  config->t_eff_last = 0;
  config->decoder = SCF_DECODER_CONVENTIONAL;
  config->p = 0.0;
  config->seed = 1;
  config->min_bit_errors = 100;
  config->max_blocks = 1000000;
  config->all_zero_fast = 0;
}

scf_status scf_simulate(const scf_sim_config* config, scf_trial_result* result) {
  if (config == nullptr || result == nullptr) return arg_error("config/result is NULL");
  return guarded([&]() {
    scfec::TrialResult r = scfec::run_stream(sim_config_from(*config));
    *result = result_to_c(r);
    return SCF_OK;
  });
}

scf_status scf_sweep(const scf_sim_config* base, const double* ps, size_t n_points,
                     const int* decoders, size_t n_decoders, int threads,
                     scf_trial_result* results) {
  if (base == nullptr || results == nullptr) return arg_error("base/results is NULL");
  if ((ps == nullptr && n_points > 0) || (decoders == nullptr && n_decoders > 0)) {
    return arg_error("ps/decoders is NULL");
  }
  if (n_points == 0 || n_decoders == 0) return arg_error("empty sweep");
  if (threads < 0) return arg_error("threads must be >= 0");
  return guarded([&]() {
    scfec::SimConfig one = sim_config_from(*base);
    scfec::SweepConfig sw;
    sw.params = one.params;
    sw.ps.assign(ps, ps + n_points);
    for (size_t d = 0; d < n_decoders; ++d) sw.decoders.push_back(kind_from_int(decoders[d]));
    sw.master_seed = base->seed;
    sw.stop = one.stop;
    const unsigned hw = std::thread::hardware_concurrency();
    sw.threads = threads != 0 ? threads : static_cast<int>(hw != 0 ? hw : 1);
    sw.all_zero_fast = one.all_zero_fast;
    std::vector<scfec::TrialResult> rows = scfec::run_sweep(sw);
    for (size_t r = 0; r < rows.size(); ++r) results[r] = result_to_c(rows[r]);
    return SCF_OK;
  });
}

scf_status scf_csv_header(char* buf, size_t cap, size_t* needed) {
  return fill_buffer(scfec::csv_header(), buf, cap, needed);
}

scf_status scf_csv_rows(const scf_trial_result* rows, size_t n, char* buf, size_t cap,
                        size_t* needed) {
  if (rows == nullptr && n > 0) return arg_error("rows is NULL");
  return guarded([&]() {
    std::string body;
    for (size_t r = 0; r < n; ++r) {
      body += scfec::csv_row(result_from_c(rows[r]));
      body += '\n';
    }
    return fill_buffer(body, buf, cap, needed);
  });
}

scf_status scf_json_rows(const scf_trial_result* rows, size_t n, char* buf, size_t cap,
                         size_t* needed) {
  if (rows == nullptr && n > 0) return arg_error("rows is NULL");
  return guarded([&]() {
    std::vector<scfec::TrialResult> cxx;
    cxx.reserve(n);
    for (size_t r = 0; r < n; ++r) cxx.push_back(result_from_c(rows[r]));
    return fill_buffer(scfec::json_rows(cxx), buf, cap, needed);
  });
}

scf_status scf_selftest(int corrupt_generator, char* detail, size_t cap, size_t* needed) {
  return guarded([&]() {
    scfec::SelftestOptions opt;
    opt.corrupt_generator = corrupt_generator != 0;
    scfec::SelftestReport report = scfec::run_selftest(opt);
    if (detail != nullptr || needed != nullptr) {
      scf_status s = fill_buffer(report.detail, detail, cap, needed);
      if (s != SCF_OK) return s;
    }
    if (!report.pass) {
      g_last_error = "self-test failed";
      return SCF_ERR_SELFTEST_FAILED;
    }
    return SCF_OK;
  });
}

}  // extern "C"
