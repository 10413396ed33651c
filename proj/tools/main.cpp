// staircase: command-line front end for the staircase-code FEC library.
//
// Subcommands:
//   code-info  print component-code and staircase parameters
//   simulate   run one Monte-Carlo stream and emit one result row
//   sweep      run a list of channel points x decoders, one row each
//   selftest   run the library's built-in consistency suites
//
// Exit codes: 0 success, 2 configuration/usage error, 3 runtime or
// self-test failure.
//
// Precedence (highest first): explicit flags, config-file values
// (--config, flat key=value lines named after the CSV columns), the
// STAIRCASE_SEED environment variable (seed only), --preset values,
// built-in defaults.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "staircase_fec.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_for(scf_status s) {
  switch (s) {
    case SCF_OK:
      return kExitOk;
    case SCF_ERR_IO:
    case SCF_ERR_INTERNAL:
    case SCF_ERR_SELFTEST_FAILED:
      return kExitRuntime;
    default:
      return kExitConfig;
  }
}

// Prints a diagnostic for a failing library call and returns its exit code.
int report(scf_status s, const char* what) {
  std::fprintf(stderr, "error: %s: %s", what, scf_status_message(s));
  const char* detail = scf_last_error();
  if (detail != nullptr && detail[0] != '\0') std::fprintf(stderr, " (%s)", detail);
  std::fprintf(stderr, "\n");
  return exit_for(s);
}

// Two-call pattern around a string-producing scf_* function. On return,
// *status holds the final call's status and the string holds its output.
std::string fetch_string(const std::function<scf_status(char*, size_t, size_t*)>& fn,
                         scf_status* status) {
  size_t needed = 0;
  scf_status s = fn(nullptr, 0, &needed);
  if (s != SCF_ERR_BUFFER_TOO_SMALL && s != SCF_OK) {
    *status = s;
    return std::string();
  }
  std::vector<char> buf(needed > 0 ? needed : 1, '\0');
  s = fn(buf.data(), buf.size(), &needed);
  *status = s;
  return std::string(buf.data());
}

bool parse_poly(const std::string& text, uint32_t* out) {
  if (text.empty()) {
    *out = 0;
    return true;
  }
  errno = 0;
  char* end = nullptr;
  unsigned long v = std::strtoul(text.c_str(), &end, 0);  // accepts 0x... and decimal
  if (errno != 0 || end == nullptr || *end != '\0' || v > 0xFFFFFFFFul) return false;
  *out = static_cast<uint32_t>(v);
  return true;
}

bool decoder_id_from_name(const std::string& name, int* out) {
  if (name == "conventional") {
    *out = SCF_DECODER_CONVENTIONAL;
  } else if (name == "genie") {
    *out = SCF_DECODER_GENIE;
  } else if (name == "anchor") {
    *out = SCF_DECODER_ANCHOR;
  } else {
    return false;
  }
  return true;
}

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return kExitOk;
  }
  std::FILE* f = std::fopen(out_path.c_str(), "wb");
  if (f == nullptr) {
    std::fprintf(stderr, "error: cannot open %s for writing\n", out_path.c_str());
    return kExitRuntime;
  }
  const size_t written = std::fwrite(text.data(), 1, text.size(), f);
  const bool ok = (written == text.size()) && (std::fclose(f) == 0);
  if (!ok) {
    std::fprintf(stderr, "error: short write to %s\n", out_path.c_str());
    return kExitRuntime;
  }
  return kExitOk;
}

// Everything the simulate/sweep subcommands share.
struct RunFlags {
  int nu = -1;
  int t = -1;
  std::string poly_text;
  int W = 8;
  int ell = 7;
  int T = 1;
  int t_eff_last = 0;  // 0 = automatic (max(1, t-1))
  int a_check = -1;
  uint64_t seed = 1;
  uint64_t min_bit_errors = 100;
  uint64_t max_blocks = 1000000;
  std::string out_path;
  std::string format = "csv";
  std::string preset;
  int threads = 0;  // 0 = hardware thread count
  bool all_zero_fast = false;

  CLI::Option* opt_nu = nullptr;
  CLI::Option* opt_t = nullptr;
  CLI::Option* opt_W = nullptr;
  CLI::Option* opt_ell = nullptr;
  CLI::Option* opt_T = nullptr;
  CLI::Option* opt_tel = nullptr;
  CLI::Option* opt_seed = nullptr;
};

void add_code_flags(CLI::App* cmd, RunFlags* f) {
  f->opt_nu = cmd->add_option("--nu", f->nu, "Field degree: component length n = 2^nu");
  f->opt_t = cmd->add_option("--t", f->t, "Designed correction radius of the component code");
  cmd->add_option("--primitive_poly,--primitive-poly", f->poly_text,
                  "Primitive polynomial as an integer, e.g. 0x11d (default: built-in for nu)");
  cmd->add_option("--a_check,--a-check", f->a_check,
                  "Fail unless the staircase block side a = n/2 equals this value");
}

void add_run_flags(CLI::App* cmd, RunFlags* f) {
  add_code_flags(cmd, f);
  f->opt_W = cmd->add_option("--W", f->W, "Window size in blocks (default 8)");
  f->opt_ell = cmd->add_option("--ell", f->ell, "Decoding iterations per window position (default 7)");
  f->opt_T = cmd->add_option("--T", f->T,
                             "Anchor conflict threshold (default 1; 2147483647 = never backtrack)");
  f->opt_tel = cmd->add_option("--t_eff_last,--t-eff-last", f->t_eff_last,
                               "Decoding radius at the newest window position, anchor decoder "
                               "only (default: max(1, t-1))");
  f->opt_seed = cmd->add_option("--seed", f->seed,
                                "Master seed (fallback: STAIRCASE_SEED, then 1)");
  cmd->add_option("--min_bit_errors,--min-bit-errors", f->min_bit_errors,
                  "Stop a stream after this many post-FEC bit errors (default 100)");
  cmd->add_option("--max_blocks,--max-blocks", f->max_blocks,
                  "Hard cap on measured blocks per stream (default 1000000)");
  cmd->add_option("--out", f->out_path, "Output file (default: stdout)");
  cmd->add_option("--format", f->format, "Output format: csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--preset", f->preset,
                  "Named parameter set; 'example1' is the reference configuration "
                  "nu=8 t=2 W=8 ell=7 T=1 t_eff_last=1 (a=128, R=0.867)")
      ->check(CLI::IsMember({"example1"}));
  cmd->add_option("--threads", f->threads,
                  "Worker threads for sweeps (default 0 = hardware parallelism)");
  cmd->add_flag("--all_zero_fast,--all-zero-fast", f->all_zero_fast,
                "Transmit all-zero blocks instead of encoding random data "
                "(same statistics by linearity; faster)");
}

// Applies preset/env fallbacks and basic validation shared by simulate/sweep.
// Returns kExitOk or an exit code.
int finalize_run_flags(RunFlags* f) {
  if (!f->preset.empty()) {  // preset fills only values not given explicitly
    if (f->opt_nu->count() == 0) f->nu = 8;
    if (f->opt_t->count() == 0) f->t = 2;
    if (f->opt_W->count() == 0) f->W = 8;
    if (f->opt_ell->count() == 0) f->ell = 7;
    if (f->opt_T->count() == 0) f->T = 1;
    if (f->opt_tel->count() == 0) f->t_eff_last = 1;
  }
  if (f->nu < 0 || f->t < 0) {
    std::fprintf(stderr, "error: --nu and --t are required (or use --preset example1)\n");
    return kExitConfig;
  }
  if (f->opt_seed->count() == 0) {
    const char* env = std::getenv("STAIRCASE_SEED");
    if (env != nullptr && env[0] != '\0') {
      errno = 0;
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 0);
      if (errno != 0 || end == nullptr || *end != '\0') {
        std::fprintf(stderr, "error: STAIRCASE_SEED is not a valid integer: %s\n", env);
        return kExitConfig;
      }
      f->seed = static_cast<uint64_t>(v);
    }
  }
  return kExitOk;
}

// Creates the component code, applies --a_check, and reports its info.
int code_info_for(const RunFlags& f, scf_code_info* info) {
  uint32_t poly = 0;
  if (!parse_poly(f.poly_text, &poly)) {
    std::fprintf(stderr, "error: --primitive_poly is not a valid integer: %s\n",
                 f.poly_text.c_str());
    return kExitConfig;
  }
  scf_code* code = nullptr;
  scf_status s = scf_code_create(f.nu, f.t, poly, &code);
  if (s != SCF_OK) return report(s, "creating component code");
  s = scf_code_get_info(code, info);
  scf_code_destroy(code);
  if (s != SCF_OK) return report(s, "querying component code");
  if (f.a_check >= 0 && info->a != f.a_check) {
    std::fprintf(stderr, "error: --a_check mismatch: expected a=%d, code has a=%d\n",
                 f.a_check, info->a);
    return kExitConfig;
  }
  return kExitOk;
}

int fill_sim_config(const RunFlags& f, int decoder, double p, scf_sim_config* cfg) {
  uint32_t poly = 0;
  if (!parse_poly(f.poly_text, &poly)) return kExitConfig;
  scf_sim_config_init(cfg);
  cfg->nu = f.nu;
  cfg->t = f.t;
  cfg->primitive_poly = poly;
  cfg->W = f.W;
  cfg->ell = f.ell;
  cfg->T = f.T;
  cfg->t_eff_last = f.t_eff_last;
  cfg->decoder = decoder;
  cfg->p = p;
  cfg->seed = f.seed;
  cfg->min_bit_errors = f.min_bit_errors;
  cfg->max_blocks = f.max_blocks;
  cfg->all_zero_fast = f.all_zero_fast ? 1 : 0;
  return kExitOk;
}

int emit_rows(const std::vector<scf_trial_result>& rows, const RunFlags& f) {
  scf_status s = SCF_OK;
  std::string text;
  if (f.format == "json") {
    text = fetch_string(
        [&](char* buf, size_t cap, size_t* needed) {
          return scf_json_rows(rows.data(), rows.size(), buf, cap, needed);
        },
        &s);
    if (s != SCF_OK) return report(s, "serializing results");
    text += '\n';
  } else {
    std::string header = fetch_string(scf_csv_header, &s);
    if (s != SCF_OK) return report(s, "serializing results");
    std::string body = fetch_string(
        [&](char* buf, size_t cap, size_t* needed) {
          return scf_csv_rows(rows.data(), rows.size(), buf, cap, needed);
        },
        &s);
    if (s != SCF_OK) return report(s, "serializing results");
    text = header + "\n" + body;
  }
  return write_output(text, f.out_path);
}

int run_code_info(const RunFlags& f) {
  scf_code_info info{};
  int rc = code_info_for(f, &info);
  if (rc != kExitOk) return rc;
  std::printf("nu = %d\n", info.nu);
  std::printf("t = %d\n", info.t);
  std::printf("primitive_poly = 0x%x\n", info.primitive_poly);
  std::printf("n = %d\n", info.n);
  std::printf("k = %d\n", info.k);
  std::printf("a = %d\n", info.a);
  std::printf("R = %.10g\n", info.staircase_rate);
  std::printf("d_min = %d\n", info.d_min);
  std::printf("generator_degree = %d\n", info.generator_degree);
  return kExitOk;
}

int run_simulate(RunFlags& f, const std::string& decoder_name, double p, double eb_n0_db,
                 bool have_p, bool have_ebn0) {
  int rc = finalize_run_flags(&f);
  if (rc != kExitOk) return rc;
  scf_code_info info{};
  rc = code_info_for(f, &info);
  if (rc != kExitOk) return rc;

  if (have_p == have_ebn0) {  // both or neither
    std::fprintf(stderr, "error: give exactly one of --p or --eb_n0_db\n");
    return kExitConfig;
  }
  if (have_ebn0) {
    scf_status s = scf_crossover_from_eb_n0(eb_n0_db, info.staircase_rate, &p);
    if (s != SCF_OK) return report(s, "converting Eb/N0 to a crossover probability");
  }
  int decoder = 0;
  if (!decoder_id_from_name(decoder_name, &decoder)) {
    std::fprintf(stderr, "error: unknown decoder '%s' (conventional|genie|anchor)\n",
                 decoder_name.c_str());
    return kExitConfig;
  }

  scf_sim_config cfg;
  rc = fill_sim_config(f, decoder, p, &cfg);
  if (rc != kExitOk) return rc;
  scf_trial_result row{};
  scf_status s = scf_simulate(&cfg, &row);
  if (s != SCF_OK) return report(s, "running simulation");
  return emit_rows({row}, f);
}

int run_sweep_cmd(RunFlags& f, const std::vector<double>& p_list,
                  const std::vector<std::string>& decoder_names) {
  int rc = finalize_run_flags(&f);
  if (rc != kExitOk) return rc;
  scf_code_info info{};
  rc = code_info_for(f, &info);
  if (rc != kExitOk) return rc;

  if (p_list.empty()) {
    std::fprintf(stderr, "error: --p_list is required for sweep\n");
    return kExitConfig;
  }
  std::vector<std::string> names = decoder_names;
  if (names.empty()) names = {"conventional", "genie", "anchor"};
  std::vector<int> decoders;
  for (const std::string& name : names) {
    int id = 0;
    if (!decoder_id_from_name(name, &id)) {
      std::fprintf(stderr, "error: unknown decoder '%s' (conventional|genie|anchor)\n",
                   name.c_str());
      return kExitConfig;
    }
    decoders.push_back(id);
  }

  scf_sim_config base;
  rc = fill_sim_config(f, decoders[0], 0.0, &base);
  if (rc != kExitOk) return rc;
  std::vector<scf_trial_result> rows(p_list.size() * decoders.size());
  scf_status s = scf_sweep(&base, p_list.data(), p_list.size(), decoders.data(),
                           decoders.size(), f.threads, rows.data());
  if (s != SCF_OK) return report(s, "running sweep");
  return emit_rows(rows, f);
}

int run_selftest_cmd(bool corrupt_generator) {
  scf_status s = SCF_OK;
  std::string detail = fetch_string(
      [&](char* buf, size_t cap, size_t* needed) {
        return scf_selftest(corrupt_generator ? 1 : 0, buf, cap, needed);
      },
      &s);
  std::fputs(detail.c_str(), stdout);
  if (s == SCF_OK) {
    std::printf("self-test passed\n");
    return kExitOk;
  }
  if (s == SCF_ERR_SELFTEST_FAILED) {
    std::printf("self-test FAILED\n");
    return kExitRuntime;
  }
  return report(s, "running self-test");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "staircase: hard-decision staircase-code FEC simulator\n"
      "Component codes are extended BCH codes (n = 2^nu, d_min = 2t+2); three\n"
      "sliding-window decoders are available: conventional, genie (idealized,\n"
      "miscorrection-free gating) and anchor (miscorrection-avoiding).\n"
      "Flags override config-file values; --preset fills only unset values.\n"
      "Library version: " +
      std::string(scf_version())};
  app.require_subcommand(1);

  RunFlags info_flags;
  CLI::App* info_cmd =
      app.add_subcommand("code-info", "Print component-code and staircase parameters");
  add_code_flags(info_cmd, &info_flags);
  info_flags.opt_nu->required();
  info_flags.opt_t->required();
  info_cmd->set_config("--config", "", "Flat key=value config file");

  RunFlags sim_flags;
  std::string sim_decoder = "conventional";
  double sim_p = 0.0;
  double sim_ebn0 = 0.0;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Run one Monte-Carlo stream and emit one result row");
  add_run_flags(sim_cmd, &sim_flags);
  sim_cmd->add_option("--decoder", sim_decoder,
                      "Decoder: conventional, genie or anchor (default conventional)");
  CLI::Option* opt_p = sim_cmd->add_option("--p", sim_p, "BSC crossover probability");
  CLI::Option* opt_ebn0 = sim_cmd->add_option("--eb_n0_db,--eb-n0-db", sim_ebn0,
                                              "Channel point as Eb/N0 in dB "
                                              "(converted using the staircase rate)");
  opt_p->excludes(opt_ebn0);
  opt_ebn0->excludes(opt_p);
  sim_cmd->set_config("--config", "", "Flat key=value config file");

  RunFlags sweep_flags;
  std::vector<double> sweep_ps;
  std::vector<std::string> sweep_decoders;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Run a list of channel points across decoders, one row per pair");
  add_run_flags(sweep_cmd, &sweep_flags);
  sweep_cmd
      ->add_option("--p_list,--p-list", sweep_ps,
                   "Comma-separated BSC crossover probabilities")
      ->delimiter(',');
  sweep_cmd
      ->add_option("--decoders", sweep_decoders,
                   "Comma-separated decoders (default: conventional,genie,anchor)")
      ->delimiter(',');
  sweep_cmd->set_config("--config", "", "Flat key=value config file");

  bool corrupt_generator = false;
  CLI::App* self_cmd =
      app.add_subcommand("selftest", "Run the library's built-in consistency suites");
  self_cmd->add_flag("--corrupt-generator,--corrupt_generator", corrupt_generator,
                     "Negative control: deliberately break the component code; "
                     "the self-test must then fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (*info_cmd) return run_code_info(info_flags);
  if (*sim_cmd) {
    return run_simulate(sim_flags, sim_decoder, sim_p, sim_ebn0, opt_p->count() > 0,
                        opt_ebn0->count() > 0);
  }
  if (*sweep_cmd) return run_sweep_cmd(sweep_flags, sweep_ps, sweep_decoders);
  if (*self_cmd) return run_selftest_cmd(corrupt_generator);
  return kExitConfig;
}
