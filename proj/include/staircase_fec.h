/* staircase_fec: C API for the staircase-code FEC library.
 *
 * Hard-decision staircase codes over extended BCH component codes, three
 * sliding-window decoders (conventional, genie-gated, anchor-based), and a
 * deterministic Monte-Carlo BER harness.
 *
 * Conventions
 *   - Every function that can fail returns scf_status; SCF_OK == 0.
 *   - scf_last_error() returns a thread-local message for the most recent
 *     failing call on this thread.
 *   - String outputs use a two-call pattern: pass buf == NULL (or a too-small
 *     cap) to receive the required size (including the NUL terminator) in
 *     *needed and SCF_ERR_BUFFER_TOO_SMALL; call again with a large-enough
 *     buffer. On success *needed (when non-NULL) is set to the bytes written
 *     including the NUL.
 *   - Bit buffers pack bit p into byte p/8 at mask (1 << (p%8)).
 *   - Codeword bit positions in decode results are 1-based (1..n).
 */
#ifndef STAIRCASE_FEC_H
#define STAIRCASE_FEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SCF_API __declspec(dllexport)
#else
#define SCF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum scf_status {
  SCF_OK = 0,
  SCF_ERR_INVALID_ARGUMENT = 1,
  SCF_ERR_NON_PRIMITIVE_POLYNOMIAL = 2,
  SCF_ERR_INVALID_PARAMETERS = 3,
  SCF_ERR_LENGTH_MISMATCH = 4,
  SCF_ERR_OUT_OF_RANGE = 5,
  SCF_ERR_DIVISION_BY_ZERO = 6,
  SCF_ERR_CONFIG = 7,
  SCF_ERR_IO = 8,
  SCF_ERR_INTERNAL = 9,
  SCF_ERR_BUFFER_TOO_SMALL = 10,
  SCF_ERR_SELFTEST_FAILED = 11
} scf_status;

/* Library semantic version, e.g. "1.0.0". Static storage. */
SCF_API const char* scf_version(void);

/* Static name of a status code, e.g. "invalid argument". */
SCF_API const char* scf_status_message(scf_status status);

/* Thread-local message describing this thread's most recent failure ("" if
 * none). Valid until the next failing call on the same thread. */
SCF_API const char* scf_last_error(void);

/* ---------------------------------------------------------------- codes -- */

/* Extended BCH component code: binary primitive BCH of length 2^nu - 1 with
 * designed correction radius t, extended by one overall parity bit. */
typedef struct scf_code scf_code;

/* primitive_poly == 0 selects the default primitive polynomial for nu
 * (nu in 3..12). Destroy with scf_code_destroy. */
SCF_API scf_status scf_code_create(int nu, int t, uint32_t primitive_poly,
                                   scf_code** out);
SCF_API void scf_code_destroy(scf_code* code);

typedef struct scf_code_info {
  int nu;
  int t;
  int n;     /* codeword length, 2^nu */
  int k;     /* message length */
  int a;     /* staircase block side, n/2 */
  int d_min; /* guaranteed minimum distance, 2t + 2 */
  int generator_degree;
  uint32_t primitive_poly;
  double staircase_rate; /* 2k/n - 1 */
} scf_code_info;

SCF_API scf_status scf_code_get_info(const scf_code* code, scf_code_info* info);

/* message: k bits, codeword: n bits (see bit packing above). */
SCF_API scf_status scf_encode(const scf_code* code, const uint8_t* message,
                              uint8_t* codeword);

/* Bounded-distance decode at radius t_eff (1..t). On SCF_OK: *corrected is
 * 1 when a codeword lies within t_eff flips (its 1-based flip positions are
 * written to locations, count in *num_locations) and 0 on decode failure.
 * locations_cap must be >= t_eff + 1. */
SCF_API scf_status scf_decode_bdd(const scf_code* code, const uint8_t* word,
                                  int t_eff, int* corrected, uint16_t* locations,
                                  size_t locations_cap, size_t* num_locations);

/* -------------------------------------------------------------- channel -- */

/* BSC crossover probability for a given Eb/N0 (dB) at code rate `rate`:
 * p = Q(sqrt(2 * rate * 10^(db/10))). */
SCF_API scf_status scf_crossover_from_eb_n0(double eb_n0_db, double rate, double* p);

/* Inverse of the above; p == 0 yields +infinity. */
SCF_API scf_status scf_eb_n0_from_crossover(double p, double rate, double* eb_n0_db);

/* ----------------------------------------------------------- simulation -- */

typedef enum scf_decoder {
  SCF_DECODER_CONVENTIONAL = 0,
  SCF_DECODER_GENIE = 1,
  SCF_DECODER_ANCHOR = 2
} scf_decoder;

typedef struct scf_sim_config {
  int nu;
  int t;
  uint32_t primitive_poly; /* 0 = default for nu */
  int W;                   /* window size in blocks */
  int ell;                 /* decoding iterations per window position */
  int T;                   /* anchor conflict threshold; INT_MAX = never backtrack */
  int t_eff_last;          /* radius for the newest window position (anchor
                            * decoder only); 0 = default max(1, t-1) */
  int decoder;             /* scf_decoder */
  double p;                /* BSC crossover probability, [0, 0.5) */
  uint64_t seed;
  uint64_t min_bit_errors; /* stop once this many post-FEC bit errors seen */
  uint64_t max_blocks;     /* hard cap on measured blocks */
  int all_zero_fast;       /* nonzero: transmit all-zero blocks (statistics
                            * unchanged by linearity; encoder bypassed) */
} scf_sim_config;

/* Fills reference defaults: nu=8 t=2 W=8 ell=7 T=1 t_eff_last=0(auto)
 * decoder=conventional p=0 seed=1 min_bit_errors=100 max_blocks=1000000. */
SCF_API void scf_sim_config_init(scf_sim_config* config);

typedef struct scf_trial_result {
  int decoder;
  int nu, t, a, W, ell, T, t_eff_last;
  double p;
  double eb_n0_db; /* +infinity when p == 0 */
  uint64_t seed;
  uint64_t blocks; /* measured (post-warm-up) blocks */
  uint64_t pre_fec_bit_errors;
  uint64_t post_fec_bit_errors;
  uint64_t block_errors;
  double pre_fec_ber;
  double post_fec_ber;
  double ber_ci_low;  /* 95% CI on post-FEC BER, normal approximation */
  double ber_ci_high;
  uint64_t corrections;
  uint64_t miscorrections;
  uint64_t freezes;
  uint64_t backtracks;
  uint64_t failures;
} scf_trial_result;

/* Runs one stream; fully determined by the config (including seed). */
SCF_API scf_status scf_simulate(const scf_sim_config* config, scf_trial_result* result);

/* Runs every (channel point, decoder) pair from `base` (its p/decoder fields
 * are ignored); row r = point p_idx * n_decoders + d_idx in `results`, which
 * must hold n_points * n_decoders entries. Row seeds derive from base->seed
 * and the row index, so output is identical for every `threads` value
 * (threads == 0 selects the hardware thread count). */
SCF_API scf_status scf_sweep(const scf_sim_config* base, const double* ps,
                             size_t n_points, const int* decoders,
                             size_t n_decoders, int threads,
                             scf_trial_result* results);

/* --------------------------------------------------------- serialization -- */

/* CSV column header (no trailing newline). */
SCF_API scf_status scf_csv_header(char* buf, size_t cap, size_t* needed);

/* CSV rows, one line per result, each newline-terminated, no header. */
SCF_API scf_status scf_csv_rows(const scf_trial_result* rows, size_t n, char* buf,
                                size_t cap, size_t* needed);

/* JSON array of row objects mirroring the CSV columns (eb_n0_db is null
 * where the CSV prints inf). */
SCF_API scf_status scf_json_rows(const scf_trial_result* rows, size_t n, char* buf,
                                 size_t cap, size_t* needed);

/* ------------------------------------------------------------- selftest -- */

/* Runs the built-in consistency suites (field arithmetic, fast-vs-reference
 * decoder comparison, scripted decoder scenarios, stall pattern, noiseless
 * stream). Returns SCF_OK on pass, SCF_ERR_SELFTEST_FAILED on failure.
 * detail (optional, two-call pattern) receives a line-per-suite report.
 * corrupt_generator != 0 deliberately breaks the component code used by the
 * comparison suites; the call must then report failure (negative control
 * proving the suites are not vacuous). */
SCF_API scf_status scf_selftest(int corrupt_generator, char* detail, size_t cap,
                                size_t* needed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STAIRCASE_FEC_H */
