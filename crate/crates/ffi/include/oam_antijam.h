#ifndef OAM_ANTIJAM_H
#define OAM_ANTIJAM_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OamStatus {
  OAM_STATUS_OK = 0,
  OAM_STATUS_NULL_POINTER = 1,
  OAM_STATUS_INVALID_CONFIG = 2,
  OAM_STATUS_INVALID_INPUT = 3,
  OAM_STATUS_DOMAIN = 4,
  OAM_STATUS_INDEX = 5,
  OAM_STATUS_SHAPE = 6,
  OAM_STATUS_CALIBRATION = 7,
  OAM_STATUS_NUMERIC = 8,
  OAM_STATUS_PARSE = 9,
  OAM_STATUS_IO = 10,
  OAM_STATUS_PANIC = 11,
} OamStatus;

typedef enum OamScheme {
  OAM_SCHEME_PROPOSED = 0,
  OAM_SCHEME_BASELINE = 1,
} OamScheme;

/**
 * Scenario handle: link configuration, sweep axes and settings.
 */
typedef struct OamConfig OamConfig;

/**
 * Sweep results handle.
 */
typedef struct OamSweep OamSweep;

/**
 * One row of a sweep, mirroring the CSV columns plus the SE standard error.
 */
typedef struct OamSweepRow {
  enum OamScheme scheme;
  double snr_db;
  uint32_t n_elements;
  uint32_t n_jammed;
  double se_bits_per_hz;
  double se_std_error;
  double p_j;
  double p_u;
  double p_c;
  double ber;
  uint64_t trials;
  uint64_t seed;
} OamSweepRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *oam_last_error(void);

/**
 * Reference configuration (empty scenario).
 */
enum OamStatus oam_config_default(struct OamConfig **out);

/**
 * Parses a scenario from NUL-terminated TOML text.
 */
enum OamStatus oam_config_from_toml(const char *text, struct OamConfig **out);

void oam_config_free(struct OamConfig *config);

enum OamStatus oam_config_set_seed(struct OamConfig *config, uint64_t seed);

enum OamStatus oam_config_set_trials(struct OamConfig *config, uint64_t trials);

/**
 * Closed-form channel gain of mode `l` for the configured link.
 */
enum OamStatus oam_mode_channel_gain(const struct OamConfig *config,
                                     int64_t l,
                                     double *re,
                                     double *im);

/**
 * Runs the configured sweep. Blocks until every grid point is done.
 */
enum OamStatus oam_run_sweep(const struct OamConfig *config, struct OamSweep **out);

/**
 * Number of rows; 0 for NULL.
 */
size_t oam_sweep_len(const struct OamSweep *sweep);

enum OamStatus oam_sweep_get(const struct OamSweep *sweep, size_t index, struct OamSweepRow *out);

/**
 * CSV text of the sweep; release with [`oam_string_free`].
 */
enum OamStatus oam_sweep_to_csv(const struct OamSweep *sweep, char **out);

enum OamStatus oam_sweep_write_csv(const struct OamSweep *sweep, const char *path);

void oam_sweep_free(struct OamSweep *sweep);

void oam_string_free(char *s);

enum OamStatus oam_bessel_j(int64_t order, double x, double *out);

enum OamStatus oam_gamma_cdf(double x, uint32_t shape, double scale, double *out);

enum OamStatus oam_chi_square_cdf(double x, uint32_t dof, double *out);

/**
 * Analytic probabilities that a mode with per-sample variance `variance`
 * is flagged jammed / unjammed at threshold `energy_threshold` over `k` samples.
 */
enum OamStatus oam_detection_probabilities(double energy_threshold,
                                           uint32_t k,
                                           double variance,
                                           double *p_jammed,
                                           double *p_unjammed);

/**
 * Energy threshold from `len` preamble symbol energies and their known bits
 * (per-class mean estimates).
 */
enum OamStatus oam_calibrate_threshold(const double *energies,
                                       const uint8_t *bits,
                                       size_t len,
                                       uint32_t k,
                                       double *q_th);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OAM_ANTIJAM_H */
