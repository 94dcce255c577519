#ifndef COLD_H
#define COLD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define COLD_CD_NONE 0

#define COLD_CD_LCD1 1

#define COLD_CD_LCD2 2

#define COLD_CD_EXACT 3

#define COLD_CD_LATTICE 4

#define COLD_METHOD_BPO 0

#define COLD_METHOD_COLD 1

#define COLD_METHOD_CRAB 2

#define COLD_METHOD_COLD_CRAB 3

#define COLD_FORMAT_CSV 0

#define COLD_FORMAT_JSON 1

/*
 Result of every fallible call.
 */
typedef enum ColdStatus {
  COLD_STATUS_OK = 0,
  COLD_STATUS_NULL_POINTER = 1,
  COLD_STATUS_INVALID_ARGUMENT = 2,
  COLD_STATUS_CONFIG_ERROR = 3,
  COLD_STATUS_NUMERICAL_ERROR = 4,
  COLD_STATUS_UNSUPPORTED = 5,
  COLD_STATUS_BUFFER_TOO_SMALL = 6,
  COLD_STATUS_PANIC = 7,
} ColdStatus;

/*
 A benchmark model.
 */
typedef struct ColdModel ColdModel;

/*
 Result of a restart batch.
 */
typedef struct ColdOptimization ColdOptimization;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *cold_version(void);

/*
 Copies the calling thread's last error message into `buf` (NUL-terminated,
 truncated to `len`). Returns the full message length without the NUL, or 0
 when no error has been recorded.

 # Safety
 `buf` must be null or point to `len` writable bytes.
 */
size_t cold_last_error_message(char *buf, size_t len);

/*
 Two spins with coupling `j` and transverse field `h`.

 # Safety
 `out` must be writable.
 */
enum ColdStatus cold_model_two_spin(double j, double h, struct ColdModel **out);

/*
 Open Ising chain of `n_sites` spins.

 # Safety
 `out` must be writable.
 */
enum ColdStatus cold_model_ising(double j,
                                 double z0,
                                 double x_f,
                                 size_t n_sites,
                                 struct ColdModel **out);

/*
 Single particle on a synthetic lattice of `n_sites` sites.

 # Safety
 `out` must be writable.
 */
enum ColdStatus cold_model_lattice(double j0, double v0, size_t n_sites, struct ColdModel **out);

/*
 Hilbert-space dimension, or 0 for a null handle.

 # Safety
 `model` must be null or a live handle.
 */
size_t cold_model_dim(const struct ColdModel *model);

/*
 # Safety
 `model` must be null or a handle not yet freed.
 */
void cold_model_free(struct ColdModel *model);

/*
 Evolves over the model's ramp of duration `tau` with CD mode `cd` and the
 half-sine control coefficients `coefficients[0..n_k]` (n_k = 0 for none),
 writing the final fidelity.

 # Safety
 `model` must be a live handle, `coefficients` must hold `n_k` doubles and
 `fidelity` must be writable.
 */
enum ColdStatus cold_evolve(const struct ColdModel *model,
                            double tau,
                            uint32_t cd,
                            const double *coefficients,
                            size_t n_k,
                            double rtol,
                            double *fidelity);

/*
 Runs `restarts` seeded Powell searches for `method` with `n_k` coefficients
 in the box [−half_box, half_box]. `cap` > 0 enables the amplitude penalty.

 # Safety
 `model` must be a live handle and `out` writable.
 */
enum ColdStatus cold_optimize(const struct ColdModel *model,
                              uint32_t method_code,
                              double tau,
                              size_t n_k,
                              size_t restarts,
                              uint64_t seed,
                              double half_box,
                              double cap,
                              struct ColdOptimization **out);

/*
 Best fidelity, or NaN for a null handle.

 # Safety
 `opt` must be null or a live handle.
 */
double cold_optimization_best_fidelity(const struct ColdOptimization *opt);

/*
 Number of restarts that failed to evolve.

 # Safety
 `opt` must be null or a live handle.
 */
size_t cold_optimization_failed(const struct ColdOptimization *opt);

/*
 Best coefficients. `written` receives the count even when `cap` is too small.

 # Safety
 `opt` must be a live handle, `buf` must hold `cap` doubles, `written` must be null or writable.
 */
enum ColdStatus cold_optimization_coefficients(const struct ColdOptimization *opt,
                                               double *buf,
                                               size_t cap,
                                               size_t *written);

/*
 Final fidelities of the successful restarts, in restart order.

 # Safety
 As [`cold_optimization_coefficients`].
 */
enum ColdStatus cold_optimization_fidelities(const struct ColdOptimization *opt,
                                             double *buf,
                                             size_t cap,
                                             size_t *written);

/*
 # Safety
 `opt` must be null or a handle not yet freed.
 */
void cold_optimization_free(struct ColdOptimization *opt);

/*
 Parses `config_text` (the `cold run` config format), runs it and returns the
 table as a new string in `out`, released with [`cold_string_free`].

 # Safety
 `config_text` must be a NUL-terminated string and `out` writable.
 */
enum ColdStatus cold_run_config(const char *config_text, uint32_t format, char **out);

/*
 # Safety
 `s` must be null or a string returned by this library, not yet freed.
 */
void cold_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COLD_H */
