#ifndef CHRESTENSON_H
#define CHRESTENSON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ChStatus {
  CH_STATUS_OK = 0,
  CH_STATUS_INVALID_ARGUMENT = 1,
  CH_STATUS_NULL_POINTER = 2,
  CH_STATUS_MEMORY_GUARD = 3,
  CH_STATUS_OVERFLOW = 4,
  CH_STATUS_BUFFER_TOO_SMALL = 5,
  CH_STATUS_INFEASIBLE = 6,
  CH_STATUS_PANIC = 7,
} ChStatus;

// Opaque spectrum handle.
typedef struct ChSpectrum ChSpectrum;

// Opaque step function handle.
typedef struct ChStepFunction ChStepFunction;

// Block gap results. `final_bound` is NaN where no bound applies.
typedef struct ChGapSummary {
  uint64_t block_start;
  uint64_t m_k;
  uint32_t resolution;
  double gap;
  double gap_error_bound;
  double lebesgue_m;
  double j2_bound;
  int64_t j2_bound_log2;
  double dirichlet_bound;
  double final_bound;
  bool pass;
} ChGapSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Description of the last failure on this thread; empty after a success.
// The pointer stays valid until the next call into this library on the
// same thread.
const char *ch_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *ch_version(void);

// Whether `a` is a supported order.
bool ch_order_is_valid(uint32_t a);

// Exponent `e` with `ψ_n = ω^e` on cell `index` of the resolution grid.
//
// # Safety
// `out_exponent` must be a valid pointer to a `uint32_t`.
enum ChStatus ch_walsh_exponent(uint32_t a,
                                uint64_t n,
                                uint32_t resolution,
                                uint64_t index,
                                uint32_t *out_exponent);

// Samples `ψ_n` on the resolution grid. `cell_cap` of 0 selects the default.
//
// # Safety
// `out` must be a valid pointer; on success it receives a handle to free
// with [`ch_step_function_free`].
enum ChStatus ch_step_function_walsh(uint32_t a,
                                     uint64_t n,
                                     uint32_t resolution,
                                     uint64_t cell_cap,
                                     struct ChStepFunction **out);

// Step function from `len = a^N` cell values.
//
// # Safety
// `re` and `im` must each point to `len` doubles; `out` must be valid.
enum ChStatus ch_step_function_from_values(uint32_t a,
                                           const double *re,
                                           const double *im,
                                           size_t len,
                                           struct ChStepFunction **out);

// Number of cells, or 0 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
size_t ch_step_function_len(const struct ChStepFunction *f);

// Resolution `N` of the grid, or 0 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
uint32_t ch_step_function_resolution(const struct ChStepFunction *f);

// Copies the cell values into caller buffers of `capacity` doubles each.
//
// # Safety
// `f` must be a live handle; `re` and `im` must each hold `capacity` doubles.
enum ChStatus ch_step_function_copy_values(const struct ChStepFunction *f,
                                           double *re,
                                           double *im,
                                           size_t capacity);

// # Safety
// `f` must be null or a handle not yet freed.
void ch_step_function_free(struct ChStepFunction *f);

// Spectrum from `len` coefficients.
//
// # Safety
// `re` and `im` must each point to `len` doubles; `out` must be valid.
enum ChStatus ch_spectrum_from_values(uint32_t a,
                                      const double *re,
                                      const double *im,
                                      size_t len,
                                      struct ChSpectrum **out);

// Number of coefficients, or 0 for a null handle.
//
// # Safety
// `s` must be null or a live handle.
size_t ch_spectrum_len(const struct ChSpectrum *s);

// # Safety
// `s` must be a live handle; `re` and `im` must each hold `capacity` doubles.
enum ChStatus ch_spectrum_copy_values(const struct ChSpectrum *s,
                                      double *re,
                                      double *im,
                                      size_t capacity);

// # Safety
// `s` must be null or a handle not yet freed.
void ch_spectrum_free(struct ChSpectrum *s);

// Fast forward transform.
//
// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum ChStatus ch_forward(const struct ChStepFunction *f, struct ChSpectrum **out);

// Synthesis on the resolution grid. `cell_cap` of 0 selects the default.
//
// # Safety
// `s` must be a live handle and `out` a valid pointer.
enum ChStatus ch_inverse(const struct ChSpectrum *s,
                         uint32_t resolution,
                         uint64_t cell_cap,
                         struct ChStepFunction **out);

// Lebesgue constant `L_n` with its summation error bound.
//
// # Safety
// `out_value` must be valid; `out_error_bound` may be null.
enum ChStatus ch_lebesgue_constant(uint32_t a,
                                   uint64_t n,
                                   uint64_t cell_cap,
                                   double *out_value,
                                   double *out_error_bound);

// Checks the Lebesgue lower bounds for `k = 0 ..= k_max`.
//
// # Safety
// `out_all_pass` must be valid.
enum ChStatus ch_verify_lemma(uint32_t a, uint32_t k_max, uint64_t cell_cap, bool *out_all_pass);

// L1 norm of the `k`-th block and the bounds it is checked against.
//
// # Safety
// `out` must be valid.
enum ChStatus ch_block_gap(uint32_t a, uint32_t k, uint64_t cell_cap, struct ChGapSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHRESTENSON_H */
