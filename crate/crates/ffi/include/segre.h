#ifndef SEGRE_H
#define SEGRE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SegreStatus {
  SEGRE_STATUS_OK = 0,
  SEGRE_STATUS_NULL_POINTER = 1,
  SEGRE_STATUS_INVALID_ARGUMENT = 2,
  SEGRE_STATUS_INTERNAL_ERROR = 3,
  SEGRE_STATUS_PANIC = 4,
} SegreStatus;

/**
 * Memoizing integral engine.
 */
typedef struct SegreEngine SegreEngine;

/**
 * A polynomial in `d` with rational coefficients.
 */
typedef struct SegrePoly SegrePoly;

/**
 * Engine settings. `fixed_d = false` keeps `d` symbolic and ignores `d`.
 */
typedef struct SegreOptions {
  bool fixed_d;
  int64_t d;
  bool prune;
  bool theta1_rule;
  bool parallel;
} SegreOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Symbolic `d`, pruning on, θ₁ rule off, parallel expansion on.
 */
struct SegreOptions segre_options_default(void);

/**
 * Returns null if `options` is null.
 *
 * # Safety
 * `options` must be null or point to a valid `SegreOptions`.
 */
struct SegreEngine *segre_engine_new(const struct SegreOptions *options);

/**
 * # Safety
 * `engine` must be null or a handle from `segre_engine_new` not yet freed.
 */
void segre_engine_free(struct SegreEngine *engine);

/**
 * Computes `∫_{S^[n]} s_{2n}` and stores a new polynomial handle in `*out`.
 *
 * # Safety
 * `engine` must be a live engine handle and `out` a valid pointer.
 */
enum SegreStatus segre_integral(const struct SegreEngine *engine,
                                uint32_t n,
                                struct SegrePoly **out);

/**
 * # Safety
 * `poly` must be null or a handle from this library not yet freed.
 */
void segre_poly_free(struct SegrePoly *poly);

/**
 * Degree in `d`, or -1 for the zero polynomial (and for a null handle).
 *
 * # Safety
 * `poly` must be null or a live handle.
 */
int64_t segre_poly_degree(const struct SegrePoly *poly);

/**
 * The coefficient of `d^power` as `"num"` or `"num/den"`.
 *
 * # Safety
 * `poly` must be a live handle and `out` a valid pointer.
 */
enum SegreStatus segre_poly_coeff(const struct SegrePoly *poly, uint32_t power, char **out);

/**
 * The value at integer `d`, as `"num"` or `"num/den"`.
 *
 * # Safety
 * `poly` must be a live handle and `out` a valid pointer.
 */
enum SegreStatus segre_poly_eval(const struct SegrePoly *poly, int64_t d, char **out);

/**
 * Human-readable form such as `-1/2*d^2 + 3/2*d`.
 *
 * # Safety
 * `poly` must be a live handle and `out` a valid pointer.
 */
enum SegreStatus segre_poly_to_string(const struct SegrePoly *poly, char **out);

/**
 * `[["num","den"], ...]`, ascending in powers of `d`.
 *
 * # Safety
 * `poly` must be a live handle and `out` a valid pointer.
 */
enum SegreStatus segre_poly_to_json(const struct SegrePoly *poly, char **out);

/**
 * True iff every coefficient is divisible by `(d - 3)`, i.e. the value at 3 is 0.
 *
 * # Safety
 * `poly` must be null or a live handle.
 */
bool segre_poly_divisible_by_d_minus_3(const struct SegrePoly *poly);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void segre_string_free(char *s);

/**
 * Balanced chain sum of length `k` on `S_m` at level `n`, with default rules.
 * On a failed check the witness is available from `segre_last_error_message`.
 *
 * # Safety
 * `passed` must be a valid pointer.
 */
enum SegreStatus segre_check_main_theorem(uint32_t k, uint32_t m, uint32_t n, bool *passed);

/**
 * # Safety
 * `passed` must be a valid pointer.
 */
enum SegreStatus segre_check_wkmain(uint32_t k, uint32_t m, uint32_t n, bool *passed);

/**
 * `prefix` holds `prefix_len` operator indices in `0..=3`; it may be null
 * when `prefix_len` is 0.
 *
 * # Safety
 * `prefix` must point to `prefix_len` readable bytes; `passed` must be valid.
 */
enum SegreStatus segre_check_xi(uint32_t k,
                                uint32_t m,
                                uint32_t n,
                                const uint8_t *prefix,
                                uintptr_t prefix_len,
                                bool *passed);

/**
 * The message from the most recent failure on this thread, or null. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *segre_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEGRE_H */
