#ifndef ZPSET_H
#define ZPSET_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code for every fallible entry point.
 */
typedef enum ZpsStatus {
  ZPS_STATUS_OK = 0,
  ZPS_STATUS_NULL_POINTER = 1,
  ZPS_STATUS_INVALID_UTF8 = 2,
  ZPS_STATUS_NOT_PRIME = 3,
  ZPS_STATUS_EVEN_PRIME = 4,
  ZPS_STATUS_ZERO_INVERSE = 5,
  ZPS_STATUS_MODULUS_MISMATCH = 6,
  ZPS_STATUS_EMPTY_DENOMINATOR = 7,
  ZPS_STATUS_DEGENERATE_Y = 8,
  ZPS_STATUS_ZERO_COEFFICIENT = 9,
  ZPS_STATUS_RESTRICTION_VIOLATED = 10,
  ZPS_STATUS_Q_IS_FULL = 11,
  ZPS_STATUS_Q_IS_EMPTY = 12,
  ZPS_STATUS_HYPOTHESIS_VIOLATED = 13,
  ZPS_STATUS_EPS_OUT_OF_RANGE = 14,
  ZPS_STATUS_ORDER_TOO_SMALL = 15,
  ZPS_STATUS_BUDGET_EXCEEDED = 16,
  ZPS_STATUS_NOT_A_DIVISOR = 17,
  ZPS_STATUS_UNKNOWN_LEMMA = 18,
  ZPS_STATUS_MISSING_BINDING = 19,
  ZPS_STATUS_OUT_OF_RANGE = 20,
  ZPS_STATUS_PARSE_ERROR = 21,
  ZPS_STATUS_BUFFER_TOO_SMALL = 22,
  ZPS_STATUS_INTERNAL_PANIC = 23,
} ZpsStatus;

/**
 * Sumset backend selector.
 */
typedef enum ZpsBackend {
  ZPS_BACKEND_DENSE_SHIFT = 0,
  ZPS_BACKEND_NTT_CONVOLUTION = 1,
} ZpsBackend;

/**
 * Opaque subset of `Z_p`.
 */
typedef struct ZpsSet ZpsSet;

/**
 * Opaque covering witness.
 */
typedef struct ZpsWitness ZpsWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *zps_version(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from a zpset function that transfers string ownership, and
 * must not have been freed already. NULL is ignored.
 */
void zps_string_free(char *s);

/**
 * Builds a set over `Z_p` from `len` residues (reduced mod p).
 * `elems` may be NULL when `len` is 0.
 *
 * # Safety
 * `elems` must point to `len` readable u64 values; `out` must be writable.
 */
enum ZpsStatus zps_set_new(uint64_t p, const uint64_t *elems, size_t len, struct ZpsSet **out);

/**
 * Parses a set literal such as `{1,2,5..9}` over `Z_p`.
 *
 * # Safety
 * `literal` must be a readable NUL-terminated string; `out` writable.
 */
enum ZpsStatus zps_set_parse(uint64_t p, const char *literal, struct ZpsSet **out);

/**
 * # Safety
 * `s` must be a live handle from this library or NULL.
 */
void zps_set_free(struct ZpsSet *s);

/**
 * # Safety
 * `s` must be a live set handle.
 */
uint64_t zps_set_modulus(const struct ZpsSet *s);

/**
 * # Safety
 * `s` must be a live set handle.
 */
uint64_t zps_set_cardinality(const struct ZpsSet *s);

/**
 * # Safety
 * `s` must be a live set handle.
 */
bool zps_set_contains(const struct ZpsSet *s, uint64_t v);

/**
 * Copies the members (ascending) into `buf`. Writes the member count to
 * `written`; fails with `BUFFER_TOO_SMALL` when `cap` is insufficient
 * (call with `cap = 0` to query the required size).
 *
 * # Safety
 * `buf` must point to `cap` writable u64 slots (may be NULL when cap is 0);
 * `written` must be writable.
 */
enum ZpsStatus zps_set_elements(const struct ZpsSet *s, uint64_t *buf, size_t cap, size_t *written);

/**
 * Sumset `{x + y mod p}` under the chosen backend.
 *
 * # Safety
 * Operand handles must be live; `out` must be writable.
 */
enum ZpsStatus zps_sumset(const struct ZpsSet *x,
                          const struct ZpsSet *y,
                          enum ZpsBackend backend,
                          struct ZpsSet **out);

/**
 * Dilation `{lambda * a}`.
 *
 * # Safety
 * `a` must be live; `out` writable.
 */
enum ZpsStatus zps_dilate(uint64_t lambda, const struct ZpsSet *a, struct ZpsSet **out);

/**
 * k-fold sumset `kX` (k >= 1) by binary doubling.
 *
 * # Safety
 * `x` must be live; `out` writable.
 */
enum ZpsStatus zps_iterated_sum(const struct ZpsSet *x,
                                uint64_t k,
                                enum ZpsBackend backend,
                                struct ZpsSet **out);

/**
 * k-fold product set `X^k` (k >= 1).
 *
 * # Safety
 * `x` must be live; `out` writable.
 */
enum ZpsStatus zps_product_power(const struct ZpsSet *x, uint64_t k, struct ZpsSet **out);

/**
 * `|sum exp(2 pi i a x y / p)|` over the two sets; `a != 0`.
 *
 * # Safety
 * Handles must be live; `out` writable.
 */
enum ZpsStatus zps_exp_sum_magnitude(const struct ZpsSet *x,
                                     const struct ZpsSet *y,
                                     uint64_t a,
                                     double *out);

/**
 * Smallest `xi` in `Q[X,Y]` with `xi + a` outside it; `a != 0`.
 *
 * # Safety
 * Handles must be live; `out` writable.
 */
enum ZpsStatus zps_find_xi(const struct ZpsSet *x,
                           const struct ZpsSet *y,
                           uint64_t a,
                           uint64_t *out);

/**
 * Runs the four-case covering pipeline on `a` with the given order and
 * eps; `max_cover_order = 0` selects the default budget.
 *
 * # Safety
 * `a` must be live; `out` writable.
 */
enum ZpsStatus zps_theorem1_construct(const struct ZpsSet *a,
                                      uint32_t n,
                                      double eps,
                                      enum ZpsBackend backend,
                                      uint64_t max_cover_order,
                                      struct ZpsWitness **out);

/**
 * Builds the order-d subgroup of `Z_p^*` and runs the covering check on
 * it (eps = 1/2, least admissible n).
 *
 * # Safety
 * `out` must be writable.
 */
enum ZpsStatus zps_corollary1_check(uint64_t p,
                                    uint64_t d,
                                    enum ZpsBackend backend,
                                    uint64_t max_cover_order,
                                    struct ZpsWitness **out);

/**
 * # Safety
 * `w` must be a live witness handle or NULL.
 */
void zps_witness_free(struct ZpsWitness *w);

/**
 * # Safety
 * `w` must be a live witness handle.
 */
uint32_t zps_witness_case(const struct ZpsWitness *w);

/**
 * # Safety
 * `w` must be a live witness handle.
 */
uint64_t zps_witness_cover_order(const struct ZpsWitness *w);

/**
 * # Safety
 * `w` must be a live witness handle.
 */
bool zps_witness_verified(const struct ZpsWitness *w);

/**
 * Serializes the witness as JSON; free with [`zps_string_free`].
 *
 * # Safety
 * `w` must be live; `out` writable.
 */
enum ZpsStatus zps_witness_json(const struct ZpsWitness *w, char **out);

/**
 * Exhaustive verification run under default caps; the JSON report follows
 * the stable schema. Free the string with [`zps_string_free`].
 *
 * # Safety
 * `lemma` must be a readable NUL-terminated string; `out_json` writable.
 */
enum ZpsStatus zps_run_exhaustive(const char *lemma, uint64_t p, char **out_json);

/**
 * Seeded random verification run under default caps.
 *
 * # Safety
 * `lemma` must be a readable NUL-terminated string; `out_json` writable.
 */
enum ZpsStatus zps_run_random(const char *lemma,
                              uint64_t p,
                              uint64_t samples,
                              uint64_t seed,
                              char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZPSET_H */
