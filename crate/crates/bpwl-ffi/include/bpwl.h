/* C interface to the bpwl library. */

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum BpwlStatus {
  /**
   * The call succeeded and the out-pointer holds the result.
   */
  BpwlStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  BpwlStatus_NullArgument = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  BpwlStatus_InvalidUtf8 = 2,
  /**
   * A string argument did not parse as a rational `p/q`.
   */
  BpwlStatus_ParseError = 3,
  /**
   * The level or parameter lies outside the computable range.
   */
  BpwlStatus_OutOfScope = 4,
  /**
   * The request was malformed: bad indices, unknown family tag,
   * non-coprime pair, or a zero bound.
   */
  BpwlStatus_BadRequest = 5,
  /**
   * An internal cross-check failed; the result would have been wrong.
   */
  BpwlStatus_InternalError = 6,
} BpwlStatus;

/**
 * Opaque handle to a validated non-critical level.
 */
typedef struct BpwlLevel BpwlLevel;

/**
 * Returns the library version as a NUL-terminated string.
 *
 * Release the result with [`bpwl_string_free`].
 */
char *bpwl_version(void);

/**
 * Releases a string allocated by this library.  A null pointer is a no-op.
 *
 * # Safety
 *
 * `s` must be null or a pointer previously returned by a `bpwl_*` function
 * and not yet freed; passing any other pointer is undefined behavior.
 */
void bpwl_string_free(char *s);

/**
 * Creates a level handle from the shifted-level pair `k + 3 = u / v`.
 *
 * # Safety
 *
 * `out_level` must be valid for a single pointer write.
 */
enum BpwlStatus bpwl_level_new(uint64_t u, uint64_t v, struct BpwlLevel **out_level);

/**
 * Creates a level handle from a rational level written as `p/q`.
 *
 * # Safety
 *
 * `k` must point to a NUL-terminated string and `out_level` must be valid
 * for a single pointer write.
 */
enum BpwlStatus bpwl_level_from_k(const char *k, struct BpwlLevel **out_level);

/**
 * Releases a level handle.  A null pointer is a no-op.
 *
 * # Safety
 *
 * `level` must be null or a handle from a `bpwl_level_*` constructor,
 * not yet freed.
 */
void bpwl_level_free(struct BpwlLevel *level);

/**
 * Writes a JSON summary of the level: `k`, the shifted pair when it is
 * known, derived constants, and scope flags.
 *
 * # Safety
 *
 * `level` must be a live handle and `out_json` valid for a pointer write.
 */
enum BpwlStatus bpwl_level_info_json(const struct BpwlLevel *level, char **out_json);

/**
 * Writes the module classification table of a nondegenerate pair `(u, v)`.
 *
 * # Safety
 *
 * `out_json` must be valid for a single pointer write.
 */
enum BpwlStatus bpwl_classify_json(uint32_t u, uint32_t v, char **out_json);

/**
 * Writes the relaxed singlet classification over the spectrum point
 * `lambda`, written as `p/q`.
 *
 * # Safety
 *
 * `lambda` must point to a NUL-terminated string and `out_json` must be
 * valid for a single pointer write.
 */
enum BpwlStatus bpwl_singlet_relaxed_json(const char *lambda, char **out_json);

/**
 * Writes the ordinary singlet family members with parameter in
 * `[lambda_min, lambda_max]` and top dimension at most `dim_max`.
 *
 * # Safety
 *
 * `lambda_min` and `lambda_max` must point to NUL-terminated strings and
 * `out_json` must be valid for a single pointer write.
 */
enum BpwlStatus bpwl_singlet_ordinary_json(const char *lambda_min,
                                           const char *lambda_max,
                                           uint32_t dim_max,
                                           char **out_json);

/**
 * Writes the spectral-flow arrow out of an ordinary singlet family member.
 *
 * `family` is a tag (`1` through `5`), `lambda` a rational `p/q`.
 *
 * # Safety
 *
 * `family` and `lambda` must point to NUL-terminated strings and `out_json`
 * must be valid for a single pointer write.
 */
enum BpwlStatus bpwl_orbit_image_json(const char *family, const char *lambda, char **out_json);

/**
 * Writes the minimal quotient data at indices `(r, s)` over the level
 * handle: highest weight, top dimension, and the submodule realisation.
 *
 * # Safety
 *
 * `level` must be a live handle and `out_json` valid for a pointer write.
 */
enum BpwlStatus bpwl_qhr_json(uint32_t r,
                              uint32_t s,
                              const struct BpwlLevel *level,
                              char **out_json);

/**
 * Writes the ordinary-family membership grid of the minimal quotients at
 * the singlet level `k = -7/3`, for `1 <= r, s <= max`.
 *
 * # Safety
 *
 * `out_json` must be valid for a single pointer write.
 */
enum BpwlStatus bpwl_kl_grid_json(uint32_t max, char **out_json);

/**
 * Writes the string-function convergence report at the given truncation
 * order.
 *
 * # Safety
 *
 * `out_json` must be valid for a single pointer write.
 */
enum BpwlStatus bpwl_string_convergence_json(uint32_t order, char **out_json);

/**
 * Sweeps every ordered generator pair with modes bounded by `modes` over
 * the grade-truncated module attached to `(j, h, w)` and writes the scan
 * report.  The rationals are written as `p/q`.
 *
 * # Safety
 *
 * `level` must be a live handle, `j`, `h`, and `w` must point to
 * NUL-terminated strings, and `out_json` must be valid for a pointer write.
 */
enum BpwlStatus bpwl_verify_embedding_json(const struct BpwlLevel *level,
                                           const char *j,
                                           const char *h,
                                           const char *w,
                                           uint32_t grade,
                                           uint32_t modes,
                                           char **out_json);
