#ifndef APNFORGE_H
#define APNFORGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result discriminant for every entry point.
 */
typedef enum ApnfStatus {
  APNF_STATUS_OK = 0,
  /**
   * A parameter was rejected (bad degree, reducible modulus, gcd
   * condition, mismatched sizes, ...).
   */
  APNF_STATUS_BAD_PARAMS = 1,
  /**
   * A budgeted search ran out of wall-clock time.
   */
  APNF_STATUS_TIMEOUT = 2,
  /**
   * The two codes are not related by any affine witness.
   */
  APNF_STATUS_NO_WITNESS = 3,
  /**
   * The object exceeds a structural bound (dual cap, group size, ...).
   */
  APNF_STATUS_TOO_BIG = 4,
  /**
   * The field degree is outside the supported range.
   */
  APNF_STATUS_UNSUPPORTED = 5,
  /**
   * A null pointer was passed where an object was required.
   */
  APNF_STATUS_NULL_POINTER = 6,
  /**
   * An internal panic was caught at the boundary.
   */
  APNF_STATUS_PANIC = 7,
} ApnfStatus;

typedef struct ApnfCode ApnfCode;

typedef struct ApnfField ApnfField;

typedef struct ApnfFunction ApnfFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message into `buf` (NUL-terminated, truncating)
 * and returns the length the full message needs, including the NUL.
 */
uintptr_t apnf_last_error(char *buf, uintptr_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *apnf_version(void);

/**
 * Creates a field of degree `n`; `modulus` 0 selects the built-in
 * default for that degree.
 */
enum ApnfStatus apnf_field_new(uint32_t n, uint32_t modulus, struct ApnfField **out);

void apnf_field_free(struct ApnfField *p);

enum ApnfStatus apnf_field_degree(const struct ApnfField *field, uint32_t *out);

enum ApnfStatus apnf_field_modulus(const struct ApnfField *field, uint32_t *out);

/**
 * The power function x^{2^r + 1}; requires gcd(r, n) = 1.
 */
enum ApnfStatus apnf_function_gold(const struct ApnfField *field,
                                   uint32_t r,
                                   struct ApnfFunction **out);

/**
 * The trinomial family member with parameters (k, s, b, c) on a field of
 * degree 2k; pass 0 for `b` or `c` to take the canonical defaults.
 */
enum ApnfStatus apnf_function_family(const struct ApnfField *field,
                                     uint32_t k,
                                     uint32_t s,
                                     uint32_t b,
                                     uint32_t c,
                                     struct ApnfFunction **out);

/**
 * One of the three sporadic functions: `which` is 1, 2 (degree 6) or 3
 * (degree 8).
 */
enum ApnfStatus apnf_function_sporadic(const struct ApnfField *field,
                                       uint32_t which,
                                       struct ApnfFunction **out);

/**
 * A function given by its full value table (`len` must equal 2^n and
 * every entry must be a valid field element).
 */
enum ApnfStatus apnf_function_from_values(const struct ApnfField *field,
                                          const uint32_t *values,
                                          uintptr_t len,
                                          struct ApnfFunction **out);

void apnf_function_free(struct ApnfFunction *p);

enum ApnfStatus apnf_function_value(const struct ApnfFunction *f, uint32_t x, uint32_t *out);

enum ApnfStatus apnf_function_differential_uniformity(const struct ApnfFunction *f,
                                                      uint32_t threads,
                                                      uint32_t *out);

enum ApnfStatus apnf_function_is_apn(const struct ApnfFunction *f, bool *out);

enum ApnfStatus apnf_function_algebraic_degree(const struct ApnfFunction *f, uint32_t *out);

/**
 * Builds the binary code attached to the function.
 */
enum ApnfStatus apnf_code_build(const struct ApnfFunction *f, struct ApnfCode **out);

void apnf_code_free(struct ApnfCode *p);

enum ApnfStatus apnf_code_length(const struct ApnfCode *c, uint32_t *out);

enum ApnfStatus apnf_code_dimension(const struct ApnfCode *c, uint32_t *out);

enum ApnfStatus apnf_code_equal(const struct ApnfCode *a, const struct ApnfCode *b, bool *out);

/**
 * Searches dual codewords of weight up to `cap` (at most 8). On success
 * `out_found` says whether a nonzero dual word exists in range and
 * `out_distance` holds its minimum weight when found.
 */
enum ApnfStatus apnf_code_dual_min_distance(const struct ApnfCode *c,
                                            uint32_t cap,
                                            bool *out_found,
                                            uint32_t *out_distance);

/**
 * Full automorphism group order under a wall-clock budget, split into
 * low and high 64-bit halves.
 */
enum ApnfStatus apnf_code_aut_order(const struct ApnfCode *c,
                                    uint64_t budget_seconds,
                                    uint64_t *out_lo,
                                    uint64_t *out_hi);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* APNFORGE_H */
