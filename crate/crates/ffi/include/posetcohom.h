#ifndef POSETCOHOM_H
#define POSETCOHOM_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum PcStatus {
  PC_STATUS_OK = 0,
  PC_STATUS_NULL_POINTER = 1,
  PC_STATUS_INVALID_ARGUMENT = 2,
  PC_STATUS_UNKNOWN_NAME = 3,
  PC_STATUS_BUDGET = 4,
  PC_STATUS_OVERFLOW = 5,
  PC_STATUS_INTERNAL = 6,
} PcStatus;

/**
 * Chain variant of a cochain complex.
 */
typedef enum PcVariant {
  /**
   * all chains
   */
  PC_VARIANT_FULL = 0,
  /**
   * chains from a minimal to a maximal element
   */
  PC_VARIANT_MIN_MAX = 1,
  /**
   * chains starting at a minimal element
   */
  PC_VARIANT_MIN = 2,
  /**
   * chains ending at a maximal element
   */
  PC_VARIANT_MAX = 3,
} PcVariant;

/**
 * Integral cohomology of one level.
 */
typedef struct PcCohomology PcCohomology;

/**
 * An operadic poset species from the catalog.
 */
typedef struct PcSpecies PcSpecies;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *pc_last_error(void);

/**
 * Library version as a static string.
 */
const char *pc_version(void);

/**
 * Opens a catalog family such as `"pi"`, `"left:as"` or `"mlt"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum PcStatus pc_species_open(const char *name, struct PcSpecies **out);

/**
 * Lifts (nonzero) or restores (zero) the size budgets for this handle.
 *
 * # Safety
 * `sp` must come from [`pc_species_open`].
 */
enum PcStatus pc_species_set_unsafe_large(struct PcSpecies *sp, int32_t enable);

/**
 * # Safety
 * `sp` must come from [`pc_species_open`] and not be used afterwards.
 */
void pc_species_free(struct PcSpecies *sp);

/**
 * Number of elements of `P(n)`.
 *
 * # Safety
 * `sp` must come from [`pc_species_open`]; `out` must be writable.
 */
enum PcStatus pc_level_size(const struct PcSpecies *sp, size_t n, size_t *out);

/**
 * Möbius number of `P(n)` for the variant.
 *
 * # Safety
 * `sp` must come from [`pc_species_open`]; `out` must be writable.
 */
enum PcStatus pc_mobius(const struct PcSpecies *sp, size_t n, enum PcVariant variant, int64_t *out);

/**
 * Multichain count for `t ≥ 0`, zeta polynomial value for `t < 0`.
 *
 * # Safety
 * `sp` must come from [`pc_species_open`]; `out` must be writable.
 */
enum PcStatus pc_zeta(const struct PcSpecies *sp,
                      size_t n,
                      enum PcVariant variant,
                      int64_t t,
                      int64_t *out);

/**
 * Integral cohomology of `P(n)`.
 *
 * # Safety
 * `sp` must come from [`pc_species_open`]; `out` must be writable.
 */
enum PcStatus pc_cohomology(const struct PcSpecies *sp,
                            size_t n,
                            enum PcVariant variant,
                            struct PcCohomology **out);

/**
 * # Safety
 * `h` must come from [`pc_cohomology`] and not be used afterwards.
 */
void pc_cohomology_free(struct PcCohomology *h);

/**
 * Number of degrees (one past the top degree).
 *
 * # Safety
 * `h` must come from [`pc_cohomology`]; `out` must be writable.
 */
enum PcStatus pc_cohomology_degrees(const struct PcCohomology *h, size_t *out);

/**
 * Free rank in degree `k` (zero beyond the top degree).
 *
 * # Safety
 * `h` must come from [`pc_cohomology`]; `out` must be writable.
 */
enum PcStatus pc_cohomology_rank(const struct PcCohomology *h, size_t k, size_t *out);

/**
 * Number of torsion invariants in degree `k`.
 *
 * # Safety
 * `h` must come from [`pc_cohomology`]; `out` must be writable.
 */
enum PcStatus pc_cohomology_torsion_len(const struct PcCohomology *h, size_t k, size_t *out);

/**
 * JSON summary `{"variant", "betti", "torsion"}`; release with [`pc_string_free`].
 *
 * # Safety
 * `h` must come from [`pc_cohomology`]; `out` must be writable.
 */
enum PcStatus pc_cohomology_json(const struct PcCohomology *h, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void pc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSETCOHOM_H */
