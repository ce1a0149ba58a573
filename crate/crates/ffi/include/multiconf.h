#ifndef MULTICONF_H
#define MULTICONF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  MC_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MC_ERR_NULL = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  MC_ERR_UTF8 = 2,
  /**
   * A document failed to parse.
   */
  MC_ERR_PARSE = 3,
  /**
   * Arguments were well formed but unusable.
   */
  MC_ERR_INVALID_ARGUMENT = 4,
  /**
   * A checked property does not hold.
   */
  MC_ERR_FALSIFIED = 5,
  /**
   * The library panicked; this is a bug.
   */
  MC_ERR_PANIC = 6,
} mc_status_t;

/**
 * Opaque handle to an incidence structure.
 */
typedef struct mc_structure_t mc_structure_t;

typedef struct {
  bool is_uniqueness;
  bool every_line_ge2;
  bool every_point_ge2;
  bool is_pls;
} mc_pls_report_t;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *mc_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void mc_string_free(char *s);

/**
 * Releases a structure handle. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void mc_structure_free(mc_structure_t *s);

/**
 * Parses a structure document.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
mc_status_t mc_structure_from_json(const char *json, mc_structure_t **out);

/**
 * Serializes a structure as a canonical document.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
mc_status_t mc_structure_to_json(const mc_structure_t *s, char **out);

/**
 * # Safety
 * `out` must be writable.
 */
mc_status_t mc_segment(mc_structure_t **out);

/**
 * # Safety
 * `out` must be writable.
 */
mc_status_t mc_grassmannian(size_t m, size_t n, mc_structure_t **out);

/**
 * # Safety
 * `out` must be writable.
 */
mc_status_t mc_ht_config(uint64_t p, mc_structure_t **out);

/**
 * # Safety
 * `out` must be writable.
 */
mc_status_t mc_affine_plane(uint64_t p, mc_structure_t **out);

/**
 * # Safety
 * `out` must be writable.
 */
mc_status_t mc_projective_plane(uint64_t p, mc_structure_t **out);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
mc_status_t mc_dual(const mc_structure_t *s, mc_structure_t **out);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
mc_status_t mc_multiply_dual(const mc_structure_t *s, size_t k, mc_structure_t **out);

/**
 * Correlative multiplying with an involutive correlation of `s` when one
 * exists, else any correlation.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
mc_status_t mc_multiply_correlative(const mc_structure_t *s, size_t k, mc_structure_t **out);

/**
 * Numbers of points, lines and flags. Any out-pointer may be null.
 *
 * # Safety
 * `s` must be a live handle; non-null out-pointers must be writable.
 */
mc_status_t mc_counts(const mc_structure_t *s, size_t *points, size_t *lines, size_t *flags);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
mc_status_t mc_validate(const mc_structure_t *s, mc_pls_report_t *out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
mc_status_t mc_is_isomorphic(const mc_structure_t *a, const mc_structure_t *b, bool *out);

/**
 * Runs the full pipeline: covering by `method` (`"meta"`, `"rank"`,
 * `"tack1"`, `"tack2"`; null means `"meta"`), conditions, correlations,
 * rebuild. Writes the verdict and, if `report` is non-null, the report
 * document. A covering that cannot be recovered yields `MC_ERR_FALSIFIED`.
 *
 * # Safety
 * `s` must be a live handle; `method` null or a nul-terminated string;
 * `verdict` writable; `report` null or writable.
 */
mc_status_t mc_verify(const mc_structure_t *s, const char *method, bool *verdict, char **report);

/**
 * Levi graph in Graphviz format.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
mc_status_t mc_export_dot(const mc_structure_t *s, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTICONF_H */
