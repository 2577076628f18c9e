#ifndef STABLAB_H
#define STABLAB_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  STABLAB_STATUS_OK = 0,
  STABLAB_STATUS_NULL_ARGUMENT = 1,
  STABLAB_STATUS_INVALID_UTF8 = 2,
  STABLAB_STATUS_PARSE = 3,
  STABLAB_STATUS_EMPTY_SFT = 4,
  STABLAB_STATUS_BOUND_TOO_SMALL = 5,
  STABLAB_STATUS_NOT_REALIZABLE = 6,
  /**
   * The requested object does not exist (e.g. no stabilized configuration).
   */
  STABLAB_STATUS_ABSENT = 7,
  STABLAB_STATUS_INVALID_ARGUMENT = 8,
  STABLAB_STATUS_PANIC = 9,
} StablabStatus;

/**
 * Tileset graph handle.
 */
typedef struct StablabGraph StablabGraph;

/**
 * Semilinear set handle.
 */
typedef struct StablabSet StablabSet;

/**
 * Nearest-neighbor ℤ² SFT handle.
 */
typedef struct StablabSft2 StablabSft2;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the next
 * call into this library from the same thread.
 */
const char *stablab_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void stablab_string_free(char *s);

/**
 * Parses a tileset graph from its text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
StablabStatus stablab_graph_parse(const char *text, StablabGraph **out);

/**
 * # Safety
 * `g` must be NULL or a handle from this library, not yet freed.
 */
void stablab_graph_free(StablabGraph *g);

/**
 * Text form of the graph; free with `stablab_string_free`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
StablabStatus stablab_graph_to_string(const StablabGraph *g, char **out);

/**
 * Set of multiples of the (pruned) graph, certified up to `bound`; a bound
 * of 0 uses the structural bound.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
StablabStatus stablab_graph_multiples(const StablabGraph *g, uint64_t bound, StablabSet **out);

/**
 * Whether the SFT of the (pruned) graph has an aperiodic point.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
StablabStatus stablab_graph_has_aperiodic_point(const StablabGraph *g, bool *out);

/**
 * Parses a set expression such as `{0} + 3(N+2)`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
StablabStatus stablab_set_parse(const char *text, StablabSet **out);

/**
 * # Safety
 * `s` must be NULL or a handle from this library, not yet freed.
 */
void stablab_set_free(StablabSet *s);

/**
 * Normal form in set syntax; free with `stablab_string_free`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
StablabStatus stablab_set_to_string(const StablabSet *s, char **out);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
StablabStatus stablab_set_member(const StablabSet *s, uint64_t n, bool *out);

/**
 * Tileset graph whose set of multiples is `s`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
StablabStatus stablab_realize(const StablabSet *s, StablabGraph **out);

/**
 * Parses a ℤ² SFT (`alphabet:`, `hforbid:`, `vforbid:` lines).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
StablabStatus stablab_sft2_parse(const char *text, StablabSft2 **out);

/**
 * # Safety
 * `s` must be NULL or a handle from this library, not yet freed.
 */
void stablab_sft2_free(StablabSft2 *s);

/**
 * Torus witness, as JSON `{"p":..,"q":..,"rows":[..]}`, of a configuration
 * stabilized by `(p, q)`. Returns `Absent` when there is none.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
StablabStatus stablab_sft2_periodize(const StablabSft2 *s, int64_t p, int64_t q, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STABLAB_H */
