#ifndef BIGRAMSEY_H
#define BIGRAMSEY_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes mirroring the CLI exit-code contract.
typedef enum BrStatus {
  // Success.
  BR_OK = 0,
  // Semantically invalid input (sphere condition, dimension mismatch, …).
  BR_SEMANTIC = 1,
  // Malformed JSON or rational literal.
  BR_PARSE = 2,
  // Exhaustion guard exceeded.
  BR_GUARD = 3,
  // A required pointer argument was null.
  BR_NULL_POINTER = 4,
  // Internal panic; the operation did not complete.
  BR_INTERNAL = 5,
} BrStatus;

// Opaque handle around a pumpkin.
typedef struct BrPumpkin BrPumpkin;

// Opaque handle around a validated tuple.
typedef struct BrTuple BrTuple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *br_version(void);

// Copy of the last error message on this thread, or null when none.
// Free with `br_string_free`.
char *br_last_error(void);

// Release a string allocated by this library.
//
// # Safety
// `s` must have been returned by a `br_*` function and not freed before.
void br_string_free(char *s);

// Parse tuple JSON (`{"d":…,"n":…,"entries":[[…]]}`) into a handle.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be a valid pointer.
enum BrStatus br_tuple_parse(const char *json, struct BrTuple **out);

// Serialize a tuple handle back to JSON.
//
// # Safety
// `t` must be a live handle from this library; `out` must be valid.
enum BrStatus br_tuple_to_json(const struct BrTuple *t, char **out);

// # Safety
// `t` must be a handle from this library, freed at most once.
void br_tuple_free(struct BrTuple *t);

// Colour a sphere tuple by its pumpkin.
//
// # Safety
// `t` must be a live tuple handle; `out` must be valid.
enum BrStatus br_pp_colour(const struct BrTuple *t, struct BrPumpkin **out);

// Parse pumpkin JSON (`{"dim":…,"stages":[…],"final":[…]}`).
//
// # Safety
// `json` must be NUL-terminated; `out` must be valid.
enum BrStatus br_pumpkin_parse(const char *json, struct BrPumpkin **out);

// # Safety
// `p` must be a live pumpkin handle; `out` must be valid.
enum BrStatus br_pumpkin_to_json(const struct BrPumpkin *p, char **out);

// Structural diagnosis as JSON: `"valid"`, `{"partial":…}` or
// `{"malformed":…}`.
//
// # Safety
// `p` must be a live pumpkin handle; `out` must be valid.
enum BrStatus br_pumpkin_diagnosis(const struct BrPumpkin *p, char **out);

// Certified chain distance within `eps` (a `"p/q"` rational), returned as a
// rational string.
//
// # Safety
// `a` and `b` must be live pumpkin handles; `eps` NUL-terminated; `out`
// valid.
enum BrStatus br_pumpkin_dist(const struct BrPumpkin *a,
                              const struct BrPumpkin *b,
                              const char *eps,
                              char **out);

// Sphere tuple reproducing a valid pumpkin through the colouring.
//
// # Safety
// `p` must be a live pumpkin handle; `eps` NUL-terminated; `out` valid.
enum BrStatus br_pumpkin_witness(const struct BrPumpkin *p, const char *eps, struct BrTuple **out);

// # Safety
// `p` must be a handle from this library, freed at most once.
void br_pumpkin_free(struct BrPumpkin *p);

// Number of rigid surjections `[m] → [n]`.
//
// # Safety
// `out` must be a valid pointer.
enum BrStatus br_rigid_count(size_t m, size_t n, uint64_t *out);

// Exhaustive combinatorial-line check; `*out` is 1 when every colouring
// admits a monochromatic line.
//
// # Safety
// `out` must be a valid pointer.
enum BrStatus br_hj_line_check(size_t alphabet,
                               size_t colours,
                               size_t len,
                               uint64_t max_colourings,
                               uint8_t *out);

// Intertwining count of a disjointly supported pair, given as JSON
// `{"x":{"support":[[i,"p/q"],…]},"y":{…}}`.
//
// # Safety
// `pair_json` must be NUL-terminated; `out` must be valid.
enum BrStatus br_intertwine_count(const char *pair_json, uint64_t *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BIGRAMSEY_H */
