#ifndef TAMARI_H
#define TAMARI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>

typedef enum {
  TAMARI_STATUS_OK = 0,
  /*
   Null pointer or non-UTF-8 string.
   */
  TAMARI_STATUS_NULL_OR_INVALID_ARGUMENT = 1,
  /*
   Malformed or out-of-domain input.
   */
  TAMARI_STATUS_INVALID_INPUT = 2,
  TAMARI_STATUS_LIMIT_EXCEEDED = 3,
  TAMARI_STATUS_SCHEDULE_FAILED = 4,
  TAMARI_STATUS_SEARCH_EXHAUSTED = 5,
  TAMARI_STATUS_INTERNAL = 6,
  TAMARI_STATUS_IO = 7,
  TAMARI_STATUS_PANIC = 8,
} TamariStatus;

typedef struct TamariCubillage TamariCubillage;

typedef struct TamariEnumeration TamariEnumeration;

typedef struct TamariTriangulation TamariTriangulation;

/*
 Message of the last failed call on this thread, or NULL. Valid until the
 next failing call on the same thread; do not free.
 */
const char *tamari_last_error_message(void);

void tamari_clear_last_error(void);

/*
 Static version string; do not free.
 */
const char *tamari_version(void);

/*
 Frees a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from a `tamari_*` function and not have been freed.
 */
void tamari_string_free(char *s);

/*
 Parses a cubillage from JSON `{"n", "dim", "spectrum"}`.

 # Safety
 `json` is a NUL-terminated string; `out` is writable.
 */
TamariStatus tamari_cubillage_from_json(const char *json, TamariCubillage **out);

/*
 Cubillage of `Z(n, delta+1)` with the given inversion set, written as
 space-separated subset labels (`"123 124"`, empty for none).

 # Safety
 `inversions` is a NUL-terminated string; `out` is writable.
 */
TamariStatus tamari_cubillage_from_inversion_set(size_t n,
                                                 size_t delta,
                                                 const char *inversions,
                                                 TamariCubillage **out);

/*
 Canonical JSON of a cubillage, including its inversion set.

 # Safety
 `c` is a live handle; free `*out` with `tamari_string_free`.
 */
TamariStatus tamari_cubillage_to_json(const TamariCubillage *c, char **out);

/*
 `n`, zonotope dimension and spectrum size.

 # Safety
 `c` is a live handle; each out pointer is writable or NULL.
 */
TamariStatus tamari_cubillage_shape(const TamariCubillage *c,
                                    size_t *n,
                                    size_t *dim,
                                    size_t *spectrum_len);

/*
 # Safety
 `c` is NULL or a handle not yet freed.
 */
void tamari_cubillage_free(TamariCubillage *c);

/*
 `g(Q)`: the cubes with initial vertex the empty set.

 # Safety
 `c` is a live handle; `out` is writable.
 */
TamariStatus tamari_g(const TamariCubillage *c, TamariTriangulation **out);

/*
 `ḡ(Q)`: the cubes with final vertex `[n]`.

 # Safety
 `c` is a live handle; `out` is writable.
 */
TamariStatus tamari_g_bar(const TamariCubillage *c, TamariTriangulation **out);

/*
 Parses a triangulation from JSON `{"n", "delta", "simplices"}`.

 # Safety
 `json` is a NUL-terminated string; `out` is writable.
 */
TamariStatus tamari_triangulation_from_json(const char *json, TamariTriangulation **out);

/*
 Triangulation of `C(n, delta)` from space-separated simplex labels.

 # Safety
 `simplices` is a NUL-terminated string; `out` is writable.
 */
TamariStatus tamari_triangulation_parse(size_t n,
                                        size_t delta,
                                        const char *simplices,
                                        TamariTriangulation **out);

/*
 # Safety
 `t` is a live handle; free `*out` with `tamari_string_free`.
 */
TamariStatus tamari_triangulation_to_json(const TamariTriangulation *t, char **out);

/*
 Runs the independent triangulation checks.

 # Safety
 `t` is a live handle; `valid` is writable.
 */
TamariStatus tamari_triangulation_validate(const TamariTriangulation *t, bool *valid);

/*
 # Safety
 Both are live handles; `equal` is writable.
 */
TamariStatus tamari_triangulation_equal(const TamariTriangulation *a,
                                        const TamariTriangulation *b,
                                        bool *equal);

/*
 # Safety
 `t` is NULL or a handle not yet freed.
 */
void tamari_triangulation_free(TamariTriangulation *t);

/*
 A cubillage `Q` with `g(Q) = T`: `Q_T` for even δ, a completion for odd δ.

 # Safety
 `t` is a live handle; `out` is writable.
 */
TamariStatus tamari_preimage(const TamariTriangulation *t, TamariCubillage **out);

/*
 Enumerates `B(n, delta+1)`. `max_elements == 0` means the default cap.

 # Safety
 `out` is writable.
 */
TamariStatus tamari_enumerate_bruhat(size_t n,
                                     size_t delta,
                                     size_t max_elements,
                                     TamariEnumeration **out);

/*
 Enumerates `S(n, delta)`. `max_elements == 0` means the default cap.

 # Safety
 `out` is writable.
 */
TamariStatus tamari_enumerate_hst(size_t n,
                                  size_t delta,
                                  size_t max_elements,
                                  TamariEnumeration **out);

/*
 Element and cover counts.

 # Safety
 `e` is a live handle; each out pointer is writable or NULL.
 */
TamariStatus tamari_enumeration_size(const TamariEnumeration *e, size_t *elements, size_t *covers);

/*
 Canonical JSON, byte-identical to the CLI cache file.

 # Safety
 `e` is a live handle; free `*out` with `tamari_string_free`.
 */
TamariStatus tamari_enumeration_to_json(const TamariEnumeration *e, char **out);

/*
 # Safety
 `e` is NULL or a handle not yet freed.
 */
void tamari_enumeration_free(TamariEnumeration *e);

/*
 Checks that `g: B(n, delta+1) -> S(n, delta)` is a quotient map whose
 fibre quotient is `S(n, delta)`.

 # Safety
 `pass` is writable.
 */
TamariStatus tamari_verify(size_t n, size_t delta, size_t max_elements, bool *pass);

#endif  /* TAMARI_H */
