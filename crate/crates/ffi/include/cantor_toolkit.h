#ifndef CANTOR_TOOLKIT_H
#define CANTOR_TOOLKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call.
typedef enum {
  CT_STATUS_OK = 0,
  // A required pointer argument was null.
  CT_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8 or could not be parsed.
  CT_STATUS_PARSE = 2,
  CT_STATUS_DOMAIN = 3,
  CT_STATUS_NO_ROOT = 4,
  CT_STATUS_PRECISION_EXHAUSTED = 5,
  CT_STATUS_NOT_ADMISSIBLE = 6,
  CT_STATUS_HULL_VIOLATION = 7,
  CT_STATUS_EMPTY_WINDOW = 8,
  // An index was outside the handle's range.
  CT_STATUS_OUT_OF_RANGE = 9,
  // The library panicked; this is a bug.
  CT_STATUS_PANIC = 10,
} CtStatus;

// Verdict of [`ct_membership`].
typedef enum {
  CT_VERDICT_MEMBER = 0,
  CT_VERDICT_NOT_MEMBER = 1,
  CT_VERDICT_UNDETERMINED = 2,
} CtVerdict;

// An exact rational interval enclosing one parameter.
typedef struct CtBracket CtBracket;

// Nested covers of a parameter set, levels `ℓ..=depth`.
typedef struct CtCover CtCover;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *ct_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void ct_string_free(char *s);

// Computes the covers of `Λ(x)` down to `depth`.
//
// # Safety
// `x` must be a NUL-terminated string and `out` a valid pointer.
CtStatus ct_cover_new(const char *x, uint32_t m, uintptr_t depth, CtCover **out);

// # Safety
// `cover` must come from [`ct_cover_new`] and not have been freed.
void ct_cover_free(CtCover *cover);

// Number of intervals at the deepest level; 0 for null.
//
// # Safety
// `cover` must be null or a live handle.
uintptr_t ct_cover_len(const CtCover *cover);

// Endpoint midpoints of the `index`-th deepest interval, in increasing
// order of the parameter.
//
// # Safety
// `cover` must be a live handle; `lo` and `hi` valid pointers.
CtStatus ct_cover_interval(const CtCover *cover, uintptr_t index, double *lo, double *hi);

// The deepest level as JSON with `digits` fractional digits.
//
// # Safety
// `cover` must be a live handle; `out` a valid pointer. Free the result
// with [`ct_string_free`].
CtStatus ct_cover_json(const CtCover *cover, uintptr_t digits, char **out);

// Brackets the parameter `λ` with `π_λ(code) = x`. `code` has the form
// `"<digits>:<zero|max|trunc>"`, e.g. `"11:zero"`.
//
// # Safety
// `x` and `code` must be NUL-terminated strings; `out` a valid pointer.
CtStatus ct_solve_lambda(const char *x, uint32_t m, const char *code, CtBracket **out);

// # Safety
// `bracket` must come from this library and not have been freed.
void ct_bracket_free(CtBracket *bracket);

// Exact bounds of the bracket as `"p/q"` strings.
//
// # Safety
// `bracket` must be a live handle; `lo` and `hi` valid pointers. Free both
// results with [`ct_string_free`].
CtStatus ct_bracket_bounds(const CtBracket *bracket, char **lo, char **hi);

// Midpoint of the bracket; NaN for null.
//
// # Safety
// `bracket` must be null or a live handle.
double ct_bracket_midpoint(const CtBracket *bracket);

// Certified order of two parameters: writes -1, 0 or 1.
//
// # Safety
// `a` and `b` must be live handles; `out` a valid pointer.
CtStatus ct_bracket_compare(const CtBracket *a, const CtBracket *b, int32_t *out);

// Decides whether `x ∈ K_λ` for rational `λ ∈ (0, 1/m]`.
//
// # Safety
// `x` and `lambda` must be NUL-terminated strings; `out` a valid pointer.
CtStatus ct_membership(const char *x,
                       const char *lambda,
                       uint32_t m,
                       uintptr_t max_steps,
                       CtVerdict *out);

// Thickness reports for `E_1 … E_kmax` as JSON.
//
// # Safety
// `x` must be a NUL-terminated string; `out` a valid pointer. Free the
// result with [`ct_string_free`].
CtStatus ct_thickness_json(const char *x,
                           uint32_t m,
                           uintptr_t kmax,
                           uintptr_t depth,
                           uintptr_t digits,
                           char **out);

// Number of length-`n` words over `m` letters without `k` consecutive
// zeros (decimal string) and its growth-rate estimate.
//
// # Safety
// `count` and `growth` must be valid pointers. Free `*count` with
// [`ct_string_free`].
CtStatus ct_sft_count(uint32_t m, uintptr_t k, uintptr_t n, char **count, double *growth);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CANTOR_TOOLKIT_H */
