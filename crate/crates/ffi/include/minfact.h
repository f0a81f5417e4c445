#ifndef MINFACT_H
#define MINFACT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes shared by every function.
typedef enum MinfactStatus {
  MINFACT_STATUS_OK = 0,
  MINFACT_STATUS_NULL_POINTER = 1,
  MINFACT_STATUS_INVALID_ARGUMENT = 2,
  MINFACT_STATUS_INVALID_UTF8 = 3,
  MINFACT_STATUS_CHECK_FAILED = 4,
  MINFACT_STATUS_INTERNAL = 5,
  MINFACT_STATUS_PANIC = 6,
} MinfactStatus;

// Opaque handle to an exact polynomial with integer coefficients.
typedef struct MinfactPolynomial MinfactPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Sum of chain weights over all chains of type `parts[0..len]`.
//
// # Safety
// `parts` must point to `len` readable values and `out` must be writable.
enum MinfactStatus minfact_weighted_sum(const size_t *parts,
                                        size_t len,
                                        struct MinfactPolynomial **out);

// The closed-form product for type `parts[0..len]`.
//
// # Safety
// `parts` must point to `len` readable values and `out` must be writable.
enum MinfactStatus minfact_product_formula(const size_t *parts,
                                           size_t len,
                                           struct MinfactPolynomial **out);

// Number of chains of type `parts[0..len]`.
//
// # Safety
// `parts` must point to `len` readable values and `out` must be writable.
enum MinfactStatus minfact_count_chains(const size_t *parts, size_t len, uint64_t *out);

// Hook-weight sum over André trees on `n` vertices.
//
// # Safety
// `out` must be writable.
enum MinfactStatus minfact_andre_sum(size_t n, struct MinfactPolynomial **out);

// `∏_{i=1}^{n-1} (i X_i + n + 1 − i)`.
//
// # Safety
// `out` must be writable.
enum MinfactStatus minfact_hook_formula(size_t n, struct MinfactPolynomial **out);

// Decreasing-edge sum over Cayley trees on `n` vertices.
//
// # Safety
// `out` must be writable.
enum MinfactStatus minfact_cayley_sum(size_t n, struct MinfactPolynomial **out);

// Weight sum over final chains of length `k` in the lattice on `n` points.
//
// # Safety
// `out` must be writable.
enum MinfactStatus minfact_final_sum(size_t n, size_t k, struct MinfactPolynomial **out);

// Structural equality. Null handles compare equal only to each other.
//
// # Safety
// Non-null arguments must be live handles.
bool minfact_polynomial_equal(const struct MinfactPolynomial *a, const struct MinfactPolynomial *b);

// Number of nonzero terms, or 0 for a null handle.
//
// # Safety
// `p` must be null or a live handle.
size_t minfact_polynomial_num_terms(const struct MinfactPolynomial *p);

// Text form such as `X1 + 2`; free the result with `minfact_string_free`.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum MinfactStatus minfact_polynomial_to_string(const struct MinfactPolynomial *p, char **out);

// JSON term list; free the result with `minfact_string_free`.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum MinfactStatus minfact_polynomial_to_json(const struct MinfactPolynomial *p, char **out);

// Value at `X_i = values[i - 1]` for `i = 1..=len`; other variables are
// zero. Fails if the result does not fit in 64 bits.
//
// # Safety
// `p` must be a live handle, `values` must point to `len` readable values
// (or be null with `len == 0`) and `out` must be writable.
enum MinfactStatus minfact_polynomial_evaluate(const struct MinfactPolynomial *p,
                                               const int64_t *values,
                                               size_t len,
                                               int64_t *out);

// Releases a handle; null is ignored.
//
// # Safety
// `p` must be null or a handle not yet freed.
void minfact_polynomial_free(struct MinfactPolynomial *p);

// Applies the last-two-steps merge to a chain in JSON form and returns
// `{"case","gamma","bar","sigma"}` as JSON.
//
// # Safety
// `chain_json` must be a NUL-terminated string and `out` writable.
enum MinfactStatus minfact_psi_json(const char *chain_json, char **out);

// Runs the whole verification battery up to `max_n`. Writes the number of
// failing checks to `failed` (if non-null) and returns
// `MinfactStatus::CheckFailed` when it is positive.
//
// # Safety
// `failed` must be null or writable.
enum MinfactStatus minfact_verify_all(size_t max_n, size_t *failed);

// Frees a string returned by this library; null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void minfact_string_free(char *s);

// Message for the last failure on this thread, or an empty string. The
// pointer stays valid until the next call into the library on this thread.
const char *minfact_last_error(void);

// Static description of a status code.
const char *minfact_status_str(enum MinfactStatus status);

// Library version as a static string.
const char *minfact_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MINFACT_H */
