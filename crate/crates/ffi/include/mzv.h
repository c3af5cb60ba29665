#ifndef MZV_H
#define MZV_H

#include <stddef.h>

/**
 * Result codes shared by every function of the interface.
 */
typedef enum MzvStatus {
  MZV_STATUS_OK = 0,
  MZV_STATUS_NULL_POINTER = 1,
  MZV_STATUS_INVALID_UTF8 = 2,
  MZV_STATUS_MALFORMED_INPUT = 3,
  MZV_STATUS_NOT_ADMISSIBLE = 4,
  MZV_STATUS_DIVERGENT = 5,
  MZV_STATUS_PRECISION = 6,
  MZV_STATUS_UNKNOWN_FAMILY = 7,
  MZV_STATUS_PRECONDITION = 8,
  MZV_STATUS_IRREDUCIBLE = 9,
  MZV_STATUS_JSON = 10,
  MZV_STATUS_INTERNAL = 99,
} MzvStatus;

/**
 * An identity produced by [`mzv_identity_derive`] or [`mzv_identity_from_json`].
 */
typedef struct MzvIdentity MzvIdentity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Evaluates ζ(composition), e.g. `"3,1"`, to within `eps`. Alternating
 * compositions (`"-1"`) use the truncated nested sum.
 *
 * # Safety
 * `composition` must be a nul-terminated string; the out-pointers must be valid.
 */
enum MzvStatus mzv_eval(const char *composition, double eps, double *value, double *bound);

/**
 * Like [`mzv_eval`] but returns the value as a decimal string with every
 * reliable digit.
 *
 * # Safety
 * `composition` must be a nul-terminated string; `out` must be valid.
 */
enum MzvStatus mzv_eval_string(const char *composition, double eps, char **out);

/**
 * Emits one identity. `params` holds `n_params` strings; `variant` may be null.
 *
 * # Safety
 * All strings must be nul-terminated; `params` must point to `n_params`
 * strings; `out` must be valid.
 */
enum MzvStatus mzv_identity_derive(const char *family,
                                   const char *const *params,
                                   size_t n_params,
                                   const char *variant,
                                   struct MzvIdentity **out);

/**
 * Parses an identity from its JSON form.
 *
 * # Safety
 * `json` must be nul-terminated; `out` must be valid.
 */
enum MzvStatus mzv_identity_from_json(const char *json, struct MzvIdentity **out);

/**
 * Serializes an identity (sorted keys).
 *
 * # Safety
 * `id` must come from this library and not have been freed; `out` must be valid.
 */
enum MzvStatus mzv_identity_to_json(const struct MzvIdentity *id, char **out);

/**
 * 1 when the identity belongs to a final family and has no ζ(1…) factor,
 * 0 otherwise (also for a null handle).
 *
 * # Safety
 * `id` must be null or a live handle.
 */
int mzv_identity_is_final(const struct MzvIdentity *id);

/**
 * Checks an identity numerically. `pass` receives 1 or 0; `residual` and
 * `bound` may be null.
 *
 * # Safety
 * `id` must be a live handle; non-null out-pointers must be valid.
 */
enum MzvStatus mzv_identity_verify(const struct MzvIdentity *id,
                                   double eps,
                                   int *pass,
                                   double *residual,
                                   double *bound);

/**
 * Releases an identity handle. Null is ignored.
 *
 * # Safety
 * `id` must be null or a handle not yet freed.
 */
void mzv_identity_free(struct MzvIdentity *id);

/**
 * Rank of the permutation relation system of the given length. `symbols`
 * (length `length`, may be null for distinct arguments) marks coinciding
 * arguments by equal values.
 *
 * # Safety
 * `symbols` must be null or point to `length` values; `rank` must be valid.
 */
enum MzvStatus mzv_permutation_rank(size_t length, const size_t *symbols, size_t *rank);

/**
 * Reduces a diagram given as JSON with a named strategy (`direct`,
 * `rightward`, `alternative`, `shuffle`); the result is the JSON form of the
 * value.
 *
 * # Safety
 * Strings must be nul-terminated; `out` must be valid.
 */
enum MzvStatus mzv_diagram_reduce(const char *diagram_json, const char *strategy, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void mzv_string_free(char *s);

/**
 * Message of the last failure on this thread (empty after a success). The
 * pointer stays valid until the next call into the library on this thread.
 */
const char *mzv_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MZV_H */
