#ifndef QLOGIC_H
#define QLOGIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum QlStatus {
  QL_STATUS_OK = 0,
  QL_STATUS_NULL_POINTER = 1,
  QL_STATUS_INVALID_UTF8 = 2,
  QL_STATUS_PARSE_ERROR = 3,
  QL_STATUS_UNBOUND_VARIABLE = 4,
  QL_STATUS_INVALID_ARGUMENT = 5,
  QL_STATUS_SEMANTIC_ERROR = 6,
  QL_STATUS_VERIFICATION_FAILED = 7,
  QL_STATUS_JSON_ERROR = 8,
  QL_STATUS_PANIC = 9,
} QlStatus;

// Subspaces bound to variable names, all in one ambient `C^n`.
typedef struct QlEnvironment QlEnvironment;

// A formula.
typedef struct QlFormula QlFormula;

// Rank-decision tolerances; see [`ql_tolerance_default`].
typedef struct QlTolerance {
  double rank_threshold;
  double guard_band;
} QlTolerance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or an empty string.
// The pointer stays valid until the next call into the library.
const char *ql_last_error(void);

// Library version, a static string.
const char *ql_version(void);

// Default tolerances: rank threshold 1e-9, guard band 1e-6.
struct QlTolerance ql_tolerance_default(void);

// Release a string returned by the library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void ql_string_free(char *s);

// Parse formula text.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum QlStatus ql_formula_parse(const char *text, struct QlFormula **out);

// Release a formula. Null is ignored.
//
// # Safety
// `f` must be null or a formula from this library not yet freed.
void ql_formula_free(struct QlFormula *f);

// Canonical ASCII text of a formula.
//
// # Safety
// `f` must be a live formula; `out` must be writable.
enum QlStatus ql_formula_print(const struct QlFormula *f, char **out);

// Node counts: `tree` with shared subterms counted each time (saturating),
// `dag` counting each distinct subterm once.
//
// # Safety
// `f` must be a live formula; `tree` and `dag` must be writable.
enum QlStatus ql_formula_size(const struct QlFormula *f, uint64_t *tree, uint64_t *dag);

// `(a | !b) & b`.
//
// # Safety
// `a`, `b` must be NUL-terminated identifiers; `out` must be writable.
enum QlStatus ql_formula_p(const char *a, const char *b, struct QlFormula **out);

// `(b | !a) & a & !(a & b)`.
//
// # Safety
// `a`, `b` must be NUL-terminated identifiers; `out` must be writable.
enum QlStatus ql_formula_alpha(const char *a, const char *b, struct QlFormula **out);

// The gamma formula used inside beta(l); `l >= 1`.
//
// # Safety
// `out` must be writable.
enum QlStatus ql_formula_gamma(size_t l, struct QlFormula **out);

// beta(l), reaching `l` in `C^{2l}` and `l + 1` in `C^{2l+1}`; `l >= 1`.
//
// # Safety
// `out` must be writable.
enum QlStatus ql_formula_beta(size_t l, struct QlFormula **out);

// Formula separating `C^m` from `C^n` for `1 <= m < n`. If
// `certificate_json` is non-null it receives the stage certificate.
//
// # Safety
// `out` must be writable; `certificate_json` must be null or writable.
enum QlStatus ql_formula_separator(size_t m,
                                   size_t n,
                                   struct QlFormula **out,
                                   char **certificate_json);

// `alpha` relativized to the subspace computed by `beta`. The two formulas
// must not share variables.
//
// # Safety
// `alpha` and `beta` must be live formulas; `out` must be writable.
enum QlStatus ql_formula_restrict(const struct QlFormula *alpha,
                                  const struct QlFormula *beta,
                                  struct QlFormula **out);

// Read an environment from JSON:
// `{"ambient": n, "bindings": {"a": {"ambient": n, "basis": [[[re, im], ...], ...]}}}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum QlStatus ql_environment_from_json(const char *json, struct QlEnvironment **out);

// Release an environment. Null is ignored.
//
// # Safety
// `env` must be null or an environment from this library not yet freed.
void ql_environment_free(struct QlEnvironment *env);

// Evaluate a formula. `dim` receives the dimension of the value; if
// `value_json` is non-null it receives the value as a JSON subspace.
//
// # Safety
// `f` and `env` must be live handles; `dim` must be writable;
// `value_json` must be null or writable.
enum QlStatus ql_evaluate(const struct QlFormula *f,
                          const struct QlEnvironment *env,
                          struct QlTolerance tol,
                          size_t *dim,
                          char **value_json);

// Seeded random search for the largest value dimension in `C^n`.
// `max_found` receives the maximum; if `report_json` is non-null it
// receives the full search outcome including a witness.
//
// # Safety
// `f` must be a live formula; `max_found` must be writable;
// `report_json` must be null or writable.
enum QlStatus ql_estimate_dbar(const struct QlFormula *f,
                               size_t n,
                               size_t trials,
                               uint64_t seed,
                               struct QlTolerance tol,
                               size_t *max_found,
                               char **report_json);

// Build and check the separation of `C^m` from `C^n`; `report_json`
// receives the full report. Fails with `VerificationFailed` if the
// witness or the zero-test does not hold up.
//
// # Safety
// `report_json` must be writable.
enum QlStatus ql_separate(size_t m,
                          size_t n,
                          size_t trials,
                          uint64_t seed,
                          struct QlTolerance tol,
                          char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QLOGIC_H */
