#ifndef CITGEN_H
#define CITGEN_H

/* Generated by cbindgen from the citgen-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible API call.
 */
typedef enum CitStatus {
  /**
   * The call succeeded.
   */
  CIT_STATUS_OK = 0,
  /**
   * A null pointer, malformed UTF-8, or out-of-range option was passed.
   */
  CIT_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The model text does not parse; the message names the offending line.
   */
  CIT_STATUS_PARSE_ERROR = 2,
  /**
   * The constraints admit no test case at all (or the forbidden-tuple
   * derivation exceeded its cap while proving that).
   */
  CIT_STATUS_UNSATISFIABLE = 3,
  /**
   * Suite construction or verification could not run to completion.
   */
  CIT_STATUS_GENERATION_FAILED = 4,
  /**
   * The suite was generated but failed oracle verification.
   */
  CIT_STATUS_VERIFICATION_FAILED = 5,
  /**
   * An internal invariant broke; please report the model that caused it.
   */
  CIT_STATUS_INTERNAL_ERROR = 6,
} CitStatus;

/**
 * An opaque parsed model: a parameter space plus constraint clauses.
 */
typedef struct CitModel CitModel;

/**
 * An opaque generated suite together with the model it was built from.
 */
typedef struct CitSuite CitSuite;

/**
 * Generation options. Obtain defaults from [`cit_options_default`] and
 * override individual fields.
 */
typedef struct CitOptions {
  /**
   * Interaction strength t (how many parameters each covered combination
   * spans). Must be between 1 and the parameter count.
   */
  uint32_t strength;
  /**
   * Seed for the deterministic random search. Equal seeds with equal
   * options reproduce the suite bit for bit.
   */
  uint64_t seed;
  /**
   * When nonzero, run exactly this many improvement rounds (fully
   * deterministic runtime). When zero, `time_budget_ms` applies instead.
   */
  uint64_t improve_rounds;
  /**
   * Wall-clock budget for the improvement loop, in milliseconds. Ignored
   * when `improve_rounds` is nonzero.
   */
  uint64_t time_budget_ms;
  /**
   * Modification budget per improvement round.
   */
  uint32_t max_modifications;
} CitOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message from the most recent failing call on this thread, as a
 * NUL-terminated UTF-8 string. Empty when nothing has failed yet. The
 * pointer stays valid until the next failing call on the same thread; do
 * not free it.
 */
const char *cit_last_error_message(void);

/**
 * Default options: strength 2, seed 0, a 5000 ms time budget, and 600
 * modifications per improvement round.
 */
struct CitOptions cit_options_default(void);

/**
 * Parses model text (a PARAMETERS section and an optional CONSTRAINTS
 * section) into a model handle written to `*out` on success.
 *
 * # Safety
 * `text` must point to a NUL-terminated string and `out` to a writable
 * pointer slot. The returned handle must be freed with [`cit_model_free`].
 */
enum CitStatus cit_model_parse(const char *text, struct CitModel **out);

/**
 * Frees a model handle. Passing null is a no-op.
 *
 * # Safety
 * `model` must be null or a pointer obtained from [`cit_model_parse`] that
 * has not been freed before.
 */
void cit_model_free(struct CitModel *model);

/**
 * Number of parameters of the model; 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle from [`cit_model_parse`].
 */
uintptr_t cit_model_parameter_count(const struct CitModel *model);

/**
 * Name of one parameter, borrowed from the handle; null when the index is
 * out of range or the handle is null.
 *
 * # Safety
 * `model` must be null or a live handle from [`cit_model_parse`].
 */
const char *cit_model_parameter_name(const struct CitModel *model, uintptr_t parameter);

/**
 * Number of values of one parameter; 0 when the index is out of range or
 * the handle is null.
 *
 * # Safety
 * `model` must be null or a live handle from [`cit_model_parse`].
 */
uintptr_t cit_model_value_count(const struct CitModel *model, uintptr_t parameter);

/**
 * Name of one value of one parameter, borrowed from the handle; null when
 * either index is out of range or the handle is null.
 *
 * # Safety
 * `model` must be null or a live handle from [`cit_model_parse`].
 */
const char *cit_model_value_name(const struct CitModel *model,
                                 uintptr_t parameter,
                                 uintptr_t value);

/**
 * Generates a covering suite for the model and writes a suite handle to
 * `*out` on success. Passing null options uses [`cit_options_default`].
 *
 * # Safety
 * `model` must be a live handle from [`cit_model_parse`], `options` null or
 * a valid options struct, and `out` a writable pointer slot. The returned
 * handle must be freed with [`cit_suite_free`].
 */
enum CitStatus cit_generate(const struct CitModel *model,
                            const struct CitOptions *options,
                            struct CitSuite **out);

/**
 * Frees a suite handle. Passing null is a no-op.
 *
 * # Safety
 * `suite` must be null or a pointer obtained from [`cit_generate`] that has
 * not been freed before.
 */
void cit_suite_free(struct CitSuite *suite);

/**
 * Number of test cases in the suite; 0 for a null handle.
 *
 * # Safety
 * `suite` must be null or a live handle from [`cit_generate`].
 */
uintptr_t cit_suite_row_count(const struct CitSuite *suite);

/**
 * Number of parameters per test case; 0 for a null handle.
 *
 * # Safety
 * `suite` must be null or a live handle from [`cit_generate`].
 */
uintptr_t cit_suite_column_count(const struct CitSuite *suite);

/**
 * Seed the suite was generated with; 0 for a null handle.
 *
 * # Safety
 * `suite` must be null or a live handle from [`cit_generate`].
 */
uint64_t cit_suite_seed(const struct CitSuite *suite);

/**
 * Interaction strength the suite covers; 0 for a null handle.
 *
 * # Safety
 * `suite` must be null or a live handle from [`cit_generate`].
 */
uint32_t cit_suite_strength(const struct CitSuite *suite);

/**
 * Value name at one cell of the suite, borrowed from the handle; null when
 * an index is out of range or the handle is null.
 *
 * # Safety
 * `suite` must be null or a live handle from [`cit_generate`].
 */
const char *cit_suite_value_name(const struct CitSuite *suite, uintptr_t row, uintptr_t column);

/**
 * Serializes the suite as the stable JSON document and writes a
 * caller-owned string to `*out`.
 *
 * # Safety
 * `suite` must be a live handle from [`cit_generate`] and `out` a writable
 * pointer slot. Release the string with [`cit_string_free`].
 */
enum CitStatus cit_suite_to_json(const struct CitSuite *suite, char **out);

/**
 * Frees a string returned through a `char **` out-parameter of this API.
 * Passing null is a no-op.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this API that has not been
 * freed before.
 */
void cit_string_free(char *s);

/**
 * Re-checks the suite against an independent brute-force oracle: every row
 * must satisfy the constraints and every coverable value combination of the
 * suite's strength must appear in some row. Returns `CIT_STATUS_OK` when
 * the suite certifies, `CIT_STATUS_VERIFICATION_FAILED` (with a report in
 * the last-error message) when it does not.
 *
 * # Safety
 * `suite` must be a live handle from [`cit_generate`].
 */
enum CitStatus cit_verify(const struct CitSuite *suite);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CITGEN_H */
