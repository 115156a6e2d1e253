#ifndef LEVYLAB_H
#define LEVYLAB_H

/* Generated by cbindgen from levylab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by the fallible entry points.
 */
typedef enum {
  LEVYLAB_STATUS_OK = 0,
  LEVYLAB_STATUS_PARSE_ERROR = 1,
  LEVYLAB_STATUS_REGISTRY_ERROR = 2,
  LEVYLAB_STATUS_CLASSIFY_ERROR = 3,
  LEVYLAB_STATUS_TRANSFER_ERROR = 4,
  LEVYLAB_STATUS_EVAL_ERROR = 5,
  LEVYLAB_STATUS_MODEL_ERROR = 6,
  LEVYLAB_STATUS_ARGUMENT_ERROR = 7,
} LevylabStatus;

/**
 * Opaque formula handle.
 */
typedef struct LevylabFormula LevylabFormula;

/**
 * Opaque finite transitive model handle.
 */
typedef struct LevylabModel LevylabModel;

/**
 * Opaque predicate registry handle.
 */
typedef struct LevylabRegistry LevylabRegistry;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread; do not free.
 */
const char *levylab_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a levylab function documented as
 * caller-owned, and not freed before.
 */
void levylab_string_free(char *s);

/**
 * A registry holding exactly the built-in predicates.
 */
LevylabRegistry *levylab_registry_new(void);

/**
 * The registry the shipped statement corpus is written against.
 */
LevylabRegistry *levylab_registry_corpus(void);

/**
 * Merges registry-file text (one entry per line) into the registry.
 *
 * # Safety
 * `registry` must be a live registry handle; `text` must be a valid
 * NUL-terminated string.
 */
LevylabStatus levylab_registry_load(LevylabRegistry *registry, const char *text);

/**
 * Releases a registry handle.
 *
 * # Safety
 * `registry` must be a live registry handle or NULL.
 */
void levylab_registry_free(LevylabRegistry *registry);

/**
 * Parses formula text against the registry. NULL on failure.
 *
 * # Safety
 * `registry` must be a live registry handle; `text` a valid NUL-terminated
 * string.
 */
LevylabFormula *levylab_parse(const LevylabRegistry *registry, const char *text);

/**
 * Releases a formula handle.
 *
 * # Safety
 * `formula` must be a live formula handle or NULL.
 */
void levylab_formula_free(LevylabFormula *formula);

/**
 * Canonical text of the formula; caller owns the string.
 *
 * # Safety
 * `formula` must be a live formula handle.
 */
char *levylab_formula_print(const LevylabFormula *formula);

/**
 * Ordinal-bounded desugaring; returns a new handle.
 *
 * # Safety
 * `formula` must be a live formula handle.
 */
LevylabFormula *levylab_desugar_ord(const LevylabFormula *formula);

/**
 * Negation normal form; returns a new handle.
 *
 * # Safety
 * `formula` must be a live formula handle.
 */
LevylabFormula *levylab_to_nnf(const LevylabFormula *formula);

/**
 * 1 when every unbounded quantifier is ordinal-bounded, 0 otherwise,
 * negative on argument errors.
 *
 * # Safety
 * `formula` must be a live formula handle.
 */
int32_t levylab_ordinal_bounded_only(const LevylabFormula *formula);

/**
 * Classifies the formula and returns the stable class rendering
 * (`Delta0`, `Sigma1`, `Pi2`, ...); caller owns the string. NULL on error.
 * `minimal_rules` nonzero selects the minimal bounded-quantifier rules.
 *
 * # Safety
 * `registry` and `formula` must be live handles.
 */
char *levylab_classify_name(const LevylabRegistry *registry,
                            const LevylabFormula *formula,
                            int32_t minimal_rules);

/**
 * Runs the transfer gate with `params` declared as `name:sort,...`
 * (NULL or empty for none) and returns the verdict as a JSON object
 * `{outcome, reason, stripped_prefix, matrix_class, trace}`; caller owns
 * the string. NULL on error.
 *
 * # Safety
 * `registry` and `formula` must be live handles; `params` NULL or a valid
 * NUL-terminated string.
 */
char *levylab_transfer_json(const LevylabRegistry *registry,
                            const LevylabFormula *formula,
                            const char *params);

/**
 * Builds the cumulative stage model V_rank, rank at most 5. NULL on error.
 */
LevylabModel *levylab_model_stage(uint32_t rank);

/**
 * Releases a model handle.
 *
 * # Safety
 * `model` must be a live model handle or NULL.
 */
void levylab_model_free(LevylabModel *model);

/**
 * Number of elements in the model, or -1 on argument errors.
 *
 * # Safety
 * `model` must be a live model handle.
 */
int64_t levylab_model_len(const LevylabModel *model);

/**
 * The dump format: one Ackermann code per line, ascending; caller owns the
 * string. NULL on error.
 *
 * # Safety
 * `model` must be a live model handle.
 */
char *levylab_model_dump(const LevylabModel *model);

/**
 * Evaluates a formula in the model under an assignment written as
 * `var=code,...` of Ackermann codes (NULL or empty for none). Returns 1 for
 * true, 0 for false, -1 on failure.
 *
 * # Safety
 * `registry`, `formula`, and `model` must be live handles; `assign` NULL or
 * a valid NUL-terminated string.
 */
int32_t levylab_eval(const LevylabRegistry *registry,
                     const LevylabFormula *formula,
                     const LevylabModel *model,
                     const char *assign);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEVYLAB_H */
