#ifndef HYPERSTUTTER_H
#define HYPERSTUTTER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stdint.h>

typedef enum HsFragment {
  HS_FRAGMENT_HYPER_LTL = 0,
  HS_FRAGMENT_HYPER_LTL_C = 1,
  HS_FRAGMENT_HYPER_LTL_S = 2,
  HS_FRAGMENT_GHY_LTL_SC = 3,
} HsFragment;

typedef enum HsStatus {
  HS_STATUS_OK = 0,
  HS_STATUS_NULL_POINTER = 1,
  HS_STATUS_INVALID_UTF8 = 2,
  HS_STATUS_PARSE_ERROR = 3,
  HS_STATUS_EVAL_ERROR = 4,
  HS_STATUS_INVALID_ARGUMENT = 5,
  HS_STATUS_PANIC = 6,
} HsStatus;

typedef enum HsVariant {
  HS_VARIANT_STUTTER = 0,
  HS_VARIANT_CONTEXT = 1,
} HsVariant;

/**
 * Parsed hyper formula.
 */
typedef struct HsFormula HsFormula;

/**
 * Flattened arithmetic sentence.
 */
typedef struct HsSoa HsSoa;

/**
 * Named set of lasso traces.
 */
typedef struct HsTraceSet HsTraceSet;

typedef struct HsClassification {
  enum HsFragment fragment;
  bool prenex;
  bool past_free;
} HsClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * Valid until the next call on this thread.
 */
const char *hs_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or came from this library and was not freed before.
 */
void hs_string_free(char *s);

/**
 * # Safety
 * `src` is a NUL-terminated string; `out` is writable.
 */
enum HsStatus hs_formula_parse(const char *src, struct HsFormula **out);

/**
 * # Safety
 * `f` is null or a live handle from this library.
 */
void hs_formula_free(struct HsFormula *f);

/**
 * Writes the concrete syntax of `f`; release it with [`hs_string_free`].
 *
 * # Safety
 * `f` is a live handle; `out` is writable.
 */
enum HsStatus hs_formula_print(const struct HsFormula *f, char **out);

/**
 * # Safety
 * `f` is a live handle; `out` is writable.
 */
enum HsStatus hs_formula_classify(const struct HsFormula *f, struct HsClassification *out);

/**
 * Prenex normal form of a sentence as a new handle.
 *
 * # Safety
 * `f` is a live handle; `out` is writable.
 */
enum HsStatus hs_formula_to_pnf(const struct HsFormula *f, struct HsFormula **out);

/**
 * Parses the `name = prefix | loop` trace format.
 *
 * # Safety
 * `src` is a NUL-terminated string; `out` is writable.
 */
enum HsStatus hs_traces_parse(const char *src, struct HsTraceSet **out);

/**
 * # Safety
 * `l` is null or a live handle from this library.
 */
void hs_traces_free(struct HsTraceSet *l);

/**
 * Number of traces, or 0 for a null handle.
 *
 * # Safety
 * `l` is null or a live handle.
 */
uintptr_t hs_traces_len(const struct HsTraceSet *l);

/**
 * Whether the trace set satisfies the sentence.
 *
 * # Safety
 * `l` and `f` are live handles; `out` is writable.
 */
enum HsStatus hs_check(const struct HsTraceSet *l, const struct HsFormula *f, bool *out);

/**
 * Parses an arithmetic sentence, flattening compound terms.
 *
 * # Safety
 * `src` is a NUL-terminated string; `out` is writable.
 */
enum HsStatus hs_soa_parse(const char *src, struct HsSoa **out);

/**
 * # Safety
 * `s` is null or a live handle from this library.
 */
void hs_soa_free(struct HsSoa *s);

/**
 * Truth with numbers in `0..=bound` and sets over its subsets.
 *
 * # Safety
 * `s` is a live handle; `out` is writable.
 */
enum HsStatus hs_soa_eval(const struct HsSoa *s, uint64_t bound, bool *out);

/**
 * Hyper sentence produced by one of the two reductions.
 *
 * # Safety
 * `s` is a live handle; `out` is writable.
 */
enum HsStatus hs_reduce(const struct HsSoa *s, enum HsVariant variant, struct HsFormula **out);

/**
 * Trace pool the reduction's quantifiers range over at `bound`.
 *
 * # Safety
 * `s` is a live handle; `out` is writable.
 */
enum HsStatus hs_reduction_pool(const struct HsSoa *s,
                                enum HsVariant variant,
                                uint64_t bound,
                                struct HsTraceSet **out);

/**
 * Least `z` solving the period equation for `0 < n1 <= n2`, `n2 >= 2`.
 *
 * # Safety
 * `out` is writable.
 */
enum HsStatus hs_minimal_z(uint64_t n1, uint64_t n2, uint64_t *out);

/**
 * Library version as a static string.
 */
const char *hs_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERSTUTTER_H */
