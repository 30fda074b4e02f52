#ifndef CONNFAIR_H
#define CONNFAIR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum CfdStatus {
  CFD_STATUS_OK = 0,
  /**
   * A required pointer was null or a string was not UTF-8.
   */
  CFD_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The JSON text could not be parsed.
   */
  CFD_STATUS_PARSE_ERROR = 2,
  /**
   * The input was well formed but violates an instance invariant.
   */
  CFD_STATUS_INPUT_ERROR = 3,
  /**
   * The requested method does not apply to this problem or graph.
   */
  CFD_STATUS_ROUTING_ERROR = 4,
  /**
   * The brute-force oracle refused the instance as too large.
   */
  CFD_STATUS_BUDGET_EXCEEDED = 5,
  CFD_STATUS_INTERNAL = 6,
} CfdStatus;

typedef enum CfdFamily {
  CFD_FAMILY_PATH = 0,
  CFD_FAMILY_STAR = 1,
  CFD_FAMILY_TREE = 2,
  CFD_FAMILY_CYCLE = 3,
  CFD_FAMILY_CONNECTED = 4,
} CfdFamily;

typedef enum CfdProblem {
  CFD_PROBLEM_PROP = 0,
  CFD_PROBLEM_EF_COMPLETE = 1,
  CFD_PROBLEM_MMS = 2,
} CfdProblem;

typedef enum CfdMethod {
  CFD_METHOD_AUTO = 0,
  CFD_METHOD_ORACLE = 1,
  CFD_METHOD_GREEDY = 2,
  CFD_METHOD_PATH_DP = 3,
  CFD_METHOD_STAR = 4,
  CFD_METHOD_TREE_FPT = 5,
  CFD_METHOD_EF_PATH = 6,
  CFD_METHOD_MMS_TREE = 7,
} CfdMethod;

/**
 * Opaque instance handle.
 */
typedef struct CfdInstance CfdInstance;

/**
 * Opaque solver report handle.
 */
typedef struct CfdReport CfdReport;

/**
 * Oracle size limits.
 */
typedef struct CfdBudget {
  size_t max_items;
  size_t max_agents;
  uint64_t max_enumerated;
} CfdBudget;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cfd_version(void);

/**
 * Message for the last failed call on this thread, or NULL after a successful call.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *cfd_last_error(void);

/**
 * The default oracle limits.
 */
struct CfdBudget cfd_budget_default(void);

/**
 * Parses canonical instance JSON into `*out`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CfdStatus cfd_instance_from_json(const char *json, bool normalize, struct CfdInstance **out);

/**
 * Seeded random instance; `types` caps the number of distinct utility vectors.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum CfdStatus cfd_generate_random(uint64_t seed,
                                   enum CfdFamily family,
                                   size_t items,
                                   size_t agents,
                                   size_t types,
                                   uint32_t denom_bound,
                                   struct CfdInstance **out);

/**
 * The 8-cycle instance that has no MMS allocation.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum CfdStatus cfd_fixture_cycle8(struct CfdInstance **out);

/**
 * Releases an instance. NULL is ignored.
 *
 * # Safety
 * `inst` must come from this library and not be used afterwards.
 */
void cfd_instance_free(struct CfdInstance *inst);

/**
 * Number of agents, or 0 for NULL.
 *
 * # Safety
 * `inst` must be NULL or a live instance handle.
 */
size_t cfd_instance_agent_count(const struct CfdInstance *inst);

/**
 * Number of items, or 0 for NULL.
 *
 * # Safety
 * `inst` must be NULL or a live instance handle.
 */
size_t cfd_instance_vertex_count(const struct CfdInstance *inst);

/**
 * Canonical JSON of `inst` into `*out` (release with [`cfd_string_free`]).
 *
 * # Safety
 * `inst` must be a live instance handle and `out` a writable pointer.
 */
enum CfdStatus cfd_instance_to_json(const struct CfdInstance *inst, char **out);

/**
 * Decides `problem`. `budget` may be NULL for the defaults.
 *
 * # Safety
 * `inst` must be a live instance handle, `budget` NULL or valid, `out` writable.
 */
enum CfdStatus cfd_solve(const struct CfdInstance *inst,
                         enum CfdProblem problem,
                         enum CfdMethod method,
                         const struct CfdBudget *budget,
                         struct CfdReport **out);

/**
 * True for a yes-instance; false for no or NULL.
 *
 * # Safety
 * `report` must be NULL or a live report handle.
 */
bool cfd_report_decision(const struct CfdReport *report);

/**
 * The report as JSON, borrowed from the handle; NULL for NULL.
 *
 * # Safety
 * `report` must be NULL or a live report handle; the string dies with the handle.
 */
const char *cfd_report_json(const struct CfdReport *report);

/**
 * Releases a report. NULL is ignored.
 *
 * # Safety
 * `report` must come from this library and not be used afterwards.
 */
void cfd_report_free(struct CfdReport *report);

/**
 * Maximin shares as `{"method", "values"}` JSON. `method` must be `Auto`, `Oracle` or
 * `MmsTree`.
 *
 * # Safety
 * `inst` must be a live instance handle, `budget` NULL or valid, `out` writable.
 */
enum CfdStatus cfd_mms_values(const struct CfdInstance *inst,
                              enum CfdMethod method,
                              const struct CfdBudget *budget,
                              char **out);

/**
 * Checks allocation JSON against every fairness notion and writes the verdict JSON.
 * With `with_mms`, maximin shares are computed too.
 *
 * # Safety
 * `inst` must be a live instance handle, `allocation_json` NUL-terminated, `budget` NULL
 * or valid, `out` writable.
 */
enum CfdStatus cfd_verify(const struct CfdInstance *inst,
                          const char *allocation_json,
                          bool with_mms,
                          const struct CfdBudget *budget,
                          char **out);

/**
 * Releases a string returned through a `char **` parameter. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void cfd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONNFAIR_H */
