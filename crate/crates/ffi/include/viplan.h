#ifndef VIPLAN_H
#define VIPLAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ViplanStatus {
  VIPLAN_STATUS_OK = 0,
  VIPLAN_STATUS_NULL_POINTER = 1,
  VIPLAN_STATUS_INVALID_UTF8 = 2,
  VIPLAN_STATUS_PARSE = 3,
  VIPLAN_STATUS_INVALID_ARGUMENT = 4,
  VIPLAN_STATUS_UNSOLVABLE = 5,
  VIPLAN_STATUS_BUDGET_EXCEEDED = 6,
  VIPLAN_STATUS_GENERATION = 7,
  VIPLAN_STATUS_PANIC = 8,
} ViplanStatus;

/**
 * Answer to a yes/no question as read from a model reply.
 */
typedef enum ViplanVerdict {
  VIPLAN_VERDICT_NO = 0,
  VIPLAN_VERDICT_YES = 1,
  VIPLAN_VERDICT_UNPARSABLE = -1,
} ViplanVerdict;

/**
 * A parsed and grounded planning task.
 */
typedef struct ViplanTask ViplanTask;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. Owned by the library and
 * valid until the next call on the same thread.
 */
const char *viplan_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void viplan_string_free(char *s);

/**
 * Parses and grounds a domain/problem pair.
 *
 * # Safety
 * `domain` and `problem` must be nul-terminated; `out` must be writable.
 */
enum ViplanStatus viplan_task_from_pddl(const char *domain,
                                        const char *problem,
                                        struct ViplanTask **out);

/**
 * # Safety
 * `task` must come from [`viplan_task_from_pddl`] and not have been freed.
 */
void viplan_task_free(struct ViplanTask *task);

/**
 * Number of ground actions, or 0 for a null task.
 *
 * # Safety
 * `task` must be null or a live task.
 */
size_t viplan_task_num_actions(const struct ViplanTask *task);

/**
 * Optimal plan from the initial state, one `name(arg, ...)` per line.
 * `budget` caps node expansions; 0 selects the default.
 *
 * # Safety
 * `task` must be a live task; `out_plan` must be writable.
 */
enum ViplanStatus viplan_plan(const struct ViplanTask *task, size_t budget, char **out_plan);

/**
 * Checks that `plan` (one action per line, blank lines ignored) is
 * applicable from the initial state and reaches the goal.
 *
 * # Safety
 * `task` must be a live task, `plan` nul-terminated, `out_valid` writable.
 */
enum ViplanStatus viplan_validate_plan(const struct ViplanTask *task,
                                       const char *plan,
                                       bool *out_valid);

/**
 * Reads a yes/no verdict from a reply; with `cot`, from its last
 * `<answer>` tag. Null or non-UTF-8 text is unparsable.
 *
 * # Safety
 * `text` must be null or nul-terminated.
 */
enum ViplanVerdict viplan_parse_yes_no(const char *text, bool cot);

/**
 * Success proportion and its binomial standard error.
 *
 * # Safety
 * `out_mean` and `out_sem` must be writable.
 */
enum ViplanStatus viplan_success_rate(size_t successes,
                                      size_t total,
                                      double *out_mean,
                                      double *out_sem);

/**
 * Blocksworld problem text for `split` ("simple", "medium" or "hard").
 * Deterministic in `seed`.
 *
 * # Safety
 * `split` must be nul-terminated; `out_problem` writable.
 */
enum ViplanStatus viplan_generate_bw_problem(const char *split, uint64_t seed, char **out_problem);

/**
 * Text of the bundled Blocksworld domain, for use with
 * [`viplan_task_from_pddl`]. Static; do not free.
 */
const char *viplan_bw_domain(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VIPLAN_H */
