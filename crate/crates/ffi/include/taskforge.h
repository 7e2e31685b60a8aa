#ifndef TASKFORGE_H
#define TASKFORGE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call. The first four values match the CLI exit codes.
 */
typedef enum TfStatus {
  TF_STATUS_OK = 0,
  /**
   * Bad input: syntax, schema or model errors.
   */
  TF_STATUS_VALIDATION = 1,
  /**
   * Input was valid but some sub-task could not be assigned.
   */
  TF_STATUS_INFEASIBLE = 2,
  TF_STATUS_INTERNAL = 3,
  TF_STATUS_NULL_POINTER = 4,
  TF_STATUS_INVALID_UTF8 = 5,
} TfStatus;

/**
 * Büchi automaton translated from a formula.
 */
typedef struct TfAutomaton TfAutomaton;

/**
 * Parsed LTL formula.
 */
typedef struct TfFormula TfFormula;

/**
 * Result of an allocation run.
 */
typedef struct TfReport TfReport;

/**
 * Validated scenario.
 */
typedef struct TfScenario TfScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *tf_last_error(void);

/**
 * Library version as a static string.
 */
const char *tf_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void tf_string_free(char *s);

/**
 * Parses an LTL formula.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum TfStatus tf_formula_parse(const char *text, struct TfFormula **out);

/**
 * Writes the formula's canonical text to `out`; free it with
 * [`tf_string_free`].
 *
 * # Safety
 * `f` must be a live formula; `out` must be writable.
 */
enum TfStatus tf_formula_to_string(const struct TfFormula *f, char **out);

/**
 * # Safety
 * `f` must be null or a formula from [`tf_formula_parse`] not yet freed.
 */
void tf_formula_free(struct TfFormula *f);

/**
 * Translates a formula into a Büchi automaton.
 *
 * # Safety
 * `f` must be a live formula; `out` must be writable.
 */
enum TfStatus tf_automaton_translate(const struct TfFormula *f, struct TfAutomaton **out);

/**
 * Number of states, or 0 for null.
 *
 * # Safety
 * `a` must be null or a live automaton.
 */
size_t tf_automaton_num_states(const struct TfAutomaton *a);

/**
 * Whether the automaton accepts no word at all. Null counts as empty.
 *
 * # Safety
 * `a` must be null or a live automaton.
 */
bool tf_automaton_is_empty(const struct TfAutomaton *a);

/**
 * Writes the automaton in HOA format to `out`; free it with
 * [`tf_string_free`].
 *
 * # Safety
 * `a` must be a live automaton; `out` must be writable.
 */
enum TfStatus tf_automaton_to_hoa(const struct TfAutomaton *a, char **out);

/**
 * # Safety
 * `a` must be null or an automaton from this library not yet freed.
 */
void tf_automaton_free(struct TfAutomaton *a);

/**
 * Loads and validates a scenario file.
 *
 * # Safety
 * `path` must be a nul-terminated string; `out` must be writable.
 */
enum TfStatus tf_scenario_load(const char *path, struct TfScenario **out);

/**
 * Parses and validates a scenario from JSON text.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum TfStatus tf_scenario_parse(const char *json, struct TfScenario **out);

/**
 * # Safety
 * `s` must be null or a live scenario.
 */
size_t tf_scenario_num_robots(const struct TfScenario *s);

/**
 * # Safety
 * `s` must be null or a live scenario.
 */
size_t tf_scenario_num_tasks(const struct TfScenario *s);

/**
 * # Safety
 * `s` must be null or a scenario from this library not yet freed.
 */
void tf_scenario_free(struct TfScenario *s);

/**
 * Runs the full pipeline: progress, cost tables, token allocation and,
 * unless `skip_optimal`, the exhaustive baseline.
 *
 * Returns [`TfStatus::Infeasible`] when some sub-task stays unassigned; the
 * report is still written to `out` in that case and must be freed.
 *
 * # Safety
 * `s` must be a live scenario; `out` must be writable.
 */
enum TfStatus tf_allocate(const struct TfScenario *s, bool skip_optimal, struct TfReport **out);

/**
 * Number of new sub-tasks in the report, or 0 for null.
 *
 * # Safety
 * `r` must be null or a live report.
 */
size_t tf_report_num_tasks(const struct TfReport *r);

/**
 * Copies the token assignment into `buf`: entry `j` is the 1-based robot
 * holding sub-task `j`, or 0. Copies at most `len` entries and returns the
 * number of sub-tasks.
 *
 * # Safety
 * `r` must be null or a live report; `buf` must hold `len` entries or be null
 * with `len` 0.
 */
size_t tf_report_token_assignment(const struct TfReport *r, size_t *buf, size_t len);

/**
 * Total cost of the token assignment; infinity if incomplete, NaN for null.
 *
 * # Safety
 * `r` must be null or a live report.
 */
double tf_report_token_cost(const struct TfReport *r);

/**
 * Total cost of the optimal assignment; NaN if it was skipped or for null.
 *
 * # Safety
 * `r` must be null or a live report.
 */
double tf_report_optimal_cost(const struct TfReport *r);

/**
 * Whether every sub-task was assigned. Null counts as incomplete.
 *
 * # Safety
 * `r` must be null or a live report.
 */
bool tf_report_is_complete(const struct TfReport *r);

/**
 * Writes the full report as JSON to `out`; free it with
 * [`tf_string_free`].
 *
 * # Safety
 * `r` must be a live report; `out` must be writable.
 */
enum TfStatus tf_report_to_json(const struct TfReport *r, char **out);

/**
 * # Safety
 * `r` must be null or a report from this library not yet freed.
 */
void tf_report_free(struct TfReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TASKFORGE_H */
