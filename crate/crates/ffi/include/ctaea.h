#ifndef CTAEA_H
#define CTAEA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CtaeaAlgorithm {
  /**
   * Adaptive CA/DA mating selection.
   */
  CTAEA_ALGORITHM_ADAPTIVE = 0,
  /**
   * Original restricted mating.
   */
  CTAEA_ALGORITHM_BASELINE = 1,
} CtaeaAlgorithm;

typedef enum CtaeaArchiveKind {
  CTAEA_ARCHIVE_KIND_CONVERGENCE = 0,
  CTAEA_ARCHIVE_KIND_DIVERSITY = 1,
} CtaeaArchiveKind;

/**
 * Result code of every fallible call.
 */
typedef enum CtaeaStatus {
  CTAEA_STATUS_OK = 0,
  CTAEA_STATUS_NULL_POINTER = 1,
  /**
   * Unknown problem, bad dimension, unsupported population size, ...
   */
  CTAEA_STATUS_INVALID_CONFIG = 2,
  /**
   * A precondition was broken (wrong buffer length, out-of-bounds input).
   */
  CTAEA_STATUS_CONTRACT_VIOLATION = 3,
  CTAEA_STATUS_EMPTY_FRONT = 4,
  CTAEA_STATUS_IO = 5,
  /**
   * Not valid UTF-8, or the library panicked.
   */
  CTAEA_STATUS_INTERNAL = 6,
} CtaeaStatus;

/**
 * Opaque benchmark problem.
 */
typedef struct CtaeaProblem CtaeaProblem;

/**
 * Opaque result of one optimization run.
 */
typedef struct CtaeaRecord CtaeaRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library from the same thread.
 */
const char *ctaea_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ctaea_version(void);

/**
 * Builds a benchmark by name (`"ctp6"`, `"dc1-dtlz1"`, ...). `m` and `n`
 * of 0 select the defaults.
 */
enum CtaeaStatus ctaea_problem_new(const char *name, size_t m, size_t n, struct CtaeaProblem **out);

void ctaea_problem_free(struct CtaeaProblem *problem);

/**
 * Decision dimension, objective count and inequality-constraint count.
 * Any output pointer may be null.
 */
enum CtaeaStatus ctaea_problem_dims(const struct CtaeaProblem *problem,
                                    size_t *n,
                                    size_t *m,
                                    size_t *n_constraints);

/**
 * Evaluates `x` (length n), writing m objectives to `f` and the constraint
 * violation to `cv`.
 */
enum CtaeaStatus ctaea_problem_evaluate(const struct CtaeaProblem *problem,
                                        const double *x,
                                        size_t x_len,
                                        double *f,
                                        size_t f_len,
                                        double *cv);

/**
 * Runs the optimizer for `generations` generations. `population` 0 picks
 * the default weight lattice size; `ref_resolution` 0 the default front
 * resolution (the front is built for the final IGD).
 */
enum CtaeaStatus ctaea_run(const struct CtaeaProblem *problem,
                           enum CtaeaAlgorithm algorithm,
                           size_t population,
                           uint64_t generations,
                           uint64_t seed,
                           size_t ref_resolution,
                           struct CtaeaRecord **out);

void ctaea_record_free(struct CtaeaRecord *record);

/**
 * Final IGD of the convergence archive. `defined` is set to false (and
 * `igd` to NaN) when the archive holds no feasible solution.
 */
enum CtaeaStatus ctaea_record_igd(const struct CtaeaRecord *record, double *igd, bool *defined);

/**
 * Generations executed and evaluations spent.
 */
enum CtaeaStatus ctaea_record_counts(const struct CtaeaRecord *record,
                                     uint64_t *generations,
                                     uint64_t *evaluations);

/**
 * Number of members in the chosen final archive (0 for a null record).
 */
size_t ctaea_record_archive_len(const struct CtaeaRecord *record, enum CtaeaArchiveKind kind);

/**
 * Copies the chosen archive into row-major `objectives` (len × m values)
 * and `cv` (len values).
 */
enum CtaeaStatus ctaea_record_archive(const struct CtaeaRecord *record,
                                      enum CtaeaArchiveKind kind,
                                      double *objectives,
                                      size_t objectives_len,
                                      double *cv,
                                      size_t cv_len);

/**
 * Serializes the full record as JSON into a new string released with
 * [`ctaea_string_free`].
 */
enum CtaeaStatus ctaea_record_to_json(const struct CtaeaRecord *record, char **out);

void ctaea_string_free(char *s);

/**
 * IGD of `n_points` row-major points against `n_reference` reference
 * points, all with `m` objectives.
 */
enum CtaeaStatus ctaea_igd(const double *points,
                           size_t n_points,
                           const double *reference,
                           size_t n_reference,
                           size_t m,
                           double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CTAEA_H */
