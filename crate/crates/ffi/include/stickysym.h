#ifndef STICKYSYM_H
#define STICKYSYM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum SsStatus {
  SS_STATUS_OK = 0,
  SS_STATUS_NULL_POINTER = 1,
  SS_STATUS_INVALID_ARGUMENT = 2,
  SS_STATUS_PARSE = 3,
  SS_STATUS_OVERLAP = 4,
  SS_STATUS_RANK_DEFICIENT = 5,
  SS_STATUS_INFEASIBLE_ENDPOINT = 6,
  SS_STATUS_COLOR_RADII_CONFLICT = 7,
  SS_STATUS_OVERFLOW = 8,
  SS_STATUS_PANIC = 9,
  SS_STATUS_OTHER = 10,
} SsStatus;

// Opaque sphere cluster.
typedef struct SsCluster SsCluster;

// Opaque symmetry report.
typedef struct SsReport SsReport;

// Tunable subset of the symmetry options.
typedef struct SsOptions {
  uint64_t seed;
  size_t retries;
  size_t nmax;
  size_t nr;
  double tol;
  double sigma;
  double beta;
  // Nonzero to use the full group with inversions.
  int32_t include_inversions;
  // Sampling steps applied to the cluster before the analysis.
  size_t sample_steps;
  size_t jobs;
} SsOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or an empty string. The
// pointer stays valid until the next failing call on the same thread.
const char *ss_last_error(void);

// Default options.
struct SsOptions ss_options_default(void);

// Parses a cluster from JSON (`{"positions": [[x,y,z],...], "radii": [...]}`).
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum SsStatus ss_cluster_from_json(const char *json, struct SsCluster **out);

// Builds a named cluster: `loop:N`, `chain:N`, `octahedron`,
// `polytetrahedron` or `dimer`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum SsStatus ss_cluster_builtin(const char *name, struct SsCluster **out);

// Number of spheres, or 0 for a null handle.
//
// # Safety
// `cluster` must be null or a live handle.
size_t ss_cluster_len(const struct SsCluster *cluster);

// # Safety
// `cluster` must be null or a handle not yet freed.
void ss_cluster_free(struct SsCluster *cluster);

// Computes the sticky symmetry group. `options` may be null for defaults.
//
// # Safety
// `cluster` must be a live handle, `options` null or valid, `out` valid.
enum SsStatus ss_symmetry(const struct SsCluster *cluster,
                          const struct SsOptions *options,
                          struct SsReport **out);

// Restricts a report to a coloring given as comma-separated labels.
//
// # Safety
// `report` must be a live handle, `labels` a NUL-terminated string and
// `out` a valid pointer.
enum SsStatus ss_report_color(const struct SsReport *report,
                              const char *labels,
                              struct SsReport **out);

// Symmetry number σ, or 0 for a null handle.
//
// # Safety
// `report` must be null or a live handle.
uint64_t ss_report_sigma(const struct SsReport *report);

// Order of the point group, or 0 for a null handle.
//
// # Safety
// `report` must be null or a live handle.
uint64_t ss_report_point_group_order(const struct SsReport *report);

// Number of elements inferred by group closure rather than found by a path.
//
// # Safety
// `report` must be null or a live handle.
uint64_t ss_report_closure_inferred(const struct SsReport *report);

// Counting number; fails with `SS_STATUS_OVERFLOW` if it exceeds 64 bits.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum SsStatus ss_report_counting_number(const struct SsReport *report, uint64_t *out);

// Serializes a report to JSON; release the string with [`ss_string_free`].
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum SsStatus ss_report_to_json(const struct SsReport *report, char **out);

// Reads a report serialized by [`ss_report_to_json`] or the CLI.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum SsStatus ss_report_from_json(const char *json, struct SsReport **out);

// # Safety
// `report` must be null or a handle not yet freed.
void ss_report_free(struct SsReport *report);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void ss_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STICKYSYM_H */
