#ifndef VOROCELL_H
#define VOROCELL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VcStatus {
  VC_STATUS_OK = 0,
  VC_STATUS_NULL_POINTER = 1,
  VC_STATUS_INVALID_UTF8 = 2,
  VC_STATUS_UNKNOWN_FAMILY = 3,
  VC_STATUS_PARSE_ERROR = 4,
  VC_STATUS_INPUT_ERROR = 5,
  VC_STATUS_NOT_APPLICABLE = 6,
  VC_STATUS_OUT_OF_RANGE = 7,
  VC_STATUS_INVARIANT_VIOLATION = 8,
  VC_STATUS_PANIC = 9,
} VcStatus;

typedef enum VcClaim {
  VC_CLAIM_POLYHEDRAL = 0,
  VC_CLAIM_NON_POLYHEDRAL = 1,
  VC_CLAIM_BOUNDED = 2,
  VC_CLAIM_UNBOUNDED = 3,
  VC_CLAIM_INCONCLUSIVE = 4,
} VcClaim;

// Opaque analysis report.
typedef struct VcReport VcReport;

// Opaque generator spec.
typedef struct VcSpec VcSpec;

// Counts of one truncation radius.
typedef struct VcRow {
  size_t point_count;
  size_t reciprocal_count;
  size_t extreme_count;
  size_t facet_count;
  bool origin_extreme;
  bool all_reciprocal_extreme;
  bool truncation_bounded;
} VcRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *vc_last_error(void);

// Library version as a static string.
const char *vc_version(void);

// # Safety
// `name` is a nul-terminated string; `out` points to writable storage.
enum VcStatus vc_spec_from_family(const char *name, struct VcSpec **out);

// Parses and validates a spec in the JSON file format.
//
// # Safety
// `json` is a nul-terminated string; `out` points to writable storage.
enum VcStatus vc_spec_from_json(const char *json, struct VcSpec **out);

// # Safety
// `spec` is null or a handle from `vc_spec_from_*` not yet freed.
void vc_spec_free(struct VcSpec *spec);

// Runs the analysis. `schedule` is `"R1,R2,..."` or null for the default.
//
// # Safety
// `spec` is a live handle; `schedule` is null or nul-terminated; `out`
// points to writable storage.
enum VcStatus vc_analyze(const struct VcSpec *spec, const char *schedule, struct VcReport **out);

// # Safety
// `report` is null or a handle from [`vc_analyze`] not yet freed.
void vc_report_free(struct VcReport *report);

// # Safety
// `report` is a live handle; both outputs point to writable storage.
enum VcStatus vc_report_polyhedrality(const struct VcReport *report,
                                      enum VcClaim *claim_out,
                                      bool *certified_out);

// # Safety
// `report` is a live handle; both outputs point to writable storage.
enum VcStatus vc_report_boundedness(const struct VcReport *report,
                                    enum VcClaim *claim_out,
                                    bool *certified_out);

// Whether the report carries the "approximated input" marker.
//
// # Safety
// `report` is a live handle; `out` points to writable storage.
enum VcStatus vc_report_approximated(const struct VcReport *report, bool *out);

// # Safety
// `report` is a live handle; `out` points to writable storage.
enum VcStatus vc_report_row_count(const struct VcReport *report, size_t *out);

// # Safety
// `report` is a live handle; `out` points to writable storage.
enum VcStatus vc_report_row(const struct VcReport *report, size_t index, struct VcRow *out);

// The report as JSON. Free the string with [`vc_string_free`].
//
// # Safety
// `report` is a live handle; `out` points to writable storage.
enum VcStatus vc_report_json(const struct VcReport *report, char **out);

// The report's figure as an SVG document. Free with [`vc_string_free`].
//
// # Safety
// `report` is a live handle; `out` points to writable storage.
enum VcStatus vc_report_svg(const struct VcReport *report, char **out);

// # Safety
// `s` is null or a string returned by this library, not yet freed.
void vc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VOROCELL_H */
