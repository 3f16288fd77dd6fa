#ifndef LINHEIGHT_H
#define LINHEIGHT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Return codes. The first four match the command-line exit codes.
typedef enum LcStatus {
  LC_STATUS_OK = 0,
  // Malformed input.
  LC_STATUS_SCHEMA = 1,
  // Some method could not run on this input.
  LC_STATUS_HYPOTHESIS = 2,
  // Two methods disagreed.
  LC_STATUS_MISMATCH = 3,
  LC_STATUS_NULL_POINTER = 4,
  LC_STATUS_INVALID_UTF8 = 5,
  // A bug: the library panicked.
  LC_STATUS_INTERNAL = 6,
} LcStatus;

// A parsed intersection problem.
typedef struct LcInstance LcInstance;

// The outcome of [`lc_intersect`].
typedef struct LcResult LcResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a JSON instance document into `*out`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer. The
// handle written to `*out` must be released with [`lc_instance_free`].
enum LcStatus lc_instance_from_json(const char *json, struct LcInstance **out);

// # Safety
// `instance` must be null or a handle from [`lc_instance_from_json`] that has
// not been freed.
void lc_instance_free(struct LcInstance *instance);

// Evaluates an instance at its place. A result handle is produced whenever the
// input is well formed, including when some method could not run or the
// methods disagree; the return value is then the result's status.
//
// # Safety
// `instance` must be a live handle and `out` a valid pointer. The handle
// written to `*out` must be released with [`lc_result_free`].
enum LcStatus lc_intersect(const struct LcInstance *instance, struct LcResult **out);

// # Safety
// `result` must be null or a live result handle.
enum LcStatus lc_result_status(const struct LcResult *result);

// Writes the agreed intersection number to `*out`. Finite-place values are
// integers returned as doubles.
//
// # Safety
// `result` must be a live result handle and `out` a valid pointer.
enum LcStatus lc_result_value(const struct LcResult *result, double *out);

// The result as a JSON document, or null on failure. Free with
// [`lc_string_free`].
//
// # Safety
// `result` must be a live result handle.
char *lc_result_to_json(const struct LcResult *result);

// # Safety
// `result` must be null or a live result handle.
void lc_result_free(struct LcResult *result);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void lc_string_free(char *s);

// Message for the most recent failure on this thread, or null. The pointer is
// valid until the next call into this library on the same thread.
const char *lc_last_error_message(void);

// Combinatorial distance between the lattice classes `x` and `y` of a
// building query document (`{"prime": …, "x": …, "y": …}`).
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum LcStatus lc_building_distance(const char *json, uint64_t *out);

// Library version, a static string.
const char *lc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINHEIGHT_H */
