#ifndef ADELIC_GAPS_H
#define ADELIC_GAPS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum AgStatus {
  AG_STATUS_OK = 0,
  AG_STATUS_NULL_POINTER = 1,
  AG_STATUS_INVALID_UTF8 = 2,
  AG_STATUS_PARSE = 3,
  AG_STATUS_INVALID_ARGUMENT = 4,
  AG_STATUS_DEGENERATE_ORBIT = 5,
  AG_STATUS_INTERNAL = 6,
} AgStatus;

// Nearest-neighbour distances of an orbit segment.
typedef struct AgGapReport AgGapReport;

// A point of the adele ring over some prime set.
typedef struct AgPoint AgPoint;

// A set of primes: finite, or all primes outside a finite exclusion list.
typedef struct AgPrimeSet AgPrimeSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer
// stays valid until the next library call on the same thread.
const char *ag_last_error_message(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void ag_string_free(char *s);

// Parses `all`, `all-except:2,3` or `2,3,5`.
//
// # Safety
// `spec` must be a NUL-terminated string; `out` must be writable.
enum AgStatus ag_prime_set_parse(const char *spec, struct AgPrimeSet **out);

// # Safety
// `set` must come from `ag_prime_set_parse` and not have been freed.
void ag_prime_set_free(struct AgPrimeSet *set);

// Parses a point such as `inf=351/100;default=0;2=1` over `primes`.
//
// # Safety
// `spec` must be a NUL-terminated string, `primes` a live handle and `out` writable.
enum AgStatus ag_point_parse(const char *spec,
                             const struct AgPrimeSet *primes,
                             struct AgPoint **out);

// # Safety
// `point` must come from `ag_point_parse` and not have been freed.
void ag_point_free(struct AgPoint *point);

// Writes the point in the grammar accepted by `ag_point_parse`.
//
// # Safety
// `point` must be a live handle and `out` writable.
enum AgStatus ag_point_to_string(const struct AgPoint *point, char **out);

// Distance between the cosets of `x` and `y` on the torus, as a rational string.
//
// # Safety
// `x` and `y` must be live handles and `out` writable.
enum AgStatus ag_torus_distance(const struct AgPoint *x, const struct AgPoint *y, char **out);

// Computes the gap report of the first `len` orbit points of `alpha`.
//
// # Safety
// `alpha` must be a live handle and `out` writable.
enum AgStatus ag_gap_report_new(const struct AgPoint *alpha,
                                uint64_t len,
                                struct AgGapReport **out);

// # Safety
// `report` must come from `ag_gap_report_new` and not have been freed.
void ag_gap_report_free(struct AgGapReport *report);

// Number of distinct gaps, or 0 for a NULL handle.
//
// # Safety
// `report` must be NULL or a live handle.
size_t ag_gap_report_gap_count(const struct AgGapReport *report);

// The distance from the `n`-th orbit point (1-based) to its nearest neighbour.
//
// # Safety
// `report` must be a live handle and `out` writable.
enum AgStatus ag_gap_report_delta(const struct AgGapReport *report, uint64_t n, char **out);

// The full report as JSON.
//
// # Safety
// `report` must be a live handle and `out` writable.
enum AgStatus ag_gap_report_to_json(const struct AgGapReport *report, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADELIC_GAPS_H */
