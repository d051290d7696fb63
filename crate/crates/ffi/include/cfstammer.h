#ifndef CFSTAMMER_H
#define CFSTAMMER_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CfsStatus {
  CFS_STATUS_OK = 0,
  CFS_STATUS_NULL_POINTER = 1,
  CFS_STATUS_INVALID_UTF8 = 2,
  CFS_STATUS_INVALID_ARGUMENT = 3,
  CFS_STATUS_UNKNOWN_FAMILY = 4,
  CFS_STATUS_STREAM_EXHAUSTED = 5,
  CFS_STATUS_DEGENERATE_GROWTH = 6,
  CFS_STATUS_OUT_OF_RANGE = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  CFS_STATUS_INTERNAL = 8,
} CfsStatus;

/**
 * A letter stream of a family.
 */
typedef struct CfsStream CfsStream;

typedef struct CfsWitnessList CfsWitnessList;

/**
 * One repetition: the word begins with `U V^w`, `|U| = r`, `|V| = s`,
 * `w = w_num / w_den` in lowest terms.
 */
typedef struct CfsWitness {
  uint64_t r;
  uint64_t s;
  uint64_t w_num;
  uint64_t w_den;
} CfsWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *cfs_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cfs_string_free(char *s);

/**
 * Opens a stream from a descriptor such as `"davison theta=golden k=2"`.
 *
 * # Safety
 * `descriptor` must be a valid C string and `out` a valid pointer.
 */
enum CfsStatus cfs_stream_new(const char *descriptor, struct CfsStream **out);

/**
 * Writes the next letter to `out`.
 *
 * # Safety
 * `stream` must come from [`cfs_stream_new`]; `out` must be valid.
 */
enum CfsStatus cfs_stream_next(struct CfsStream *stream, uint64_t *out);

/**
 * Writes the next `len` letters to `buf`.
 *
 * # Safety
 * `stream` must come from [`cfs_stream_new`]; `buf` must hold `len` values.
 */
enum CfsStatus cfs_stream_fill(struct CfsStream *stream, uint64_t *buf, size_t len);

/**
 * Number of letters read so far.
 *
 * # Safety
 * `stream` must come from [`cfs_stream_new`] or be null.
 */
size_t cfs_stream_position(const struct CfsStream *stream);

/**
 * # Safety
 * `stream` must come from [`cfs_stream_new`] and not have been freed.
 */
void cfs_stream_free(struct CfsStream *stream);

/**
 * Continuant `K(a_1, ..., a_len)` as a decimal string; `K()` is 1.
 *
 * # Safety
 * `letters` must hold `len` values; `out` must be valid.
 */
enum CfsStatus cfs_continuant(const uint64_t *letters, size_t len, char **out);

/**
 * Repetitions `U V^w` with `|U| <= max_r` and `w >= min_w_num / min_w_den`,
 * sorted by `s` then `r`.
 *
 * # Safety
 * `letters` must hold `len` values; `out` must be valid.
 */
enum CfsStatus cfs_detect_repetitions(const uint64_t *letters,
                                      size_t len,
                                      size_t max_r,
                                      uint64_t min_w_num,
                                      uint64_t min_w_den,
                                      struct CfsWitnessList **out);

/**
 * # Safety
 * `list` must come from this library or be null.
 */
size_t cfs_witness_list_len(const struct CfsWitnessList *list);

/**
 * # Safety
 * `list` must come from this library; `out` must be valid.
 */
enum CfsStatus cfs_witness_list_get(const struct CfsWitnessList *list,
                                    size_t index,
                                    struct CfsWitness *out);

/**
 * # Safety
 * `list` must come from this library and not have been freed.
 */
void cfs_witness_list_free(struct CfsWitnessList *list);

/**
 * Full analysis report as JSON. `prefix_len` and `scales` use the library
 * defaults when 0.
 *
 * # Safety
 * `descriptor` must be a valid C string; `out` must be valid.
 */
enum CfsStatus cfs_analyze_json(const char *descriptor,
                                size_t prefix_len,
                                size_t scales,
                                char **out);

/**
 * Spectral radii of the letter matrices, their mean log `X`, and the
 * block-growth threshold, as JSON.
 *
 * # Safety
 * `letters` must hold `len` values; `out` must be valid.
 */
enum CfsStatus cfs_matrix_report_json(const uint64_t *letters, size_t len, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CFSTAMMER_H */
