#ifndef SEQSEM_H
#define SEQSEM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SeqsemStatus {
  SEQSEM_STATUS_OK = 0,
  SEQSEM_STATUS_NULL_POINTER = 1,
  SEQSEM_STATUS_INVALID_UTF8 = 2,
  SEQSEM_STATUS_PARSE_ERROR = 3,
  SEQSEM_STATUS_INVALID_ARGUMENT = 4,
  SEQSEM_STATUS_IO_ERROR = 5,
  SEQSEM_STATUS_BUFFER_TOO_SMALL = 6,
  SEQSEM_STATUS_PANIC = 7,
} SeqsemStatus;

/**
 * An energy parameter set.
 */
typedef struct SeqsemParams SeqsemParams;

/**
 * The sequence partition function of one structure, with the parameters
 * it was computed from.
 */
typedef struct SeqsemPartition SeqsemPartition;

/**
 * A validated secondary structure.
 */
typedef struct SeqsemStructure SeqsemStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failed call on this thread; empty after a
 * successful call. Valid until the next call on the same thread.
 */
const char *seqsem_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *seqsem_version(void);

/**
 * The built-in parameter set.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum SeqsemStatus seqsem_params_default(struct SeqsemParams **out);

/**
 * Load a parameter file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SeqsemStatus seqsem_params_from_file(const char *path, struct SeqsemParams **out);

/**
 * Rescale RT to the given temperature in degrees Celsius.
 *
 * # Safety
 * `params` must be a live handle.
 */
enum SeqsemStatus seqsem_params_set_temperature(struct SeqsemParams *params, double celsius);

/**
 * Copy the SHA-256 of the parameter source, as hex, into `buf`.
 *
 * # Safety
 * `params` must be a live handle and `buf` writable for `len` bytes.
 */
enum SeqsemStatus seqsem_params_checksum(const struct SeqsemParams *params, char *buf, size_t len);

/**
 * # Safety
 * `params` must be NULL or a handle not yet freed.
 */
void seqsem_params_free(struct SeqsemParams *params);

/**
 * Parse a dot-bracket string or pair-list text.
 *
 * # Safety
 * `text` must be NUL-terminated and `out` a valid pointer.
 */
enum SeqsemStatus seqsem_structure_parse(const char *structure, struct SeqsemStructure **out);

/**
 * Length of the structure, 0 for NULL.
 *
 * # Safety
 * `structure` must be NULL or a live handle.
 */
size_t seqsem_structure_len(const struct SeqsemStructure *structure);

/**
 * Number of arcs, 0 for NULL.
 *
 * # Safety
 * `structure` must be NULL or a live handle.
 */
size_t seqsem_structure_arc_count(const struct SeqsemStructure *structure);

/**
 * # Safety
 * `structure` must be NULL or a handle not yet freed.
 */
void seqsem_structure_free(struct SeqsemStructure *structure);

/**
 * Compute the partition function over all sequences for `structure`. The
 * result keeps its own copies of both inputs.
 *
 * # Safety
 * `params` and `structure` must be live handles and `out` a valid pointer.
 */
enum SeqsemStatus seqsem_partition_new(const struct SeqsemParams *params,
                                       const struct SeqsemStructure *structure,
                                       struct SeqsemPartition **out);

/**
 * `ln Q(S)`.
 *
 * # Safety
 * `partition` must be a live handle and `out` a valid pointer.
 */
enum SeqsemStatus seqsem_partition_log_q(const struct SeqsemPartition *partition, double *out);

/**
 * The 16 entries `ln Q(a, b)` of the arc with the given index (arcs sorted
 * by left end, 0-based), row-major with bases ordered A, U, C, G.
 *
 * # Safety
 * `partition` must be a live handle and `out` writable for 16 doubles.
 */
enum SeqsemStatus seqsem_partition_arc_table(const struct SeqsemPartition *partition,
                                             size_t arc,
                                             double *out);

/**
 * # Safety
 * `partition` must be NULL or a handle not yet freed.
 */
void seqsem_partition_free(struct SeqsemPartition *partition);

/**
 * Probability that positions `start..start+len(pattern)-1` carry `pattern`.
 *
 * # Safety
 * `partition` must be a live handle, `pattern` NUL-terminated and `out` valid.
 */
enum SeqsemStatus seqsem_pattern_probability(const struct SeqsemPartition *partition,
                                             size_t start,
                                             const char *pattern,
                                             double *out);

/**
 * Draw `index` of the ensemble seeded with `seed`, written as a string of
 * `n` bases plus NUL. Matches `seqsem sample --seed`. `log_prob` and
 * `energy` may be NULL.
 *
 * # Safety
 * `partition` must be a live handle, `buf` writable for `len` bytes.
 */
enum SeqsemStatus seqsem_sample(const struct SeqsemPartition *partition,
                                uint64_t seed,
                                uint64_t index,
                                char *buf,
                                size_t len,
                                double *log_prob,
                                double *energy);

/**
 * Draws `0..count` of the ensemble seeded with `seed`, concatenated without
 * separators into `buf` (`count * n` bytes plus one NUL).
 *
 * # Safety
 * `partition` must be a live handle, `buf` writable for `len` bytes.
 */
enum SeqsemStatus seqsem_sample_ensemble(const struct SeqsemPartition *partition,
                                         size_t count,
                                         uint64_t seed,
                                         char *buf,
                                         size_t len);

/**
 * `eta(sequence, structure)`; `INFINITY` when a pair is inadmissible.
 *
 * # Safety
 * Handles must be live, `seq` NUL-terminated and `out` valid.
 */
enum SeqsemStatus seqsem_energy(const struct SeqsemParams *params,
                                const char *seq,
                                const struct SeqsemStructure *structure,
                                double *out);

/**
 * Minimum free energy structure of `seq` as dot-bracket in `buf`.
 *
 * # Safety
 * `params` must be live, `seq` NUL-terminated, `buf` writable for `len`
 * bytes; `energy` may be NULL.
 */
enum SeqsemStatus seqsem_fold_mfe(const struct SeqsemParams *params,
                                  const char *seq,
                                  char *buf,
                                  size_t len,
                                  double *energy);

/**
 * `ln Q(sequence)` over all structures.
 *
 * # Safety
 * `params` must be live, `seq` NUL-terminated and `out` valid.
 */
enum SeqsemStatus seqsem_sequence_log_partition(const struct SeqsemParams *params,
                                                const char *seq,
                                                double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEQSEM_H */
