#ifndef EXACT_NIM_H
#define EXACT_NIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * `ruleset` argument values.
 */
#define EXN_RULESET_EXACT 0

#define EXN_RULESET_MOORE 1

/**
 * Result code of every call.
 */
typedef enum ExnStatus {
  EXN_STATUS_OK = 0,
  EXN_STATUS_NULL_POINTER = 1,
  EXN_STATUS_INVALID_ARGUMENT = 2,
  EXN_STATUS_ILLEGAL_MOVE = 3,
  EXN_STATUS_UNSUPPORTED = 4,
  EXN_STATUS_OUT_OF_RANGE = 5,
  EXN_STATUS_PRE_POSITION = 6,
  EXN_STATUS_BUDGET_EXCEEDED = 7,
  EXN_STATUS_NOT_REALIZABLE = 8,
  EXN_STATUS_OVERFLOW = 9,
  EXN_STATUS_CONSTRUCTION_FAILED = 10,
  EXN_STATUS_BUFFER_TOO_SMALL = 11,
  EXN_STATUS_PANIC = 12,
} ExnStatus;

/**
 * Opaque SG table of all canonical positions up to a pile bound.
 */
typedef struct ExnTable ExnTable;

/**
 * Quantities of the `n = 2k` value formula. `kind` is 1 or 2.
 */
typedef struct ExnSgParams {
  uint64_t u;
  uint64_t m;
  uint64_t y;
  uint64_t z;
  uint64_t v;
  uint32_t kind;
  uint64_t g;
} ExnSgParams;

/**
 * Tetris value and how `x̄` was built; `x̄` itself goes to a separate buffer.
 */
typedef struct ExnTetrisProfile {
  uint64_t tvalue;
  size_t ell;
  uint64_t alpha;
  uint64_t beta;
} ExnTetrisProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len`). Returns the full length including the
 * terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t exn_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *exn_version(void);

/**
 * SG value of an Exact k-Nim position (`k = 1` or `2k >= n`).
 *
 * # Safety
 * `piles` must point to `n` readable values and `out` must be writable.
 */
enum ExnStatus exn_sg_value(size_t k, const uint64_t *piles, size_t n, uint64_t *out);

/**
 * Formula quantities for `n = 2k`, `k >= 2`. Fails with `Overflow` when
 * `z` or `v` exceed 64 bits.
 *
 * # Safety
 * `piles` must point to `n` readable values and `out` must be writable.
 */
enum ExnStatus exn_sg_params(size_t k, const uint64_t *piles, size_t n, struct ExnSgParams *out);

/**
 * Tetris value, profile and `x̄` (sorted coordinates, `n` values written to
 * `xbar`, which may be null).
 *
 * # Safety
 * `piles` must point to `n` readable values, `out` must be writable and
 * `xbar` must be null or point to `n` writable values.
 */
enum ExnStatus exn_tetris_profile(size_t k,
                                  const uint64_t *piles,
                                  size_t n,
                                  struct ExnTetrisProfile *out,
                                  uint64_t *xbar);

/**
 * Successor of a move to SG value `delta < sg_value`.
 *
 * # Safety
 * `piles` must point to `n` readable values and `next` to `n` writable ones.
 */
enum ExnStatus exn_winning_move(size_t k,
                                const uint64_t *piles,
                                size_t n,
                                uint64_t delta,
                                uint64_t *next);

/**
 * Successor of a move to Tetris value `g`.
 *
 * # Safety
 * `piles` must point to `n` readable values and `next` to `n` writable ones.
 */
enum ExnStatus exn_move_to_tetris(size_t k,
                                  const uint64_t *piles,
                                  size_t n,
                                  uint64_t g,
                                  uint64_t *next);

/**
 * Moore's `M` in decimal. Writes the NUL-terminated digits to `buf` and
 * the required size to `needed` (may be null); fails with
 * `BufferTooSmall` if `len` is short.
 *
 * # Safety
 * `piles` must point to `n` readable values, `buf` to `len` writable bytes
 * and `needed` must be null or writable.
 */
enum ExnStatus exn_moore_m(size_t k,
                           const uint64_t *piles,
                           size_t n,
                           char *buf,
                           size_t len,
                           size_t *needed);

/**
 * Successor of a Moore's Nim move to `M = target` (0 or 1).
 *
 * # Safety
 * `piles` must point to `n` readable values and `next` to `n` writable ones.
 */
enum ExnStatus exn_moore_move(size_t k,
                              const uint64_t *piles,
                              size_t n,
                              uint32_t target,
                              uint64_t *next);

/**
 * Whether `piles` is the degree sequence of a k-uniform multi-hypergraph.
 *
 * # Safety
 * `piles` must point to `n` readable values and `out` must be writable.
 */
enum ExnStatus exn_is_realizable(size_t k, const uint64_t *piles, size_t n, bool *out);

/**
 * Largest realizable sequence below `piles`, written to `corrected`.
 *
 * # Safety
 * `piles` must point to `n` readable values and `corrected` to `n`
 * writable ones.
 */
enum ExnStatus exn_minimal_correction(size_t k,
                                      const uint64_t *piles,
                                      size_t n,
                                      uint64_t *corrected);

/**
 * Builds the brute-force SG table for all positions with piles `<= max`.
 * Free it with [`exn_table_free`].
 *
 * # Safety
 * `out` must be writable.
 */
enum ExnStatus exn_table_build(uint32_t ruleset_code,
                               size_t n,
                               size_t k,
                               uint64_t max,
                               struct ExnTable **out);

/**
 * Looks up a position in any pile order. Fails with `OutOfRange` if a pile
 * exceeds the table bound.
 *
 * # Safety
 * `table` must come from [`exn_table_build`], `piles` must point to `n`
 * readable values and `out` must be writable.
 */
enum ExnStatus exn_table_get(const struct ExnTable *table,
                             const uint64_t *piles,
                             size_t n,
                             uint64_t *out);

/**
 * Number of canonical positions in the table; 0 for null.
 *
 * # Safety
 * `table` must be null or come from [`exn_table_build`].
 */
size_t exn_table_len(const struct ExnTable *table);

/**
 * Releases a table. Null is ignored.
 *
 * # Safety
 * `table` must be null or come from [`exn_table_build`] and not be used
 * afterwards.
 */
void exn_table_free(struct ExnTable *table);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXACT_NIM_H */
