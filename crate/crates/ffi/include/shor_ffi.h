#ifndef SHOR_FFI_H
#define SHOR_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShorStatus {
  SHOR_STATUS_OK = 0,
  SHOR_STATUS_NULL_POINTER = 1,
  SHOR_STATUS_INVALID_PARAMETER = 2,
  SHOR_STATUS_NOT_COPRIME = 3,
  SHOR_STATUS_INVALID_CIRCUIT = 4,
  SHOR_STATUS_CAPACITY_EXCEEDED = 5,
  SHOR_STATUS_ATTEMPTS_EXHAUSTED = 6,
  SHOR_STATUS_NUMERICAL = 7,
  SHOR_STATUS_JSON = 8,
  SHOR_STATUS_IO = 9,
  SHOR_STATUS_BUFFER_TOO_SMALL = 10,
  SHOR_STATUS_PANIC = 11,
} ShorStatus;

typedef enum ShorBlock {
  SHOR_BLOCK_QFT = 0,
  SHOR_BLOCK_PHI_ADD = 1,
  SHOR_BLOCK_CC_PHI_ADD_MOD = 2,
  SHOR_BLOCK_CMULT = 3,
  SHOR_BLOCK_CSWAP = 4,
  SHOR_BLOCK_CONTROLLED_UA = 5,
  SHOR_BLOCK_ORDER_FINDING = 6,
} ShorBlock;

typedef enum ShorRoute {
  SHOR_ROUTE_EVEN = 0,
  SHOR_ROUTE_PERFECT_POWER = 1,
  SHOR_ROUTE_LUCKY_GCD = 2,
  SHOR_ROUTE_ORDER_FINDING = 3,
} ShorRoute;

/**
 * Opaque circuit handle.
 */
typedef struct ShorCircuit ShorCircuit;

/**
 * One order-finding run. `order` is 0 when postprocessing found none.
 */
typedef struct ShorOrderResult {
  uint64_t measured;
  uint32_t num_bits;
  double phase;
  uint64_t order;
  uint32_t qubits;
} ShorOrderResult;

typedef struct ShorFactorResult {
  uint64_t factor;
  uint64_t cofactor;
  enum ShorRoute route;
  uint32_t attempts;
} ShorFactorResult;

typedef struct ShorResources {
  uint32_t n;
  uint32_t kmax;
  uint64_t qubits;
  uint64_t gates_total;
  uint64_t depth;
  bool extrapolated;
} ShorResources;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none failed.
 * The pointer stays valid until the next failing call on this thread.
 */
const char *shor_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *shor_version(void);

/**
 * Builds the full order-finding circuit for `a` modulo `modulus`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum ShorStatus shor_order_finding_circuit(uint64_t modulus,
                                           uint64_t a,
                                           uint32_t kmax,
                                           struct ShorCircuit **out);

/**
 * Builds one arithmetic block for the `n`-bit `modulus` and base `a`.
 * `Qft` and `PhiAdd` act on `n + 1` qubits; `PhiAdd` adds `a`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum ShorStatus shor_block_circuit(enum ShorBlock block,
                                   uint64_t modulus,
                                   uint64_t a,
                                   uint32_t kmax,
                                   struct ShorCircuit **out);

/**
 * Parses a circuit from its JSON document.
 *
 * # Safety
 * `text` must be a valid nul-terminated string and `out` writable.
 */
enum ShorStatus shor_circuit_from_json(const char *text, struct ShorCircuit **out);

/**
 * Serialises a circuit to JSON. Free the result with [`shor_string_free`].
 *
 * # Safety
 * `circuit` must come from this library and `out` must be writable.
 */
enum ShorStatus shor_circuit_to_json(const struct ShorCircuit *circuit, char **out);

/**
 * # Safety
 * `circuit` must be null or a live handle from this library.
 */
size_t shor_circuit_num_qubits(const struct ShorCircuit *circuit);

/**
 * # Safety
 * `circuit` must be null or a live handle from this library.
 */
size_t shor_circuit_num_clbits(const struct ShorCircuit *circuit);

/**
 * # Safety
 * `circuit` must be null or a live handle from this library.
 */
size_t shor_circuit_num_gates(const struct ShorCircuit *circuit);

/**
 * # Safety
 * `circuit` must be null or a live handle from this library.
 */
size_t shor_circuit_depth(const struct ShorCircuit *circuit);

/**
 * Runs `circuit` from basis state `input`. Writes the most likely final
 * basis index and its probability, and copies the classical bits into
 * `clbits` (which must hold `shor_circuit_num_clbits` bytes; it may be null
 * when the circuit has none).
 *
 * # Safety
 * Pointers must be valid for the sizes described above.
 */
enum ShorStatus shor_circuit_run(const struct ShorCircuit *circuit,
                                 uint64_t input,
                                 uint64_t seed,
                                 uint8_t *clbits,
                                 size_t clbits_len,
                                 uint64_t *most_likely,
                                 double *probability);

/**
 * # Safety
 * `circuit` must be null or a handle from this library not yet freed.
 */
void shor_circuit_free(struct ShorCircuit *circuit);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void shor_string_free(char *s);

/**
 * One semiclassical order-finding run seeded with `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ShorStatus shor_order_find(uint64_t modulus,
                                uint64_t a,
                                uint32_t kmax,
                                uint64_t seed,
                                struct ShorOrderResult *out);

/**
 * Factors `modulus`. Returns `ATTEMPTS_EXHAUSTED` when every base failed.
 *
 * # Safety
 * `out` must be writable.
 */
enum ShorStatus shor_factor_number(uint64_t modulus,
                                   uint64_t seed,
                                   uint32_t max_attempts,
                                   struct ShorFactorResult *out);

/**
 * Resource counts of the order-finding circuit for an `n`-bit modulus.
 *
 * # Safety
 * `out` must be writable.
 */
enum ShorStatus shor_resources(uint32_t n, uint32_t kmax, struct ShorResources *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHOR_FFI_H */
