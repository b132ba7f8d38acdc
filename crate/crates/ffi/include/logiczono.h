#ifndef LOGICZONO_H
#define LOGICZONO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LogiczonoGate {
  LOGICZONO_GATE_XOR = 0,
  LOGICZONO_GATE_AND = 1,
  LOGICZONO_GATE_OR = 2,
  LOGICZONO_GATE_XNOR = 3,
  LOGICZONO_GATE_NAND = 4,
  LOGICZONO_GATE_NOR = 5,
} LogiczonoGate;

typedef enum LogiczonoMode {
  LOGICZONO_MODE_EXACT = 0,
  LOGICZONO_MODE_MINKOWSKI = 1,
} LogiczonoMode;

typedef enum LogiczonoRep {
  LOGICZONO_REP_LZ = 0,
  LOGICZONO_REP_PLZ = 1,
  LOGICZONO_REP_CPLZ = 2,
} LogiczonoRep;

typedef enum LogiczonoStatus {
  LOGICZONO_STATUS_OK = 0,
  LOGICZONO_STATUS_NULL_POINTER = 1,
  LOGICZONO_STATUS_INVALID_UTF8 = 2,
  LOGICZONO_STATUS_PARSE = 3,
  LOGICZONO_STATUS_DIMENSION = 4,
  LOGICZONO_STATUS_BUDGET_EXCEEDED = 5,
  LOGICZONO_STATUS_INVALID_ARGUMENT = 6,
  LOGICZONO_STATUS_IO = 7,
  LOGICZONO_STATUS_INTERNAL = 8,
  LOGICZONO_STATUS_PANIC = 9,
} LogiczonoStatus;

/**
 * Source of fresh factor identifiers. Sets combined in one operation
 * should come from the same allocator.
 */
typedef struct LogiczonoAllocator LogiczonoAllocator;

typedef struct LogiczonoSet LogiczonoSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *logiczono_last_error(void);

struct LogiczonoAllocator *logiczono_allocator_new(void);

/**
 * # Safety
 * `alloc` must be null or come from `logiczono_allocator_new`.
 */
void logiczono_allocator_free(struct LogiczonoAllocator *alloc);

/**
 * # Safety
 * `set` must be null or a handle returned by this library.
 */
void logiczono_set_free(struct LogiczonoSet *set);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void logiczono_string_free(char *s);

/**
 * Parses a set in the JSON exchange format.
 *
 * # Safety
 * Pointers must be valid; `json` NUL-terminated.
 */
enum LogiczonoStatus logiczono_set_from_json(const struct LogiczonoAllocator *alloc,
                                             const char *json,
                                             struct LogiczonoSet **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LogiczonoStatus logiczono_set_to_json(const struct LogiczonoSet *set, char **out);

/**
 * # Safety
 * `set` must be a valid handle.
 */
size_t logiczono_set_dim(const struct LogiczonoSet *set);

/**
 * # Safety
 * `set` must be a valid handle.
 */
size_t logiczono_set_num_generators(const struct LogiczonoSet *set);

/**
 * # Safety
 * `set` must be a valid handle.
 */
size_t logiczono_set_num_factors(const struct LogiczonoSet *set);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LogiczonoStatus logiczono_set_not(const struct LogiczonoSet *set, struct LogiczonoSet **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LogiczonoStatus logiczono_set_gate(const struct LogiczonoAllocator *alloc,
                                        enum LogiczonoGate gate,
                                        enum LogiczonoMode mode,
                                        const struct LogiczonoSet *a,
                                        const struct LogiczonoSet *b,
                                        struct LogiczonoSet **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LogiczonoStatus logiczono_set_intersect(const struct LogiczonoAllocator *alloc,
                                             const struct LogiczonoSet *a,
                                             const struct LogiczonoSet *b,
                                             struct LogiczonoSet **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LogiczonoStatus logiczono_set_canonicalize(const struct LogiczonoSet *set,
                                                struct LogiczonoSet **out);

/**
 * All points as a JSON array of bitstrings. `max_factors == 0` keeps the
 * default budget.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LogiczonoStatus logiczono_set_enumerate(const struct LogiczonoSet *set,
                                             size_t max_factors,
                                             char **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LogiczonoStatus logiczono_set_is_empty(const struct LogiczonoSet *set,
                                            size_t max_factors,
                                            bool *out);

/**
 * `point` is a bitstring as long as the set's dimension.
 *
 * # Safety
 * Pointers must be valid; `point` NUL-terminated.
 */
enum LogiczonoStatus logiczono_set_contains(const struct LogiczonoSet *set,
                                            const char *point,
                                            size_t max_factors,
                                            bool *out);

/**
 * Runs a reachability analysis and returns the JSON report. `inputs_json`
 * and `unsafe_json` may be null.
 *
 * # Safety
 * Non-null pointers must be valid NUL-terminated strings.
 */
enum LogiczonoStatus logiczono_reach(const char *net_text,
                                     const char *init_json,
                                     const char *inputs_json,
                                     size_t steps,
                                     enum LogiczonoRep rep,
                                     enum LogiczonoMode mode,
                                     bool enumerate,
                                     const char *unsafe_json,
                                     size_t max_factors,
                                     char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOGICZONO_H */
