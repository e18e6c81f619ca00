#ifndef FSPT_H
#define FSPT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum FsptStatus {
  FSPT_STATUS_OK = 0,
  FSPT_STATUS_NULL_POINTER = 1,
  FSPT_STATUS_INVALID_UTF8 = 2,
  FSPT_STATUS_MALFORMED_INPUT = 3,
  FSPT_STATUS_DOMAIN_ERROR = 4,
  FSPT_STATUS_PANIC = 5,
} FsptStatus;

// An index `(κ, 𝔮, [υ])`.
typedef struct FsptIndex FsptIndex;

// A validated fermionic MPS.
typedef struct FsptMps FsptMps;

// A validated graded system.
typedef struct FsptSystem FsptSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last error on this thread, or an empty string. Valid until
// the next call into the library on the same thread.
const char *fspt_last_error_message(void);

// Releases a string returned by the library.
//
// # Safety
// `s` must come from this library and not be freed twice.
void fspt_string_free(char *s);

// Parses and validates a system from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum FsptStatus fspt_system_from_json(const char *json, struct FsptSystem **out);

// # Safety
// `sys` must come from this library and not be freed twice.
void fspt_system_free(struct FsptSystem *sys);

// The graded tensor product of two systems over the same group and twist.
//
// # Safety
// Handles must be valid and `out` writable.
enum FsptStatus fspt_system_stack(const struct FsptSystem *a,
                                  const struct FsptSystem *b,
                                  struct FsptSystem **out);

// # Safety
// `sys` must be valid and `out` writable.
enum FsptStatus fspt_system_index(const struct FsptSystem *sys, struct FsptIndex **out);

// Parses an index from the JSON emitted by [`fspt_index_to_json`].
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum FsptStatus fspt_index_from_json(const char *json, struct FsptIndex **out);

// # Safety
// `idx` must come from this library and not be freed twice.
void fspt_index_free(struct FsptIndex *idx);

// # Safety
// `idx` must be valid and `out` writable.
enum FsptStatus fspt_index_kappa(const struct FsptIndex *idx, uint8_t *out);

// `{"kappa", "q", "cocycle"}`; release with [`fspt_string_free`].
//
// # Safety
// `idx` must be valid and `out` writable.
enum FsptStatus fspt_index_to_json(const struct FsptIndex *idx, char **out);

// The index of the stacked phase by the group law.
//
// # Safety
// Handles must be valid and `out` writable.
enum FsptStatus fspt_index_stack(const struct FsptIndex *a,
                                 const struct FsptIndex *b,
                                 struct FsptIndex **out);

// # Safety
// Handles must be valid and `out` writable.
enum FsptStatus fspt_index_equal(const struct FsptIndex *a, const struct FsptIndex *b, bool *out);

// Parses and validates a fermionic MPS from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum FsptStatus fspt_mps_from_json(const char *json, struct FsptMps **out);

// # Safety
// `mps` must come from this library and not be freed twice.
void fspt_mps_free(struct FsptMps *mps);

// Expectation of a word given as `[[mu0, nu0], [mu1, nu1], ...]`.
//
// # Safety
// `mps` must be valid, `word` NUL-terminated and `re`, `im` writable.
enum FsptStatus fspt_mps_expectation(const struct FsptMps *mps,
                                     const char *word,
                                     double *re,
                                     double *im);

// The index of an MPS under an on-site symmetry given as JSON.
//
// # Safety
// `mps` must be valid, `symmetry` NUL-terminated and `out` writable.
enum FsptStatus fspt_mps_index(const struct FsptMps *mps,
                               const char *symmetry,
                               struct FsptIndex **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FSPT_H */
