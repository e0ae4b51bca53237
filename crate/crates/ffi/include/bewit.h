#ifndef BEWIT_H
#define BEWIT_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of a C-ABI call.
 */
typedef enum {
  BEWIT_STATUS_OK = 0,
  BEWIT_STATUS_INVALID_ARGUMENT = 1,
  BEWIT_STATUS_NOT_HERMITIAN = 2,
  BEWIT_STATUS_DIMENSION_MISMATCH = 3,
  BEWIT_STATUS_INDEX_OUT_OF_RANGE = 4,
  BEWIT_STATUS_INVALID_PERMUTATION = 5,
  BEWIT_STATUS_INVALID_DIMENSION = 6,
  BEWIT_STATUS_UNKNOWN_STATE_ID = 7,
  BEWIT_STATUS_DOMAIN_ERROR = 8,
  BEWIT_STATUS_INVALID_STATE = 9,
  BEWIT_STATUS_BRACKET_ERROR = 10,
  BEWIT_STATUS_NOT_UNITARY = 11,
  BEWIT_STATUS_SPECTRUM_OUT_OF_RANGE = 12,
  BEWIT_STATUS_INVALID_STRATEGY = 13,
  BEWIT_STATUS_PARSE_ERROR = 14,
  BEWIT_STATUS_IO_ERROR = 15,
} BewitStatus;

/**
 * Opaque handle to a bipartite density matrix.
 */
typedef struct BewitState BewitState;

/**
 * Opaque handle to a witness coefficient tensor.
 */
typedef struct BewitWitness BewitWitness;

/**
 * Aggregate outcome of a see-saw run.
 */
typedef struct {
  double best_value;
  double converged_fraction;
  uintptr_t best_iterations;
  uintptr_t best_restart_index;
} BewitSeesawResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *bewit_version(void);

/**
 * Message of the last error on this thread; valid until the next failing
 * call on the same thread. Do not free.
 */
const char *bewit_last_error_message(void);

/**
 * Releases a string returned through an out-pointer.
 *
 * # Safety
 * `s` must have been produced by this library and not yet freed.
 */
void bewit_string_free(char *s);

/**
 * Builds a catalog state from its name: "me", "werner-as", "werner-loc",
 * "r6", "r8", "bpd", "sentis", "rho3x3", or "asym:<v>".
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be a valid pointer.
 */
BewitStatus bewit_state_catalog(const char *name, BewitState **out);

/**
 * Parses a state from its JSON representation.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
BewitStatus bewit_state_from_json(const char *json, BewitState **out);

/**
 * Serializes a state as JSON; release the string with `bewit_string_free`.
 *
 * # Safety
 * `state` must be a live handle from this library.
 */
BewitStatus bewit_state_to_json(const BewitState *state, char **out_json);

/**
 * Mixes a state with isotropic noise at visibility `v` on a `dim x dim`
 * space (the state embeds into the first levels when `dim` is larger).
 *
 * # Safety
 * `state` must be a live handle; `out` must be a valid pointer.
 */
BewitStatus bewit_state_isotropic_mix(const BewitState *state,
                                      double v,
                                      uintptr_t dim,
                                      BewitState **out);

/**
 * Local dimension of the A side (0 for a null handle).
 *
 * # Safety
 * `state` must be a live handle or null.
 */
uintptr_t bewit_state_dim_a(const BewitState *state);

/**
 * Local dimension of the B side (0 for a null handle).
 *
 * # Safety
 * `state` must be a live handle or null.
 */
uintptr_t bewit_state_dim_b(const BewitState *state);

/**
 * Releases a state handle.
 *
 * # Safety
 * `state` must have been produced by this library and not yet freed.
 */
void bewit_state_free(BewitState *state);

/**
 * CCNR value; above 1 certifies entanglement.
 *
 * # Safety
 * `state` must be a live handle; `out` must be a valid pointer.
 */
BewitStatus bewit_ccnr(const BewitState *state, double *out);

/**
 * Negativity `(||PT||_1 - 1)/2`; zero exactly for PPT states.
 *
 * # Safety
 * `state` must be a live handle; `out` must be a valid pointer.
 */
BewitStatus bewit_negativity(const BewitState *state, double *out);

/**
 * Trace criterion `S` in the identity-permutation Pauli-product basis.
 *
 * # Safety
 * `state` must be a live handle; `out` must be a valid pointer.
 */
BewitStatus bewit_trace_criterion_s(const BewitState *state, double *out);

/**
 * Best quantum Fisher information over the standard local generators.
 *
 * # Safety
 * `state` must be a live handle; `out` must be a valid pointer.
 */
BewitStatus bewit_qfi_standard_max(const BewitState *state, double *out);

/**
 * Whether the partial transpose has no eigenvalue below `-tolerance`.
 *
 * # Safety
 * `state` must be a live handle; `out` must be a valid pointer.
 */
BewitStatus bewit_is_ppt(const BewitState *state, double tolerance, bool *out);

/**
 * Critical visibility `3 / (4 CCNR - 1)`; fails for CCNR at or below 1.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
BewitStatus bewit_v_pm_closed_form(double ccnr, double *out);

/**
 * Builds a witness: "canonical", or a catalog state name to tailor it to.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be a valid pointer.
 */
BewitStatus bewit_witness_builtin(const char *name, BewitWitness **out);

/**
 * Parses witness coefficients from CSV (header `x,y,z,w`).
 *
 * # Safety
 * `csv` must be a NUL-terminated string; `out` must be a valid pointer.
 */
BewitStatus bewit_witness_from_csv(const char *csv, BewitWitness **out);

/**
 * Serializes witness coefficients as CSV; release with `bewit_string_free`.
 *
 * # Safety
 * `witness` must be a live handle.
 */
BewitStatus bewit_witness_to_csv(const BewitWitness *witness, char **out_csv);

/**
 * Releases a witness handle.
 *
 * # Safety
 * `witness` must have been produced by this library and not yet freed.
 */
void bewit_witness_free(BewitWitness *witness);

/**
 * Full protocol value of the witness on a shared state.
 *
 * # Safety
 * `state` and `witness` must be live handles; `out` must be valid.
 */
BewitStatus bewit_entangled_value(const BewitState *state,
                                  const BewitWitness *witness,
                                  double *out);

/**
 * Multi-restart see-saw optimization of the witness over separable (or,
 * with `classical` set, classical) message strategies.
 *
 * # Safety
 * `witness` must be a live handle; `out` must be a valid pointer.
 */
BewitStatus bewit_seesaw(const BewitWitness *witness,
                         uint64_t seed,
                         uintptr_t restarts,
                         uintptr_t max_iter,
                         double tol,
                         bool classical,
                         BewitSeesawResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BEWIT_H */
