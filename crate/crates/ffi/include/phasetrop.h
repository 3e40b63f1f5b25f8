#ifndef PHASETROP_H
#define PHASETROP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum {
  PT_STATUS_OK = 0,
  PT_STATUS_NULL_POINTER = 1,
  PT_STATUS_INVALID_UTF8 = 2,
  PT_STATUS_PARSE = 3,
  PT_STATUS_JSON = 4,
  PT_STATUS_NOT_INDEPENDENT = 5,
  PT_STATUS_EMPTY_TROPICAL_VARIETY = 6,
  PT_STATUS_SECTION_UNDEFINED = 7,
  PT_STATUS_DIVISION_BY_ZERO = 8,
  PT_STATUS_TRUNCATION_EXHAUSTED = 9,
  PT_STATUS_TOO_FEW_TERMS = 10,
  PT_STATUS_NOT_SIMPLE = 11,
  PT_STATUS_NOT_SURJECTIVE = 12,
  PT_STATUS_VALIDATION = 13,
  PT_STATUS_DIMENSION = 14,
  PT_STATUS_IO = 15,
  PT_STATUS_PANIC = 16,
} PtStatus;

/**
 * Opaque closed-coamoeba descriptor.
 */
typedef struct PtCoa PtCoa;

/**
 * Opaque model of a tropically simple variety.
 */
typedef struct PtModel PtModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last error on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *pt_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void pt_string_free(char *s);

/**
 * Model of the hypersurface given as polynomial JSON. `section_json` may be
 * null for the canonical section.
 *
 * # Safety
 * String arguments must be nul-terminated; `out` must be writable.
 */
PtStatus pt_model_new_hypersurface(const char *poly_json,
                                   const char *section_json,
                                   PtModel **out_model);

/**
 * Model of the preimage of a product of hyperplanes under the monomial map
 * with the given `rows × cols` row-major character matrix.
 * `factors_json` is a JSON list of polynomials.
 *
 * # Safety
 * `matrix` must point to `rows * cols` integers.
 */
PtStatus pt_model_new_pullback(const int64_t *matrix,
                               size_t rows,
                               size_t cols,
                               const char *factors_json,
                               const char *section_json,
                               PtModel **out_model);

/**
 * Model from a fixture (polynomials plus the faces of their tropical
 * variety), validated on load.
 *
 * # Safety
 * String arguments must be nul-terminated; `out` must be writable.
 */
PtStatus pt_model_new_fixture(const char *fixture_json,
                              const char *section_json,
                              PtModel **out_model);

/**
 * # Safety
 * `model` must come from a `pt_model_new_*` call and not have been freed.
 */
void pt_model_free(PtModel *model);

/**
 * Rank of the ambient torus, or 0 for a null handle.
 *
 * # Safety
 * `model` must be a live handle or null.
 */
size_t pt_model_rank(const PtModel *model);

/**
 * Number of faces of the tropical complex, or 0 for a null handle.
 *
 * # Safety
 * `model` must be a live handle or null.
 */
size_t pt_model_face_count(const PtModel *model);

/**
 * The model as JSON; release with `pt_string_free`.
 *
 * # Safety
 * `model` must be a live handle; `out_json` must be writable.
 */
PtStatus pt_model_to_json(const PtModel *model, char **out_json);

/**
 * Membership in the non-archimedean coamoeba. `out_face` (may be null)
 * receives the witnessing minimal face or -1.
 *
 * # Safety
 * `model` must be a live handle; `theta` nul-terminated; `out_member`
 * writable.
 */
PtStatus pt_nca_member(const PtModel *model,
                       const char *theta,
                       bool *out_member,
                       int64_t *out_face);

/**
 * Membership of `(w, θ)` in the phase tropical variety.
 *
 * # Safety
 * `model` must be a live handle; strings nul-terminated; `out_member`
 * writable.
 */
PtStatus pt_ptrop_member(const PtModel *model, const char *w, const char *theta, bool *out_member);

/**
 * Descriptor from JSON (`{"rank":2,"factors":[{"A":…,"shift":…}]}`).
 *
 * # Safety
 * `desc_json` nul-terminated; `out_coa` writable.
 */
PtStatus pt_coa_new(const char *desc_json, PtCoa **out_coa);

/**
 * Descriptor of `1 + x_1 + … + x_n`.
 */
PtCoa *pt_coa_new_hyperplane(size_t n);

/**
 * # Safety
 * `coa` must come from `pt_coa_new*` and not have been freed.
 */
void pt_coa_free(PtCoa *coa);

/**
 * Membership in the closed coamoeba.
 *
 * # Safety
 * `coa` must be a live handle; `theta` nul-terminated; `out_member`
 * writable.
 */
PtStatus pt_coa_member(const PtCoa *coa, const char *theta, bool *out_member);

/**
 * Index of the lattice spanned by the rows of a row-major matrix in its
 * saturation.
 *
 * # Safety
 * `matrix` must point to `rows * cols` integers; `out_index` writable.
 */
PtStatus pt_nvol(const int64_t *matrix, size_t rows, size_t cols, uint64_t *out_index);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHASETROP_H */
