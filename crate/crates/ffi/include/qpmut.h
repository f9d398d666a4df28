#ifndef QPMUT_H
#define QPMUT_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Status codes returned by every fallible function.
 */
typedef enum QpmutStatus {
  QPMUT_STATUS_OK = 0,
  QPMUT_STATUS_NULL_POINTER = 1,
  QPMUT_STATUS_INVALID_UTF8 = 2,
  QPMUT_STATUS_PARSE = 3,
  QPMUT_STATUS_INVALID_INPUT = 4,
  /*
   Mutation at a vertex lying on an oriented 2-cycle.
   */
  QPMUT_STATUS_TWO_CYCLE = 5,
  QPMUT_STATUS_TRUNCATION_SHORTFALL = 6,
  QPMUT_STATUS_BUFFER_TOO_SMALL = 7,
  QPMUT_STATUS_PANIC = 8,
} QpmutStatus;

/*
 Opaque quiver with potential.
 */
typedef struct QpmutQp QpmutQp;

/*
 Opaque decorated representation.
 */
typedef struct QpmutRep QpmutRep;

/*
 Graded dimension summary.
 */
typedef struct QpmutDims {
  /*
   Sum of the graded dimensions up to the truncation degree.
   */
  uintptr_t truncated_total;
  /*
   Whether the top degrees vanish, so that the total is exact.
   */
  bool stabilized;
  uintptr_t trunc;
} QpmutDims;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failure on this thread, or NULL. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *qpmut_last_error(void);

/*
 Releases a string returned by this library.

 # Safety
 `s` must come from this library and not have been freed.
 */
void qpmut_string_free(char *s);

/*
 Parses the QP text format. `trunc < 0` keeps the file's `trunc:` line
 (default 6).

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QpmutStatus qpmut_qp_parse(const char *text, int32_t trunc, struct QpmutQp **out);

/*
 Builds a catalog QP with default parameters, or grid order `n` when
 `n > 0`.

 # Safety
 `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QpmutStatus qpmut_qp_catalog(const char *name,
                                  uint32_t n,
                                  uint32_t trunc,
                                  struct QpmutQp **out);

/*
 # Safety
 `qp` must be NULL or a live handle from this library.
 */
void qpmut_qp_free(struct QpmutQp *qp);

/*
 QP text format.

 # Safety
 `qp` must be a live handle and `out` a valid pointer.
 */
enum QpmutStatus qpmut_qp_to_text(const struct QpmutQp *qp, char **out);

/*
 Structured form with `"schema": 1`.

 # Safety
 `qp` must be a live handle and `out` a valid pointer.
 */
enum QpmutStatus qpmut_qp_to_json(const struct QpmutQp *qp, char **out);

/*
 # Safety
 `qp` must be a live handle.
 */
uintptr_t qpmut_qp_num_vertices(const struct QpmutQp *qp);

/*
 # Safety
 `qp` must be a live handle.
 */
uintptr_t qpmut_qp_num_arrows(const struct QpmutQp *qp);

/*
 Writes the B-matrix row-major into `buf`, which must hold `n * n`
 entries for `n` vertices.

 # Safety
 `qp` must be a live handle and `buf` valid for `len` writes.
 */
enum QpmutStatus qpmut_qp_b_matrix(const struct QpmutQp *qp, int64_t *buf, uintptr_t len);

/*
 Mutation at `k`. `degenerate` (optional) is set when the result has
 oriented 2-cycles.

 # Safety
 `qp` must be a live handle, `out` a valid pointer, `degenerate` NULL or
 valid.
 */
enum QpmutStatus qpmut_qp_mutate(const struct QpmutQp *qp,
                                 uint32_t k,
                                 struct QpmutQp **out,
                                 bool *degenerate);

/*
 Reduced part.

 # Safety
 `qp` must be a live handle and `out` a valid pointer.
 */
enum QpmutStatus qpmut_qp_reduce(const struct QpmutQp *qp, struct QpmutQp **out);

/*
 Truncated Jacobian algebra dimension.

 # Safety
 `qp` must be a live handle and `out` a valid pointer.
 */
enum QpmutStatus qpmut_qp_jacobian_dim(const struct QpmutQp *qp, struct QpmutDims *out);

/*
 Truncated deformation space dimension.

 # Safety
 `qp` must be a live handle and `out` a valid pointer.
 */
enum QpmutStatus qpmut_qp_deformation_dim(const struct QpmutQp *qp, struct QpmutDims *out);

/*
 Sets `rigid` when the deformation space vanishes and has stabilized.

 # Safety
 `qp` must be a live handle and `rigid` a valid pointer.
 */
enum QpmutStatus qpmut_qp_is_rigid(const struct QpmutQp *qp, bool *rigid);

/*
 Band module `M(m, n)` on the double triangle at truncation `trunc`.

 # Safety
 `out` must be a valid pointer.
 */
enum QpmutStatus qpmut_rep_band(uint32_t m, uint32_t n, uint32_t trunc, struct QpmutRep **out);

/*
 Parses the representation text format over `qp`.

 # Safety
 `qp` must be a live handle, `text` NUL-terminated, `out` valid.
 */
enum QpmutStatus qpmut_rep_parse(const struct QpmutQp *qp, const char *text, struct QpmutRep **out);

/*
 # Safety
 `rep` must be NULL or a live handle from this library.
 */
void qpmut_rep_free(struct QpmutRep *rep);

/*
 Representation text format.

 # Safety
 `rep` must be a live handle and `out` a valid pointer.
 */
enum QpmutStatus qpmut_rep_to_text(const struct QpmutRep *rep, char **out);

/*
 Writes `dim M_i` then `dim V_i` per vertex: `2 * n` entries.

 # Safety
 `rep` must be a live handle and `buf` valid for `len` writes.
 */
enum QpmutStatus qpmut_rep_dims(const struct QpmutRep *rep, uintptr_t *buf, uintptr_t len);

/*
 Mutation of a representation at `k`; the result lives over the mutated
 QP, available through [`qpmut_rep_qp`].

 # Safety
 `rep` must be a live handle and `out` a valid pointer.
 */
enum QpmutStatus qpmut_rep_mutate(const struct QpmutRep *rep, uint32_t k, struct QpmutRep **out);

/*
 Copy of the QP a representation lives over.

 # Safety
 `rep` must be a live handle and `out` a valid pointer.
 */
enum QpmutStatus qpmut_rep_qp(const struct QpmutRep *rep, struct QpmutQp **out);

/*
 Isomorphism test over a common QP. `verdict` is 1 for isomorphic, 0 for
 proved non-isomorphic and -1 when the search was inconclusive.

 # Safety
 `a`, `b` must be live handles and `verdict` a valid pointer.
 */
enum QpmutStatus qpmut_rep_is_isomorphic(const struct QpmutRep *a,
                                         const struct QpmutRep *b,
                                         int32_t *verdict);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPMUT_H */
