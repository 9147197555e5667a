/* C ABI for the fgdom library.
 *
 * Payloads cross the boundary as JSON strings (schemas documented in the
 * fgdom crate); results are returned in opaque buffers that must be
 * released with fgdom_buffer_free. Functions return 0 on success or a
 * negative error code; fgdom_last_error_message() describes the most
 * recent failure on the calling thread.
 *
 * Maintained by hand alongside crates/fgdom-ffi/src/lib.rs; regenerate
 * with cbindgen when available.
 */

#ifndef FGDOM_H
#define FGDOM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque result buffer holding a NUL-terminated JSON string. */
typedef struct FgdomBuffer FgdomBuffer;

/* Error codes (negative returns).
 *  -1 invalid input          -2 UnpairedSide        -3 WrongPunctureCount
 *  -4 NonNegativeEuler       -5 SelfGluedEdge       -6 InadmissibleWeights
 *  -7 DegenerateQuadruple    -8 NonpositiveHeight   -9 NonGenericFraming
 * -10 DegenerateInput       -11 NotCoaxial         -12 DegenerateCoordinate
 * -13 NotFilling            -14 ZeroDenominator    -15 BudgetExceeded
 * -16 DisconnectedCurve     -17 CuspExit           -18 TangledPath
 * -19 ArcsIntersect         -20 SingularMatrix     -21 Json
 * -22 Io                    -23 ZeroBend
 */

/* Verdict codes written by the domination entry points. */
enum {
    FGDOM_VERDICT_STRICT = 0,
    FGDOM_VERDICT_NON_STRICT = 1,
    FGDOM_VERDICT_VIOLATED = 2,
    FGDOM_VERDICT_UNSUPPORTED = 3
};

int32_t fgdom_schema_version(void);

const char *fgdom_last_error_message(void);

void fgdom_buffer_free(FgdomBuffer *buf);

const char *fgdom_buffer_data(const FgdomBuffer *buf);

size_t fgdom_buffer_len(const FgdomBuffer *buf);

/* Validates a triangulation document and returns its normalized form. */
int32_t fgdom_triangulation_normalize(const char *triangulation_json,
                                      FgdomBuffer **out);

/* Fock-Goncharov coordinates of a framed representation. */
int32_t fgdom_fg_coordinates(const char *representation_json,
                             FgdomBuffer **out);

/* Holonomy reconstruction from edge coordinates. */
int32_t fgdom_holonomy(const char *triangulation_json,
                       const char *coords_json,
                       FgdomBuffer **out);

/* Straightening: coordinates replaced by their moduli. */
int32_t fgdom_straighten(const char *coords_json, FgdomBuffer **out);

/* Filling-case strict domination pipeline. */
int32_t fgdom_dominate_filling(const char *representation_json,
                               uint64_t max_weight,
                               FgdomBuffer **out,
                               int32_t *verdict);

/* Domination certificate of coordinates against a real positive
 * reference over the same triangulation. */
int32_t fgdom_dominate_coords(const char *triangulation_json,
                              const char *rho_coords_json,
                              const char *j_coords_json,
                              uint64_t max_weight,
                              FgdomBuffer **out,
                              int32_t *verdict);

/* Length table of enumerated simple closed curves. */
int32_t fgdom_spectrum(const char *triangulation_json,
                       const char *coords_json,
                       uint64_t max_weight,
                       FgdomBuffer **out);

#ifdef __cplusplus
}
#endif

#endif /* FGDOM_H */
