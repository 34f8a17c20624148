#ifndef FFGEOM_H
#define FFGEOM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FfgeomStatus {
  FFGEOM_STATUS_OK = 0,
  FFGEOM_STATUS_NULL_ARGUMENT = 1,
  FFGEOM_STATUS_INVALID_UTF8 = 2,
  FFGEOM_STATUS_PARSE = 3,
  FFGEOM_STATUS_DOMAIN = 4,
  FFGEOM_STATUS_BUFFER_TOO_SMALL = 5,
  FFGEOM_STATUS_PANIC = 6,
} FfgeomStatus;

/**
 * Opaque lattice handle.
 */
typedef struct FfgeomLattice FfgeomLattice;

/**
 * `|value|` as `q^exponent`, or zero.
 */
typedef struct FfgeomAbs {
  bool is_zero;
  int64_t exponent;
} FfgeomAbs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Owned by the
 * library; valid until the next call on this thread.
 */
const char *ffgeom_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void ffgeom_string_free(char *s);

/**
 * Parses a lattice file (`q`, `d`, `row` lines).
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum FfgeomStatus ffgeom_lattice_parse(const char *text, struct FfgeomLattice **out);

/**
 * # Safety
 * `lat` must be null or a handle from `ffgeom_lattice_parse`, freed once.
 */
void ffgeom_lattice_free(struct FfgeomLattice *lat);

/**
 * Dimension, or 0 for a null handle.
 *
 * # Safety
 * `lat` must be null or a live handle.
 */
size_t ffgeom_lattice_dim(const struct FfgeomLattice *lat);

/**
 * Writes the `d` minima exponents into `out[0..len]`.
 *
 * # Safety
 * `lat` must be a live handle and `out` must hold `len` values.
 */
enum FfgeomStatus ffgeom_lattice_minima(const struct FfgeomLattice *lat, int64_t *out, size_t len);

/**
 * Covering radius with respect to the unit cube.
 *
 * # Safety
 * `lat` must be a live handle; `out` must be writable.
 */
enum FfgeomStatus ffgeom_lattice_covrad(const struct FfgeomLattice *lat, struct FfgeomAbs *out);

/**
 * Exact `μ` for the unipotent lattice of `theta` (and `phi` when non-null).
 * `witness` may be null; otherwise it receives an uncovered grid point as
 * text, or null if none was recorded.
 *
 * # Safety
 * `theta` must be a nul-terminated string, `phi` null or one; `out` must be
 * writable and `witness` null or writable.
 */
enum FfgeomStatus ffgeom_mu_exact(uint32_t q,
                                  const char *theta,
                                  const char *phi,
                                  struct FfgeomAbs *out,
                                  char **witness);

/**
 * Solves the improved Dirichlet problem for `n` targets with degree
 * budgets `ts`. On success `*solution` is one line
 * `b <b_1> ... <b_n> a <a> err <q^e>`, already verified.
 *
 * # Safety
 * `thetas` must point at `n` nul-terminated strings and `ts` at `n`
 * values; `solution` must be writable.
 */
enum FfgeomStatus ffgeom_dirichlet(uint32_t q,
                                   const char *const *thetas,
                                   const size_t *ts,
                                   size_t n,
                                   char **solution);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FFGEOM_H */
