#ifndef SUPERTRANSPORT_H
#define SUPERTRANSPORT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every entry point.
typedef enum StStatus {
  ST_STATUS_OK = 0,
  // A required pointer argument was null.
  ST_STATUS_NULL_POINTER = 1,
  // Malformed JSON, UTF-8 or an unknown name in the input.
  ST_STATUS_PARSE = 2,
  // Operands live in different generator sets or algebras.
  ST_STATUS_ALGEBRA_MISMATCH = 3,
  ST_STATUS_PARITY = 4,
  ST_STATUS_NOT_INVERTIBLE = 5,
  // The computation finished but a residual check failed.
  ST_STATUS_RESIDUAL = 6,
  ST_STATUS_INTERNAL = 7,
} StStatus;

// Grassmann number with exact rational coefficients over a named
// generator set.
typedef struct StGrassmann StGrassmann;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread (empty after a success). The
// pointer stays valid until the next call on this thread.
const char *st_last_error_message(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not be freed twice.
void st_string_free(char *s);

// Parses `{"generators": [names], "terms": [{"idx": [names], "coef": "p/q"}]}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum StStatus st_grassmann_from_json(const char *json, struct StGrassmann **out);

// Writes the JSON form (same layout as the input) to `out`.
//
// # Safety
// `a` must be a live handle and `out` a valid pointer.
enum StStatus st_grassmann_to_json(const struct StGrassmann *a, char **out);

// `out = a · b`.
//
// # Safety
// `a`, `b` must be live handles and `out` a valid pointer.
enum StStatus st_grassmann_mul(const struct StGrassmann *a,
                               const struct StGrassmann *b,
                               struct StGrassmann **out);

// `out = a + b`.
//
// # Safety
// `a`, `b` must be live handles and `out` a valid pointer.
enum StStatus st_grassmann_add(const struct StGrassmann *a,
                               const struct StGrassmann *b,
                               struct StGrassmann **out);

// `out = a⁻¹`; fails with `NotInvertible` when the body vanishes.
//
// # Safety
// `a` must be a live handle and `out` a valid pointer.
enum StStatus st_grassmann_inv(const struct StGrassmann *a, struct StGrassmann **out);

// # Safety
// `a` must come from this library and not be freed twice.
void st_grassmann_free(struct StGrassmann *a);

// Runs a verification suite (`clifford`, `jacobi`, `forms`, `fierz`,
// `mc-flatness`, `connection-axioms`) and writes its report JSON to `out`.
// Returns `Residual` when the report does not pass.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum StStatus st_verify_suite(const char *name, uint64_t seed, char **out);

// Parallel transport. `problem` holds `chart`, `algebra`, `connection` and
// `path` entries plus optional `steps` (default 1000) and `method`
// (default `rk4`); the holonomy JSON is written to `out`.
//
// # Safety
// `problem` must be a NUL-terminated string and `out` a valid pointer.
enum StStatus st_transport_json(const char *problem, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERTRANSPORT_H */
