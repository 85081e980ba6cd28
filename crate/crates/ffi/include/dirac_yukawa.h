#ifndef DIRAC_YUKAWA_H
#define DIRAC_YUKAWA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum DyStatus {
  DY_STATUS_OK = 0,
  DY_STATUS_NULL_POINTER = 1,
  DY_STATUS_INVALID_UTF8 = 2,
  /**
   * Bad model file, unknown name, malformed argument.
   */
  DY_STATUS_INPUT_ERROR = 3,
  /**
   * The computation itself failed.
   */
  DY_STATUS_COMPUTE_ERROR = 4,
  /**
   * `out_len` holds the required length.
   */
  DY_STATUS_BUFFER_TOO_SMALL = 5,
  DY_STATUS_PANIC = 6,
} DyStatus;

/**
 * Opaque model handle.
 */
typedef struct DyModel DyModel;

/**
 * Load a model from a TOML file.
 *
 * # Safety
 * `path` must be a NUL-terminated string, `out` a valid pointer.
 */
enum DyStatus dy_model_load(const char *path, struct DyModel **out);

/**
 * Construct one of the built-in models by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `out` a valid pointer.
 */
enum DyStatus dy_model_builtin(const char *name, struct DyModel **out);

/**
 * # Safety
 * `model` must come from `dy_model_load`/`dy_model_builtin` or be null.
 */
void dy_model_free(struct DyModel *model);

/**
 * Run `check`, `break`, `masses`, `lattice` or `verify-all` and return the
 * JSON report. `out_pass` (optional) receives 1 if every check passed.
 *
 * # Safety
 * Pointers must be valid; `out_json` receives a string for `dy_string_free`.
 */
enum DyStatus dy_run(const struct DyModel *model,
                     const char *command,
                     char **out_json,
                     int *out_pass);

/**
 * Sorted spectrum of `iD` (or of `(iD)²` when `squared` is nonzero) of the
 * vacuum lattice operator. Call with `buf = NULL` to query the length.
 *
 * # Safety
 * `buf` must hold `cap` doubles (or be null); `out_len` must be valid.
 */
enum DyStatus dy_dirac_spectrum(const struct DyModel *model,
                                int squared,
                                double *buf,
                                size_t cap,
                                size_t *out_len);

/**
 * The vacuum lattice Dirac operator in the JSON dump format.
 *
 * # Safety
 * Pointers must be valid; `out_json` receives a string for `dy_string_free`.
 */
enum DyStatus dy_dirac_operator_json(const struct DyModel *model, char **out_json);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void dy_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library.
 */
const char *dy_last_error(void);

const char *dy_version(void);

#endif  /* DIRAC_YUKAWA_H */
