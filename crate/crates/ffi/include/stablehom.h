#ifndef STABLEHOM_H
#define STABLEHOM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShStatus {
  SH_STATUS_OK = 0,
  SH_STATUS_NULL_ARGUMENT = 1,
  SH_STATUS_INVALID_ARGUMENT = 2,
  SH_STATUS_PARSE_ERROR = 3,
  SH_STATUS_CAP_EXCEEDED = 4,
  SH_STATUS_COMPUTE_ERROR = 5,
  SH_STATUS_BUFFER_TOO_SMALL = 6,
  SH_STATUS_PANIC = 7,
} ShStatus;

typedef enum ShVariance {
  SH_VARIANCE_COVARIANT = 0,
  SH_VARIANCE_CONTRAVARIANT = 1,
} ShVariance;

/**
 * A finite category.
 */
typedef struct ShCategory ShCategory;

/**
 * A linear representation of a category.
 */
typedef struct ShRep ShRep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failure on this thread, or NULL. Valid until the next call
 * on the same thread.
 */
const char *sh_last_error(void);

/**
 * Builds a category by name (`all`, `inj`, `gamma`, `span-inj`, ...) over `F_q`, truncated at `dmax`.
 */
enum ShStatus sh_category_build(const char *kind,
                                uint32_t q,
                                size_t dmax,
                                struct ShCategory **out);

void sh_category_free(struct ShCategory *cat);

enum ShStatus sh_category_num_objects(const struct ShCategory *cat, size_t *out);

enum ShStatus sh_category_num_morphisms(const struct ShCategory *cat, size_t *out);

/**
 * Evaluates a functor expression on the category with the requested variance.
 */
enum ShStatus sh_rep_evaluate(const struct ShCategory *cat,
                              const char *expr,
                              enum ShVariance variance,
                              struct ShRep **out);

void sh_rep_free(struct ShRep *rep);

/**
 * Copies the dimension at each object into `buf`. `*len` is the capacity on entry
 * and the number of objects on exit; `BUFFER_TOO_SMALL` leaves `buf` untouched.
 */
enum ShStatus sh_rep_dims(const struct ShRep *rep, size_t *buf, size_t *len);

/**
 * `dim Tor_i(contra, co)` for `i = 0..=max_degree` into `buf`, with the length
 * convention of [`sh_rep_dims`].
 */
enum ShStatus sh_tor(const struct ShRep *contra,
                     const struct ShRep *co,
                     size_t max_degree,
                     size_t *buf,
                     size_t *len);

/**
 * Canonical printed form of an expression. On a parse error `*error_pos` receives
 * the byte offset. Free the string with [`sh_string_free`].
 */
enum ShStatus sh_expr_canonical(const char *expr, char **out, size_t *error_pos);

/**
 * Runs a TOML job and returns the JSON report (an error record when the job
 * fails) and the exit code the command-line tool would give. No cache is used.
 */
enum ShStatus sh_run_job(const char *job_toml, char **out_json, int32_t *exit_code);

void sh_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STABLEHOM_H */
