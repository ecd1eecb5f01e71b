#ifndef STARLINE_H
#define STARLINE_H

/* Generated by cbindgen from crates/ffi/src. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum StarlineOp {
  STARLINE_OP_ADD = 0,
  STARLINE_OP_SUB = 1,
  STARLINE_OP_MUL = 2,
  STARLINE_OP_DIV = 3,
} StarlineOp;

typedef enum StarlineSetOp {
  STARLINE_SET_OP_UNION = 0,
  STARLINE_SET_OP_INTERSECT = 1,
  STARLINE_SET_OP_DIFFERENCE = 2,
} StarlineSetOp;

typedef enum StarlineStatus {
  STARLINE_STATUS_OK = 0,
  /**
   * Malformed text or argument.
   */
  STARLINE_STATUS_USAGE = 1,
  /**
   * Mathematically refused (not finite, no witness, ...).
   */
  STARLINE_STATUS_DOMAIN = 2,
  /**
   * A self-check inside the library failed.
   */
  STARLINE_STATUS_INTERNAL = 3,
  STARLINE_STATUS_NULL_POINTER = 4,
  STARLINE_STATUS_INVALID_UTF8 = 5,
  STARLINE_STATUS_PANIC = 6,
} StarlineStatus;

typedef struct StarlineFragment StarlineFragment;

typedef struct StarlineGerm StarlineGerm;

typedef struct StarlineNatSet StarlineNatSet;

typedef struct StarlineClassification {
  bool infinitesimal;
  bool finite;
  bool infinitely_large;
  bool standard;
} StarlineClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Name of the last error on this thread (e.g. `"SyntaxError"`), or null.
 */
char *starline_last_error_name(void);

/**
 * Message of the last error on this thread, or null.
 */
char *starline_last_error(void);

void starline_string_free(char *s);

enum StarlineStatus starline_germ_parse(const char *src, struct StarlineGerm **out_germ);

void starline_germ_free(struct StarlineGerm *g);

/**
 * Canonical text of the germ; release with `starline_string_free`.
 */
enum StarlineStatus starline_germ_to_string(const struct StarlineGerm *g, char **out_str);

/**
 * `a op b`. Division fails with a domain error when `b` vanishes on a
 * whole residue class.
 */
enum StarlineStatus starline_germ_arith(enum StarlineOp op,
                                        const struct StarlineGerm *a,
                                        const struct StarlineGerm *b,
                                        struct StarlineGerm **out_germ);

/**
 * Writes -1, 0 or 1. A null fragment means the default fragment.
 */
enum StarlineStatus starline_germ_compare(const struct StarlineGerm *a,
                                          const struct StarlineGerm *b,
                                          const struct StarlineFragment *frag,
                                          int32_t *out_order);

enum StarlineStatus starline_germ_classify(const struct StarlineGerm *g,
                                           const struct StarlineFragment *frag,
                                           struct StarlineClassification *out_class);

/**
 * Standard part as `"p/q"`; a domain error for infinitely large germs.
 */
enum StarlineStatus starline_germ_standard_part(const struct StarlineGerm *g,
                                                const struct StarlineFragment *frag,
                                                char **out_str);

/**
 * Limit verdict as a JSON object.
 */
enum StarlineStatus starline_limit_json(const struct StarlineGerm *g, char **out_json);

/**
 * Least `ν` with `|a_n - L| < eps` for all `n >= ν`. `limit` and `eps` are
 * rationals in `p/q` text.
 */
enum StarlineStatus starline_witness_nu(const struct StarlineGerm *g,
                                        const char *limit,
                                        const char *eps,
                                        uint64_t *out_nu);

enum StarlineStatus starline_natset_parse(const char *src, struct StarlineNatSet **out_set);

void starline_natset_free(struct StarlineNatSet *s);

enum StarlineStatus starline_natset_to_string(const struct StarlineNatSet *s, char **out_str);

enum StarlineStatus starline_natset_combine(enum StarlineSetOp op,
                                            const struct StarlineNatSet *a,
                                            const struct StarlineNatSet *b,
                                            struct StarlineNatSet **out_set);

enum StarlineStatus starline_natset_complement(const struct StarlineNatSet *a,
                                               struct StarlineNatSet **out_set);

/**
 * Writes whether the set is cofinite and, if so, the least `ν` with
 * `{ν, ν+1, ...}` inside it (otherwise `out_witness` is left untouched).
 */
enum StarlineStatus starline_natset_is_cofinite(const struct StarlineNatSet *s,
                                                bool *out_cofinite,
                                                uint64_t *out_witness);

/**
 * Parses `"m:r,..."`; the empty string is the default fragment.
 */
enum StarlineStatus starline_fragment_parse(const char *src, struct StarlineFragment **out_frag);

void starline_fragment_free(struct StarlineFragment *f);

enum StarlineStatus starline_fragment_decide(const struct StarlineFragment *f,
                                             const struct StarlineNatSet *s,
                                             bool *out_member);

enum StarlineStatus starline_fragment_measure(const struct StarlineFragment *f,
                                              const struct StarlineNatSet *s,
                                              uint8_t *out_measure);

/**
 * Exhaustive filter checks on a universe of size `k` (1..=4), as JSON.
 */
enum StarlineStatus starline_model_check_json(uint32_t k, char **out_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* STARLINE_H */
