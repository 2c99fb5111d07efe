/*
 * tailcmp: exact and certified verification of tail comparisons for sums of
 * independent non-negative integer random variables with integer means.
 *
 * C interface. Objects are opaque handles owned by the caller and released
 * with the matching *_free function. Every fallible call returns a
 * tailcmp_status; on failure the out-parameter is left untouched and
 * tailcmp_last_error() describes the problem for the calling thread.
 */
#ifndef TAILCMP_H
#define TAILCMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TAILCMP_API __declspec(dllexport)
#else
#define TAILCMP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tailcmp_status {
  TAILCMP_OK = 0,
  TAILCMP_E_INVALID_ARGUMENT = 1, /* null handle, malformed parameter */
  TAILCMP_E_PARSE = 2,            /* malformed rational, range or JSON */
  TAILCMP_E_PRECONDITION = 3,     /* documented precondition violated */
  TAILCMP_E_INTERNAL = 4          /* invariant violation or allocation failure */
} tailcmp_status;

/* Overall outcome of a report; values match the CLI exit codes. */
typedef enum tailcmp_outcome {
  TAILCMP_HOLDS = 0,
  TAILCMP_FAILS = 1,
  TAILCMP_UNRESOLVED = 2
} tailcmp_outcome;

typedef struct tailcmp_dist tailcmp_dist;
typedef struct tailcmp_options tailcmp_options;
typedef struct tailcmp_report tailcmp_report;

TAILCMP_API const char *tailcmp_version(void);
/* Message for the most recent failed call on this thread ("" if none). */
TAILCMP_API const char *tailcmp_last_error(void);

/* Options: precision, cutoff cap, worker count and seed. Defaults are
 * exp width 10^-30, cutoff cap 2^16, one worker, no seed. */
TAILCMP_API tailcmp_status tailcmp_options_create(tailcmp_options **out);
TAILCMP_API void tailcmp_options_free(tailcmp_options *opts);
/* Width of the e^lambda enclosure, a positive rational such as "1e-30". */
TAILCMP_API tailcmp_status tailcmp_options_set_precision(tailcmp_options *opts, const char *width);
TAILCMP_API tailcmp_status tailcmp_options_set_cutoff_cap(tailcmp_options *opts, uint64_t cap);
TAILCMP_API tailcmp_status tailcmp_options_set_jobs(tailcmp_options *opts, unsigned jobs);
TAILCMP_API tailcmp_status tailcmp_options_set_seed(tailcmp_options *opts, uint64_t seed);

/* Distributions. A Poisson handle is a family description; it is truncated
 * with certified bounds when an operation needs its weights. */
TAILCMP_API tailcmp_status tailcmp_dist_from_json(const char *json, tailcmp_dist **out);
TAILCMP_API tailcmp_status tailcmp_dist_binomial(uint64_t n, uint64_t m, tailcmp_dist **out);
TAILCMP_API tailcmp_status tailcmp_dist_poisson(uint64_t lambda, tailcmp_dist **out);
/* {"weights": [...]} for finite distributions; caller frees with
 * tailcmp_string_free. */
TAILCMP_API tailcmp_status tailcmp_dist_to_json(const tailcmp_dist *dist, char **out);
TAILCMP_API void tailcmp_dist_free(tailcmp_dist *dist);
TAILCMP_API void tailcmp_string_free(char *s);

/* Predicates on a single distribution. opts may be NULL for defaults. */
TAILCMP_API tailcmp_status tailcmp_check_skew(const tailcmp_dist *dist, const tailcmp_options *opts,
                                              tailcmp_report **out);
TAILCMP_API tailcmp_status tailcmp_check_load(const tailcmp_dist *dist, const tailcmp_options *opts,
                                              tailcmp_report **out);
TAILCMP_API tailcmp_status tailcmp_alpha(const tailcmp_dist *dist, const tailcmp_options *opts,
                                         tailcmp_report **out);

/* Hypotheses, conclusion and proof certificate for P(S >= s) >= P(S + X >= s + m).
 * Both distributions must be finite. */
TAILCMP_API tailcmp_status tailcmp_compare_tails(const tailcmp_dist *S, const tailcmp_dist *X,
                                                 const tailcmp_options *opts, tailcmp_report **out);

/* Tail-monotonicity chains. */
TAILCMP_API tailcmp_status tailcmp_verify_cb(uint64_t n, uint64_t k_max, const tailcmp_options *opts,
                                             tailcmp_report **out);
TAILCMP_API tailcmp_status tailcmp_verify_teicher(uint64_t k_max, const tailcmp_options *opts,
                                                  tailcmp_report **out);
TAILCMP_API tailcmp_status tailcmp_verify_kane(const uint64_t *lambdas, size_t count,
                                               const tailcmp_options *opts, tailcmp_report **out);
TAILCMP_API tailcmp_status tailcmp_verify_jogdeo(uint64_t n, uint64_t m, uint64_t k_max,
                                                 const tailcmp_options *opts, tailcmp_report **out);

/* Sweeps. Randomized targets require a seed in opts. */
TAILCMP_API tailcmp_status tailcmp_sweep_conj1(uint64_t m_lo, uint64_t m_hi, uint64_t n_max,
                                               const tailcmp_options *opts, tailcmp_report **out);
TAILCMP_API tailcmp_status tailcmp_sweep_conj2(uint64_t m_lo, uint64_t m_hi,
                                               const tailcmp_options *opts, tailcmp_report **out);
TAILCMP_API tailcmp_status tailcmp_prop_theorem1(uint64_t trials, uint64_t support_cap,
                                                 const tailcmp_options *opts, tailcmp_report **out);
TAILCMP_API tailcmp_status tailcmp_prop_lemma1(uint64_t trials, uint64_t support_cap,
                                               const tailcmp_options *opts, tailcmp_report **out);
TAILCMP_API tailcmp_status tailcmp_prop_kane(uint64_t sequences, uint64_t max_len,
                                             uint64_t lambda_max, const tailcmp_options *opts,
                                             tailcmp_report **out);

/* Reports. Strings are owned by the report and live until it is freed. */
TAILCMP_API tailcmp_outcome tailcmp_report_outcome(const tailcmp_report *report);
TAILCMP_API const char *tailcmp_report_json(const tailcmp_report *report);
/* One row per step or grid point; "" when the report has no tabular form. */
TAILCMP_API const char *tailcmp_report_csv(const tailcmp_report *report);
TAILCMP_API void tailcmp_report_free(tailcmp_report *report);

#ifdef __cplusplus
}
#endif

#endif /* TAILCMP_H */
