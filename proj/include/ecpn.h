#ifndef ECPN_H
#define ECPN_H

/* C interface to the exact curve p-power norm library: division polynomials,
 * Frobenius-structure extraction, supersingular tables, structural
 * verification, and finite-field specialization reports.
 *
 * All entry points are thread-compatible: distinct contexts may be used from
 * distinct threads, a single context must not be shared concurrently.
 *
 * Functions returning char** allocate the string with malloc; release it with
 * ecpn_string_free. Result strings are written on ECPN_OK and, for the verify
 * and specialize calls, on ECPN_ERR_VERIFY as well (the report describes the
 * failure). On any other error *out is left untouched and ecpn_last_error
 * carries a message.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ECPN_OK 0
#define ECPN_ERR_USAGE 1    /* invalid argument or parameter combination */
#define ECPN_ERR_VERIFY 2   /* a verification check or cross-check failed */
#define ECPN_ERR_BUDGET 3   /* the request exceeds a configured resource bound */
#define ECPN_ERR_IO 4       /* cache or filesystem trouble */
#define ECPN_ERR_INTERNAL 5 /* invariant violation inside the library */

typedef struct ecpn_ctx ecpn_ctx;

ecpn_ctx* ecpn_ctx_new(void);
void ecpn_ctx_free(ecpn_ctx* ctx);

/* empty path disables caching; the directory is created on first use */
int ecpn_set_cache_dir(ecpn_ctx* ctx, const char* path);
int ecpn_set_seed(ecpn_ctx* ctx, uint64_t seed);
/* cost bound for verification runs; 0 means unlimited */
int ecpn_set_budget(ecpn_ctx* ctx, uint64_t budget);
/* largest field order the point counter will enumerate */
int ecpn_set_enum_budget(ecpn_ctx* ctx, uint64_t budget);
/* probe count for randomized verification checks */
int ecpn_set_samples(ecpn_ctx* ctx, unsigned samples);
/* reserved for parallel runs; computations are currently single-threaded */
int ecpn_set_jobs(ecpn_ctx* ctx, unsigned jobs);
/* when nonzero, reports carry wall-clock millisecond fields */
int ecpn_set_timings(ecpn_ctx* ctx, int enabled);

/* message for the most recent failure on this context; never NULL */
const char* ecpn_last_error(const ecpn_ctx* ctx);

const char* ecpn_version(void);
void ecpn_string_free(char* s);

/* canonical text of the m-th division polynomial; p = 0 selects the integer
 * coefficient ring, otherwise coefficients are reduced mod the prime p */
int ecpn_divpoly(ecpn_ctx* ctx, unsigned m, uint64_t p, char** out);

/* JSON reports */
int ecpn_theta_json(ecpn_ctx* ctx, uint64_t p, char** out);
int ecpn_eta_json(ecpn_ctx* ctx, uint64_t p, char** out);
int ecpn_ssj_json(ecpn_ctx* ctx, uint64_t p, char** out);
int ecpn_verify_json(ecpn_ctx* ctx, uint64_t p, unsigned n, char** out);
int ecpn_specialize_json(ecpn_ctx* ctx, uint64_t p, uint64_t q, unsigned samples,
                         unsigned n_max, char** out);

#ifdef __cplusplus
}
#endif

#endif /* ECPN_H */
