/*
 * pseudoexp — Bayesian inference for the bivariate pseudo-exponential model
 *
 * C interface of the shared library. The model is X ~ Exp(theta1) with
 * Y | X = x ~ Exp(theta2 + theta3 x); sub-model I constrains theta2 == theta3
 * and sub-model II constrains theta2 == 0. All functions return a pxp_status;
 * on failure pxp_last_error() describes the problem (thread-local). Opaque
 * handles are freed with their matching *_free function and are not shared
 * between threads while being built.
 */

#ifndef PSEUDOEXP_H
#define PSEUDOEXP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pxp_status {
  PXP_OK = 0,
  PXP_ERR_INVALID = 1,     /* bad argument or null pointer */
  PXP_ERR_DOMAIN = 2,      /* evaluation outside a function's domain */
  PXP_ERR_CONSTRAINT = 3,  /* parameters violate the model variant or method */
  PXP_ERR_PROPRIETY = 4,   /* improper-prior posterior is itself improper */
  PXP_ERR_CONVERGENCE = 5, /* iteration budget exhausted */
  PXP_ERR_IO = 6,          /* file could not be read or written */
  PXP_ERR_DATA = 7,        /* dataset contents violate the input contract */
  PXP_ERR_INTERNAL = 8
} pxp_status;

typedef enum pxp_model {
  PXP_MODEL_FULL = 0,
  PXP_MODEL_SUB1 = 1, /* theta2 == theta3 */
  PXP_MODEL_SUB2 = 2  /* theta2 == 0 */
} pxp_model;

typedef enum pxp_prior_kind {
  PXP_PRIOR_INDEPENDENT = 0,
  PXP_PRIOR_IMPROPER = 1,
  PXP_PRIOR_PSEUDO = 2
} pxp_prior_kind;

typedef enum pxp_method {
  PXP_METHOD_ANALYTIC = 0,
  PXP_METHOD_QUADRATURE = 1,
  PXP_METHOD_HARM = 2
} pxp_method;

/* Gamma hyper-parameters are shape/rate. The pseudo prior places
 * Gamma(tau1, psi1) on theta3 and Gamma(tau2, psi2 + psi3*theta3) on
 * theta1 | theta3; alpha2/beta2 double as the independent theta2 prior that a
 * full-model pseudo fit requires (set has_theta2 = 1 in that case). */
typedef struct pxp_prior_spec {
  int kind; /* pxp_prior_kind */
  double alpha1, beta1;
  double alpha2, beta2;
  double alpha3, beta3;
  int has_theta2;
  double tau1, tau2, psi1, psi2, psi3;
} pxp_prior_spec;

typedef struct pxp_chain_opts {
  uint64_t seed;
  size_t kept;     /* 0 -> 10000 */
  size_t thinning; /* 0 -> 10 */
  size_t burn_in;  /* 0 -> 10000 */
} pxp_chain_opts;

typedef struct pxp_mle_result {
  double theta1, theta2, theta3;
  double loglik;
  int converged;
  int on_boundary;
  int iterations;
} pxp_mle_result;

typedef struct pxp_dataset pxp_dataset;
typedef struct pxp_chain pxp_chain;
typedef struct pxp_marginal pxp_marginal;
typedef struct pxp_fit pxp_fit;

const char* pxp_version(void);
/* Message for the calling thread's most recent failure; empty if none. */
const char* pxp_last_error(void);

/* ---- datasets ---------------------------------------------------------- */

pxp_status pxp_dataset_create(const double* x, const double* y, size_t n,
                              pxp_dataset** out);
/* CSV with header exactly `x,y`; nonpositive or malformed rows are rejected
 * with their 1-based row numbers in pxp_last_error(). */
pxp_status pxp_dataset_read_csv(const char* path, pxp_dataset** out);
pxp_status pxp_dataset_write_csv(const pxp_dataset* ds, const char* path);
void pxp_dataset_free(pxp_dataset* ds);
size_t pxp_dataset_size(const pxp_dataset* ds);
pxp_status pxp_dataset_get(const pxp_dataset* ds, size_t index, double* x, double* y);
pxp_status pxp_dataset_stats(const pxp_dataset* ds, double* sum_x, double* sum_y,
                             double* sum_xy);

/* Two-step simulation: x ~ Exp(theta1), then y | x ~ Exp(theta2 + theta3 x).
 * Deterministic in the seed. Parameters must satisfy the variant. */
pxp_status pxp_simulate(pxp_model model, double theta1, double theta2, double theta3,
                        size_t n, uint64_t seed, pxp_dataset** out);

/* ---- densities and likelihood ------------------------------------------ */

pxp_status pxp_joint_logpdf(pxp_model model, double theta1, double theta2, double theta3,
                            double x, double y, double* out);
/* Factored log-likelihood: marginal holds the theta1 terms, conditional the
 * (theta2, theta3) terms; their sum is the full log-likelihood. */
pxp_status pxp_log_likelihood(const pxp_dataset* ds, pxp_model model, double theta1,
                              double theta2, double theta3, double* marginal_term,
                              double* conditional_term);

pxp_status pxp_gamma_pdf(double shape, double rate, double x, double* out);
pxp_status pxp_gamma_cdf(double shape, double rate, double x, double* out);
pxp_status pxp_gamma_quantile(double shape, double rate, double level, double* out);
/* mean, variance and the equal-tail interval at the given coverage level */
pxp_status pxp_gamma_summary(double shape, double rate, double level, double* mean,
                             double* variance, double* lower, double* upper);

pxp_status pxp_lomax_pdf(double shape, double scale, double t, double* out);
pxp_status pxp_lomax_cdf(double shape, double scale, double t, double* out);
pxp_status pxp_lomax_quantile(double shape, double scale, double level, double* out);
pxp_status pxp_lomax_mean(double shape, double scale, double* out);     /* shape > 1 */
pxp_status pxp_lomax_variance(double shape, double scale, double* out); /* shape > 2 */

/* ---- maximum likelihood -------------------------------------------------- */

pxp_status pxp_mle(const pxp_dataset* ds, pxp_model model, pxp_mle_result* out);

/* ---- conjugate posteriors ------------------------------------------------ */

/* Posterior gamma parameters under an independent or improper prior. theta3
 * updates use the sub-model statistic (I: sum y + sum xy, II: sum xy). */
pxp_status pxp_posterior_theta1(const pxp_dataset* ds, const pxp_prior_spec* prior,
                                double* shape, double* rate);
pxp_status pxp_posterior_theta3(const pxp_dataset* ds, pxp_model model,
                                const pxp_prior_spec* prior, double* shape, double* rate);

/* Log-kernel of the full-model (theta2, theta3) posterior block. */
pxp_status pxp_full_theta23_log_kernel(const pxp_dataset* ds, const pxp_prior_spec* prior,
                                       double theta2, double theta3, double* out);

/* ---- pseudo-gamma prior and posterior ------------------------------------ */

pxp_status pxp_pseudo_prior_log_kernel(const pxp_prior_spec* prior, double theta1,
                                       double theta3, double* out);
/* Simpler-prior (psi2 = 0) joint posterior log-kernel on a sub-model. */
pxp_status pxp_pseudo_posterior_log_kernel(const pxp_dataset* ds, pxp_model model,
                                           const pxp_prior_spec* prior, double theta1,
                                           double theta3, double* out);
/* Pseudo-prior posterior log-kernel for any psi2 and any variant (theta2 is
 * ignored for the sub-models). */
pxp_status pxp_general_posterior_log_kernel(const pxp_dataset* ds, pxp_model model,
                                            const pxp_prior_spec* prior, double theta1,
                                            double theta2, double theta3, double* out);

/* Quadrature-normalised marginal posterior of theta1 or theta3 (parameter_id
 * 1 or 3) under the simpler pseudo prior. */
pxp_status pxp_marginal_create(const pxp_dataset* ds, pxp_model model,
                               const pxp_prior_spec* prior, int parameter_id,
                               pxp_marginal** out);
void pxp_marginal_free(pxp_marginal* m);
pxp_status pxp_marginal_mean(const pxp_marginal* m, double* out);
pxp_status pxp_marginal_variance(const pxp_marginal* m, double* out);
pxp_status pxp_marginal_log_normalizer(const pxp_marginal* m, double* out);
pxp_status pxp_marginal_pdf(const pxp_marginal* m, double t, double* out);
pxp_status pxp_marginal_cdf(const pxp_marginal* m, double t, double* out);
pxp_status pxp_marginal_quantile(const pxp_marginal* m, double level, double* out);

/* ---- hit-and-run Metropolis ---------------------------------------------- */

/* Log-density of the target at `point` (dim coordinates, all positive); may
 * return -HUGE_VAL for zero density. Must be deterministic. */
typedef double (*pxp_log_target_fn)(const double* point, size_t dim, void* ctx);

/* Runs burn-in (with step-size adaptation), then kept*thinning raw steps,
 * keeping every thinning-th state. step_scale may be NULL (derived from the
 * initial point). */
pxp_status pxp_harm_run(size_t dim, pxp_log_target_fn target, void* ctx,
                        const double* initial, const double* step_scale,
                        const pxp_chain_opts* opts, pxp_chain** out);
void pxp_chain_free(pxp_chain* c);
size_t pxp_chain_kept(const pxp_chain* c);
size_t pxp_chain_dim(const pxp_chain* c);
pxp_status pxp_chain_draw(const pxp_chain* c, size_t index, double* point);
pxp_status pxp_chain_acceptance_rate(const pxp_chain* c, double* out);
pxp_status pxp_chain_ess(const pxp_chain* c, size_t dim_index, double* out);
pxp_status pxp_chain_summary(const pxp_chain* c, size_t dim_index, double level,
                             double* mean, double* variance, double* lower, double* upper);

/* ---- whole-model fits ----------------------------------------------------- */

/* Runs the posterior machinery for (model, prior, method) and packages
 * per-parameter summaries, the MLE block and (for conjugate sub-model fits)
 * the posterior-predictive Lomax laws. method PXP_METHOD_ANALYTIC requires a
 * conjugate case; PXP_METHOD_QUADRATURE requires the psi2 = 0 pseudo prior on
 * a sub-model. opts may be NULL for protocol defaults. */
pxp_status pxp_fit_run(const pxp_dataset* ds, pxp_model model,
                       const pxp_prior_spec* prior, pxp_method method,
                       const pxp_chain_opts* opts, double level, pxp_fit** out);
void pxp_fit_free(pxp_fit* f);
size_t pxp_fit_param_count(const pxp_fit* f);
/* name receives "theta1"/"theta2"/"theta3"; ess is NaN for exact summaries. */
pxp_status pxp_fit_param(const pxp_fit* f, size_t index, const char** name, double* mean,
                         double* variance, double* lower, double* upper, double* ess);
pxp_status pxp_fit_mle(const pxp_fit* f, pxp_mle_result* out);
/* which: 0 = next x, 1 = next y. PXP_ERR_CONSTRAINT when the fit carries no
 * predictive law (full model, or pseudo prior). */
pxp_status pxp_fit_predictive(const pxp_fit* f, int which, double* shape, double* scale);
/* acceptance is NaN unless a chain ran */
pxp_status pxp_fit_chain_info(const pxp_fit* f, double* acceptance_rate, size_t* kept,
                              size_t* thinning, size_t* burn_in);
const char* pxp_fit_method_name(const pxp_fit* f);

/* ---- simulation study ----------------------------------------------------- */

/* Parses a study configuration file, runs the study and writes the CSV table
 * (header n,parameter,prior,mean,ci_low,ci_high behind '#' provenance
 * comments). fast != 0 caps kept draws at 1000. */
pxp_status pxp_study_run_file(const char* config_path, int fast, const char* out_csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PSEUDOEXP_H */
