#include "pseudoexp/pseudoexp.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "conjugate.hpp"
#include "distributions.hpp"
#include "fit.hpp"
#include "harm.hpp"
#include "likelihood.hpp"
#include "pseudo_gamma.hpp"
#include "sample.hpp"
#include "study.hpp"
#include "version.hpp"

using namespace pseudoexp;

namespace {

thread_local std::string g_last_error;

pxp_status fail(pxp_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Maps the exception currently being handled onto a status code.
pxp_status fail_current() {
  try {
    throw;
  } catch (const ConstraintError& e) {
    return fail(PXP_ERR_CONSTRAINT, e.what());
  } catch (const ProprietyError& e) {
    return fail(PXP_ERR_PROPRIETY, e.what());
  } catch (const ConvergenceError& e) {
    return fail(PXP_ERR_CONVERGENCE, e.what());
  } catch (const DataError& e) {
    return fail(PXP_ERR_DATA, e.what());
  } catch (const IoError& e) {
    return fail(PXP_ERR_IO, e.what());
  } catch (const ConfigError& e) {
    return fail(PXP_ERR_INVALID, e.what());
  } catch (const std::domain_error& e) {
    return fail(PXP_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PXP_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PXP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PXP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PXP_ERR_INTERNAL, "unknown error");
  }
}

ModelVariant to_variant(pxp_model m) {
  switch (m) {
    case PXP_MODEL_FULL: return ModelVariant::Full;
    case PXP_MODEL_SUB1: return ModelVariant::SubModelI;
    case PXP_MODEL_SUB2: return ModelVariant::SubModelII;
  }
  throw std::invalid_argument("unknown model variant code");
}

PseudoExpParams to_params(ModelVariant v, double t1, double t2, double t3) {
  PseudoExpParams p{t1, t2, t3};
  validate_params(p, v);
  return p;
}

PriorChoice to_choice(const pxp_prior_spec& spec) {
  PriorChoice c;
  switch (spec.kind) {
    case PXP_PRIOR_INDEPENDENT:
      c.kind = PriorChoice::Kind::IndependentGamma;
      c.theta1 = {spec.alpha1, spec.beta1};
      c.theta3 = {spec.alpha3, spec.beta3};
      break;
    case PXP_PRIOR_IMPROPER:
      c.kind = PriorChoice::Kind::Improper;
      break;
    case PXP_PRIOR_PSEUDO:
      c.kind = PriorChoice::Kind::PseudoGamma;
      c.pseudo = {spec.tau1, spec.tau2, spec.psi1, spec.psi2, spec.psi3};
      break;
    default:
      throw std::invalid_argument("unknown prior kind code");
  }
  if (spec.has_theta2) {
    c.theta2 = {spec.alpha2, spec.beta2};
    c.has_theta2 = true;
  }
  return c;
}

PseudoGammaPrior to_pseudo(const pxp_prior_spec& spec) {
  if (spec.kind != PXP_PRIOR_PSEUDO) {
    throw std::invalid_argument("prior kind must be pseudo for this operation");
  }
  PseudoGammaPrior p{spec.tau1, spec.tau2, spec.psi1, spec.psi2, spec.psi3};
  validate_pseudo_prior(p);
  return p;
}

ChainOptions to_chain_options(const pxp_chain_opts* opts) {
  ChainOptions c;
  if (opts) {
    c.seed = opts->seed;
    if (opts->kept) c.kept = opts->kept;
    if (opts->thinning) c.thinning = opts->thinning;
    if (opts->burn_in) c.burn_in = opts->burn_in;
  }
  return c;
}

template <typename Fn>
pxp_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PXP_OK;
  } catch (...) {
    return fail_current();
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

struct pxp_dataset {
  BivariateSample sample;
};

struct pxp_chain {
  ChainResult result;
};

struct pxp_marginal {
  MarginalPosterior marginal;
};

struct pxp_fit {
  FitResult result;
};

extern "C" {

const char* pxp_version(void) { return PSEUDOEXP_VERSION; }

const char* pxp_last_error(void) { return g_last_error.c_str(); }

/* ---- datasets ---------------------------------------------------------- */

pxp_status pxp_dataset_create(const double* x, const double* y, size_t n, pxp_dataset** out) {
  return guarded([&] {
    require(x && y && out, "null pointer argument");
    *out = new pxp_dataset{
        BivariateSample(std::vector<double>(x, x + n), std::vector<double>(y, y + n))};
  });
}

pxp_status pxp_dataset_read_csv(const char* path, pxp_dataset** out) {
  return guarded([&] {
    require(path && out, "null pointer argument");
    *out = new pxp_dataset{BivariateSample::read_csv(path)};
  });
}

pxp_status pxp_dataset_write_csv(const pxp_dataset* ds, const char* path) {
  return guarded([&] {
    require(ds && path, "null pointer argument");
    ds->sample.write_csv(path);
  });
}

void pxp_dataset_free(pxp_dataset* ds) { delete ds; }

size_t pxp_dataset_size(const pxp_dataset* ds) { return ds ? ds->sample.size() : 0; }

pxp_status pxp_dataset_get(const pxp_dataset* ds, size_t index, double* x, double* y) {
  return guarded([&] {
    require(ds && x && y, "null pointer argument");
    require(index < ds->sample.size(), "dataset index out of range");
    *x = ds->sample.x(index);
    *y = ds->sample.y(index);
  });
}

pxp_status pxp_dataset_stats(const pxp_dataset* ds, double* sum_x, double* sum_y,
                             double* sum_xy) {
  return guarded([&] {
    require(ds, "null pointer argument");
    if (sum_x) *sum_x = ds->sample.sum_x();
    if (sum_y) *sum_y = ds->sample.sum_y();
    if (sum_xy) *sum_xy = ds->sample.sum_xy();
  });
}

pxp_status pxp_simulate(pxp_model model, double theta1, double theta2, double theta3,
                        size_t n, uint64_t seed, pxp_dataset** out) {
  return guarded([&] {
    require(out, "null pointer argument");
    const ModelVariant v = to_variant(model);
    Rng rng(seed);
    *out = new pxp_dataset{sample_bivariate(to_params(v, theta1, theta2, theta3), v, n, rng)};
  });
}

/* ---- densities and likelihood ------------------------------------------ */

pxp_status pxp_joint_logpdf(pxp_model model, double theta1, double theta2, double theta3,
                            double x, double y, double* out) {
  return guarded([&] {
    require(out, "null pointer argument");
    const ModelVariant v = to_variant(model);
    *out = joint_logpdf(to_params(v, theta1, theta2, theta3), v, x, y);
  });
}

pxp_status pxp_log_likelihood(const pxp_dataset* ds, pxp_model model, double theta1,
                              double theta2, double theta3, double* marginal_term,
                              double* conditional_term) {
  return guarded([&] {
    require(ds, "null pointer argument");
    const ModelVariant v = to_variant(model);
    const FactoredLogLikelihood ll =
        log_likelihood(ds->sample, to_params(v, theta1, theta2, theta3), v);
    if (marginal_term) *marginal_term = ll.marginal_term;
    if (conditional_term) *conditional_term = ll.conditional_term;
  });
}

pxp_status pxp_gamma_pdf(double shape, double rate, double x, double* out) {
  return guarded([&] {
    require(out, "null pointer argument");
    *out = gamma_pdf({shape, rate}, x);
  });
}

pxp_status pxp_gamma_cdf(double shape, double rate, double x, double* out) {
  return guarded([&] {
    require(out, "null pointer argument");
    *out = gamma_cdf({shape, rate}, x);
  });
}

pxp_status pxp_gamma_quantile(double shape, double rate, double level, double* out) {
  return guarded([&] {
    require(out, "null pointer argument");
    *out = gamma_quantile({shape, rate}, level);
  });
}

pxp_status pxp_gamma_summary(double shape, double rate, double level, double* mean,
                             double* variance, double* lower, double* upper) {
  return guarded([&] {
    GammaPosterior post{shape, rate, 0};
    const PosteriorSummary s = summarize(post, level);
    if (mean) *mean = s.mean;
    if (variance) *variance = s.variance;
    if (lower) *lower = s.lower;
    if (upper) *upper = s.upper;
  });
}

pxp_status pxp_lomax_pdf(double shape, double scale, double t, double* out) {
  return guarded([&] {
    require(out, "null pointer argument");
    *out = lomax_pdf({shape, scale}, t);
  });
}

pxp_status pxp_lomax_cdf(double shape, double scale, double t, double* out) {
  return guarded([&] {
    require(out, "null pointer argument");
    *out = lomax_cdf({shape, scale}, t);
  });
}

pxp_status pxp_lomax_quantile(double shape, double scale, double level, double* out) {
  return guarded([&] {
    require(out, "null pointer argument");
    *out = lomax_quantile({shape, scale}, level);
  });
}

pxp_status pxp_lomax_mean(double shape, double scale, double* out) {
  return guarded([&] {
    require(out, "null pointer argument");
    *out = lomax_mean({shape, scale});
  });
}

pxp_status pxp_lomax_variance(double shape, double scale, double* out) {
  return guarded([&] {
    require(out, "null pointer argument");
    *out = lomax_variance({shape, scale});
  });
}

/* ---- maximum likelihood -------------------------------------------------- */

pxp_status pxp_mle(const pxp_dataset* ds, pxp_model model, pxp_mle_result* out) {
  return guarded([&] {
    require(ds && out, "null pointer argument");
    const MleResult r = mle(ds->sample, to_variant(model));
    out->theta1 = r.params.theta1;
    out->theta2 = r.params.theta2;
    out->theta3 = r.params.theta3;
    out->loglik = r.loglik_at_max;
    out->converged = r.converged ? 1 : 0;
    out->on_boundary = r.on_boundary ? 1 : 0;
    out->iterations = r.iterations;
  });
}

/* ---- conjugate posteriors ------------------------------------------------ */

pxp_status pxp_posterior_theta1(const pxp_dataset* ds, const pxp_prior_spec* prior,
                                double* shape, double* rate) {
  return guarded([&] {
    require(ds && prior && shape && rate, "null pointer argument");
    const GammaPosterior p = posterior_theta1(to_choice(*prior).to_prior_spec(), ds->sample);
    *shape = p.shape;
    *rate = p.rate;
  });
}

pxp_status pxp_posterior_theta3(const pxp_dataset* ds, pxp_model model,
                                const pxp_prior_spec* prior, double* shape, double* rate) {
  return guarded([&] {
    require(ds && prior && shape && rate, "null pointer argument");
    const PriorSpec spec = to_choice(*prior).to_prior_spec();
    GammaPosterior p;
    switch (to_variant(model)) {
      case ModelVariant::SubModelI: p = posterior_theta3_sub1(spec, ds->sample); break;
      case ModelVariant::SubModelII: p = posterior_theta3_sub2(spec, ds->sample); break;
      case ModelVariant::Full:
        throw ConstraintError("theta3 has no closed-form posterior in the full model");
    }
    *shape = p.shape;
    *rate = p.rate;
  });
}

pxp_status pxp_full_theta23_log_kernel(const pxp_dataset* ds, const pxp_prior_spec* prior,
                                       double theta2, double theta3, double* out) {
  return guarded([&] {
    require(ds && prior && out, "null pointer argument");
    *out = full_model_theta23_log_kernel(to_choice(*prior).to_prior_spec(), ds->sample,
                                         theta2, theta3);
  });
}

/* ---- pseudo-gamma --------------------------------------------------------- */

pxp_status pxp_pseudo_prior_log_kernel(const pxp_prior_spec* prior, double theta1,
                                       double theta3, double* out) {
  return guarded([&] {
    require(prior && out, "null pointer argument");
    *out = prior_log_kernel(to_pseudo(*prior), theta1, theta3);
  });
}

pxp_status pxp_pseudo_posterior_log_kernel(const pxp_dataset* ds, pxp_model model,
                                           const pxp_prior_spec* prior, double theta1,
                                           double theta3, double* out) {
  return guarded([&] {
    require(ds && prior && out, "null pointer argument");
    *out = posterior_log_kernel(to_pseudo(*prior), ds->sample.stats(), to_variant(model),
                                theta1, theta3);
  });
}

pxp_status pxp_general_posterior_log_kernel(const pxp_dataset* ds, pxp_model model,
                                            const pxp_prior_spec* prior, double theta1,
                                            double theta2, double theta3, double* out) {
  return guarded([&] {
    require(ds && prior && out, "null pointer argument");
    const ModelVariant v = to_variant(model);
    const PriorChoice choice = to_choice(*prior);
    std::optional<GammaParams> theta2_prior;
    if (v == ModelVariant::Full) {
      require(choice.has_theta2, "full-model pseudo kernel needs alpha2/beta2");
      theta2_prior = choice.theta2;
    }
    PseudoExpParams params{theta1, theta2, theta3};
    if (v == ModelVariant::SubModelI) params = PseudoExpParams::sub_model_1(theta1, theta3);
    if (v == ModelVariant::SubModelII) params = PseudoExpParams::sub_model_2(theta1, theta3);
    *out = general_posterior_log_kernel(to_pseudo(*prior), theta2_prior, ds->sample, v, params);
  });
}

pxp_status pxp_marginal_create(const pxp_dataset* ds, pxp_model model,
                               const pxp_prior_spec* prior, int parameter_id,
                               pxp_marginal** out) {
  return guarded([&] {
    require(ds && prior && out, "null pointer argument");
    const ModelVariant v = to_variant(model);
    const PseudoGammaPrior pg = to_pseudo(*prior);
    if (parameter_id == 1) {
      *out = new pxp_marginal{marginal_theta1(pg, ds->sample.stats(), v)};
    } else if (parameter_id == 3) {
      *out = new pxp_marginal{marginal_theta3(pg, ds->sample.stats(), v)};
    } else {
      throw std::invalid_argument("parameter_id must be 1 or 3");
    }
  });
}

void pxp_marginal_free(pxp_marginal* m) { delete m; }

pxp_status pxp_marginal_mean(const pxp_marginal* m, double* out) {
  return guarded([&] {
    require(m && out, "null pointer argument");
    *out = m->marginal.mean();
  });
}

pxp_status pxp_marginal_variance(const pxp_marginal* m, double* out) {
  return guarded([&] {
    require(m && out, "null pointer argument");
    *out = m->marginal.variance();
  });
}

pxp_status pxp_marginal_log_normalizer(const pxp_marginal* m, double* out) {
  return guarded([&] {
    require(m && out, "null pointer argument");
    *out = m->marginal.log_normalizer();
  });
}

pxp_status pxp_marginal_pdf(const pxp_marginal* m, double t, double* out) {
  return guarded([&] {
    require(m && out, "null pointer argument");
    *out = m->marginal.pdf(t);
  });
}

pxp_status pxp_marginal_cdf(const pxp_marginal* m, double t, double* out) {
  return guarded([&] {
    require(m && out, "null pointer argument");
    *out = m->marginal.cdf(t);
  });
}

pxp_status pxp_marginal_quantile(const pxp_marginal* m, double level, double* out) {
  return guarded([&] {
    require(m && out, "null pointer argument");
    *out = m->marginal.quantile(level);
  });
}

/* ---- hit-and-run Metropolis ---------------------------------------------- */

pxp_status pxp_harm_run(size_t dim, pxp_log_target_fn target, void* ctx,
                        const double* initial, const double* step_scale,
                        const pxp_chain_opts* opts, pxp_chain** out) {
  return guarded([&] {
    require(target && initial && out, "null pointer argument");
    require(dim >= 1, "dimension must be at least 1");
    LogTarget t;
    t.dimension = dim;
    t.log_density = [target, ctx, dim](std::span<const double> point) {
      return target(point.data(), dim, ctx);
    };
    const ChainOptions copts = to_chain_options(opts);
    ChainConfig cfg;
    cfg.iterations = copts.kept * copts.thinning;
    cfg.burn_in = copts.burn_in;
    cfg.thinning = copts.thinning;
    cfg.seed = copts.seed;
    cfg.initial_point.assign(initial, initial + dim);
    if (step_scale) cfg.step_scale.assign(step_scale, step_scale + dim);
    *out = new pxp_chain{run_chain(t, cfg)};
  });
}

void pxp_chain_free(pxp_chain* c) { delete c; }

size_t pxp_chain_kept(const pxp_chain* c) { return c ? c->result.kept : 0; }

size_t pxp_chain_dim(const pxp_chain* c) { return c ? c->result.dimension : 0; }

pxp_status pxp_chain_draw(const pxp_chain* c, size_t index, double* point) {
  return guarded([&] {
    require(c && point, "null pointer argument");
    require(index < c->result.kept, "draw index out of range");
    const auto row = c->result.row(index);
    std::memcpy(point, row.data(), row.size() * sizeof(double));
  });
}

pxp_status pxp_chain_acceptance_rate(const pxp_chain* c, double* out) {
  return guarded([&] {
    require(c && out, "null pointer argument");
    *out = c->result.acceptance_rate;
  });
}

pxp_status pxp_chain_ess(const pxp_chain* c, size_t dim_index, double* out) {
  return guarded([&] {
    require(c && out, "null pointer argument");
    require(dim_index < c->result.dimension, "dimension index out of range");
    *out = c->result.ess[dim_index];
  });
}

pxp_status pxp_chain_summary(const pxp_chain* c, size_t dim_index, double level,
                             double* mean, double* variance, double* lower, double* upper) {
  return guarded([&] {
    require(c, "null pointer argument");
    require(dim_index < c->result.dimension, "dimension index out of range");
    const auto summaries = summarize_chain(c->result, level);
    const PosteriorSummary& s = summaries[dim_index];
    if (mean) *mean = s.mean;
    if (variance) *variance = s.variance;
    if (lower) *lower = s.lower;
    if (upper) *upper = s.upper;
  });
}

/* ---- whole-model fits ----------------------------------------------------- */

pxp_status pxp_fit_run(const pxp_dataset* ds, pxp_model model, const pxp_prior_spec* prior,
                       pxp_method method, const pxp_chain_opts* opts, double level,
                       pxp_fit** out) {
  return guarded([&] {
    require(ds && prior && out, "null pointer argument");
    FitMethod m;
    switch (method) {
      case PXP_METHOD_ANALYTIC: m = FitMethod::Analytic; break;
      case PXP_METHOD_QUADRATURE: m = FitMethod::Quadrature; break;
      case PXP_METHOD_HARM: m = FitMethod::Harm; break;
      default: throw std::invalid_argument("unknown method code");
    }
    *out = new pxp_fit{fit_model(ds->sample, to_variant(model), to_choice(*prior), m,
                                 to_chain_options(opts), level)};
  });
}

void pxp_fit_free(pxp_fit* f) { delete f; }

size_t pxp_fit_param_count(const pxp_fit* f) { return f ? f->result.params.size() : 0; }

pxp_status pxp_fit_param(const pxp_fit* f, size_t index, const char** name, double* mean,
                         double* variance, double* lower, double* upper, double* ess) {
  return guarded([&] {
    require(f, "null pointer argument");
    require(index < f->result.params.size(), "parameter index out of range");
    const ParamReport& p = f->result.params[index];
    if (name) *name = p.name.c_str();
    if (mean) *mean = p.summary.mean;
    if (variance) *variance = p.summary.variance;
    if (lower) *lower = p.summary.lower;
    if (upper) *upper = p.summary.upper;
    if (ess) *ess = p.ess;
  });
}

pxp_status pxp_fit_mle(const pxp_fit* f, pxp_mle_result* out) {
  return guarded([&] {
    require(f && out, "null pointer argument");
    const MleResult& r = f->result.mle;
    out->theta1 = r.params.theta1;
    out->theta2 = r.params.theta2;
    out->theta3 = r.params.theta3;
    out->loglik = r.loglik_at_max;
    out->converged = r.converged ? 1 : 0;
    out->on_boundary = r.on_boundary ? 1 : 0;
    out->iterations = r.iterations;
  });
}

pxp_status pxp_fit_predictive(const pxp_fit* f, int which, double* shape, double* scale) {
  return guarded([&] {
    require(f && shape && scale, "null pointer argument");
    const auto& pred = which == 0 ? f->result.predictive_x : f->result.predictive_y;
    if (!pred) {
      throw ConstraintError("fit carries no posterior-predictive law for this target");
    }
    *shape = pred->shape;
    *scale = pred->scale;
  });
}

pxp_status pxp_fit_chain_info(const pxp_fit* f, double* acceptance_rate, size_t* kept,
                              size_t* thinning, size_t* burn_in) {
  return guarded([&] {
    require(f, "null pointer argument");
    if (acceptance_rate) {
      *acceptance_rate = f->result.used_chain
                             ? f->result.acceptance_rate
                             : std::numeric_limits<double>::quiet_NaN();
    }
    if (kept) *kept = f->result.used_chain ? f->result.chain.kept : 0;
    if (thinning) *thinning = f->result.used_chain ? f->result.chain.thinning : 0;
    if (burn_in) *burn_in = f->result.used_chain ? f->result.chain.burn_in : 0;
  });
}

const char* pxp_fit_method_name(const pxp_fit* f) {
  return f ? method_name(f->result.method) : "?";
}

/* ---- simulation study ----------------------------------------------------- */

pxp_status pxp_study_run_file(const char* config_path, int fast, const char* out_csv) {
  return guarded([&] {
    require(config_path && out_csv, "null pointer argument");
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot open config: ") + config_path);
    std::ostringstream raw;
    raw << in.rdbuf();
    std::istringstream text(raw.str());
    StudyConfig config = parse_study_config(text);
    if (fast) config.chain.kept = std::min<std::size_t>(config.chain.kept, 1000);

    const std::vector<StudyRow> rows = run_study(config);

    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(raw.str())));
    std::ostringstream provenance;
    provenance << "pseudoexp study " << PSEUDOEXP_VERSION << "\n"
               << "seed=" << config.seed << " fast=" << (fast ? 1 : 0)
               << " kept=" << config.chain.kept << " thinning=" << config.chain.thinning
               << " burn_in=" << config.chain.burn_in << " replications="
               << config.replications << " config_hash=" << hash;
    export_study_file(rows, out_csv, provenance.str());
  });
}

} /* extern "C" */
