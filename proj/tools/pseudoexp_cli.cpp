// pseudoexp command-line front end. Everything numerical goes through the
// shared library's C interface; this file only parses flags, formats output
// files and maps library status codes onto process exit codes:
//   0 success, 1 I/O failure, 2 flag/config validation, 3 dataset validation.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pseudoexp/pseudoexp.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

[[noreturn]] void die(int code, const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(code);
}

int exit_code_for(pxp_status status) {
  switch (status) {
    case PXP_ERR_IO: return kExitIo;
    case PXP_ERR_DATA: return kExitData;
    case PXP_ERR_INTERNAL: return kExitIo;
    default: return kExitUsage;
  }
}

void check(pxp_status status) {
  if (status != PXP_OK) die(exit_code_for(status), pxp_last_error());
}

void write_text_file(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) die(kExitIo, "cannot open for writing: " + tmp);
    out << contents;
    out.flush();
    if (!out) die(kExitIo, "write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) die(kExitIo, "rename failed for: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(kExitIo, "cannot open: " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit_output(const std::optional<std::string>& path, const std::string& contents) {
  if (path) {
    write_text_file(*path, contents);
  } else {
    std::cout << contents;
  }
}

// ---- minimal ordered JSON writer (17-significant-digit numbers) -------------

class JsonOut {
 public:
  void begin_object() { open('{'); }
  void begin_object(const std::string& key) { open_keyed(key, '{'); }
  void end_object() { close('}'); }
  void begin_array(const std::string& key) { open_keyed(key, '['); }
  void end_array() { close(']'); }

  void field(const std::string& key, double v) {
    prefix(key);
    if (std::isnan(v)) {
      s_ << "null";
    } else {
      s_ << fmt(v);
    }
  }
  void field(const std::string& key, std::uint64_t v) {
    prefix(key);
    s_ << v;
  }
  void field(const std::string& key, int v) {
    prefix(key);
    s_ << v;
  }
  void field(const std::string& key, bool v) {
    prefix(key);
    s_ << (v ? "true" : "false");
  }
  void field(const std::string& key, const std::string& v) {
    prefix(key);
    quote(v);
  }
  void null_field(const std::string& key) {
    prefix(key);
    s_ << "null";
  }
  void element(double v) {
    comma();
    indent();
    s_ << fmt(v);
  }
  void begin_object_element() {
    comma();
    indent();
    s_ << '{';
    depth_++;
    first_ = true;
  }

  std::string str() const { return s_.str() + "\n"; }

 private:
  void open(char c) {
    comma();
    indent();
    s_ << c;
    depth_++;
    first_ = true;
  }
  void open_keyed(const std::string& key, char c) {
    prefix(key);
    s_ << c;
    depth_++;
    first_ = true;
  }
  void close(char c) {
    depth_--;
    s_ << '\n';
    indent_only();
    s_ << c;
    first_ = false;
  }
  void prefix(const std::string& key) {
    comma();
    indent();
    quote(key);
    s_ << ": ";
  }
  void comma() {
    if (!first_) s_ << ',';
    first_ = false;
  }
  void indent() {
    if (depth_ > 0) s_ << '\n';
    indent_only();
  }
  void indent_only() {
    for (int i = 0; i < depth_; ++i) s_ << "  ";
  }
  void quote(const std::string& v) {
    s_ << '"';
    for (char c : v) {
      switch (c) {
        case '"': s_ << "\\\""; break;
        case '\\': s_ << "\\\\"; break;
        case '\n': s_ << "\\n"; break;
        case '\t': s_ << "\\t"; break;
        case '\r': s_ << "\\r"; break;
        default: s_ << c;
      }
    }
    s_ << '"';
  }

  std::ostringstream s_;
  int depth_ = 0;
  bool first_ = true;
};

// ---- shared flag bundles -----------------------------------------------------

struct ModelFlags {
  std::string model;
  pxp_model code() const {
    if (model == "full") return PXP_MODEL_FULL;
    if (model == "sub1") return PXP_MODEL_SUB1;
    if (model == "sub2") return PXP_MODEL_SUB2;
    die(kExitUsage, "--model must be full, sub1 or sub2");
  }
};

struct PriorFlags {
  std::string prior;
  std::optional<double> alpha1, beta1, alpha2, beta2, alpha3, beta3;
  std::optional<double> tau1, tau2, psi1, psi3;
  double psi2 = 0.0;

  void add_hyper_options(CLI::App* cmd) {
    cmd->add_option("--alpha1", alpha1, "theta1 prior shape (independent prior)");
    cmd->add_option("--beta1", beta1, "theta1 prior rate (independent prior)");
    cmd->add_option("--alpha2", alpha2, "theta2 prior shape (full model)");
    cmd->add_option("--beta2", beta2, "theta2 prior rate (full model)");
    cmd->add_option("--alpha3", alpha3, "theta3 prior shape (independent prior)");
    cmd->add_option("--beta3", beta3, "theta3 prior rate (independent prior)");
    cmd->add_option("--tau1", tau1, "pseudo prior: theta3 shape");
    cmd->add_option("--tau2", tau2, "pseudo prior: theta1|theta3 shape");
    cmd->add_option("--psi1", psi1, "pseudo prior: theta3 rate");
    cmd->add_option("--psi2", psi2, "pseudo prior: baseline theta1 rate (default 0)");
    cmd->add_option("--psi3", psi3, "pseudo prior: dependence coefficient");
  }

  double required(const std::optional<double>& v, const char* name) const {
    if (!v) die(kExitUsage, std::string("missing hyper-parameter --") + name);
    return *v;
  }

  pxp_prior_spec build(pxp_model model) const {
    pxp_prior_spec spec{};
    if (prior == "independent") {
      spec.kind = PXP_PRIOR_INDEPENDENT;
      spec.alpha1 = required(alpha1, "alpha1");
      spec.beta1 = required(beta1, "beta1");
      spec.alpha3 = required(alpha3, "alpha3");
      spec.beta3 = required(beta3, "beta3");
      if (model == PXP_MODEL_FULL) {
        spec.alpha2 = required(alpha2, "alpha2");
        spec.beta2 = required(beta2, "beta2");
        spec.has_theta2 = 1;
      }
    } else if (prior == "improper") {
      spec.kind = PXP_PRIOR_IMPROPER;
    } else if (prior == "pseudo") {
      spec.kind = PXP_PRIOR_PSEUDO;
      spec.tau1 = required(tau1, "tau1");
      spec.tau2 = required(tau2, "tau2");
      spec.psi1 = required(psi1, "psi1");
      spec.psi2 = psi2;
      spec.psi3 = required(psi3, "psi3");
      if (model == PXP_MODEL_FULL) {
        spec.alpha2 = required(alpha2, "alpha2");
        spec.beta2 = required(beta2, "beta2");
        spec.has_theta2 = 1;
      }
    } else {
      die(kExitUsage, "--prior must be independent, improper or pseudo");
    }
    return spec;
  }

  void describe(JsonOut& json) const {
    json.begin_object("prior");
    json.field("kind", prior);
    if (prior == "independent") {
      json.field("alpha1", *alpha1);
      json.field("beta1", *beta1);
      if (alpha2) json.field("alpha2", *alpha2);
      if (beta2) json.field("beta2", *beta2);
      json.field("alpha3", *alpha3);
      json.field("beta3", *beta3);
    } else if (prior == "pseudo") {
      json.field("tau1", *tau1);
      json.field("tau2", *tau2);
      json.field("psi1", *psi1);
      json.field("psi2", psi2);
      json.field("psi3", *psi3);
      if (alpha2) json.field("alpha2", *alpha2);
      if (beta2) json.field("beta2", *beta2);
    }
    json.end_object();
  }
};

struct ChainFlags {
  std::uint64_t seed = 0;
  std::size_t kept = 10000;
  std::size_t thinning = 10;
  std::size_t burn_in = 10000;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "master seed (all randomness derives from it)");
    cmd->add_option("--kept", kept, "kept posterior draws")->check(CLI::PositiveNumber);
    cmd->add_option("--thinning", thinning, "keep every k-th state")->check(CLI::PositiveNumber);
    cmd->add_option("--burn-in", burn_in, "burn-in steps (adaptation window)");
  }

  pxp_chain_opts build() const { return pxp_chain_opts{seed, kept, thinning, burn_in}; }
};

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      die(kExitUsage, std::string(what) + ": not a number: " + item);
    }
  }
  if (out.empty()) die(kExitUsage, std::string(what) + ": empty list");
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

Range parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    die(kExitUsage, std::string(what) + ": expected lo:hi, got " + text);
  }
  Range r;
  try {
    r.lo = std::stod(text.substr(0, colon));
    r.hi = std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    die(kExitUsage, std::string(what) + ": expected numbers in lo:hi, got " + text);
  }
  if (!(r.hi > r.lo)) die(kExitUsage, std::string(what) + ": hi must exceed lo");
  return r;
}

std::string provenance_comment(const std::string& kind, const std::string& config_hash) {
  std::ostringstream s;
  s << "# pseudoexp " << kind << " " << pxp_version() << "\n";
  s << "# config_hash=" << config_hash << "\n";
  return s.str();
}

// ---- subcommand: simulate ----------------------------------------------------

struct SimulateArgs {
  ModelFlags model;
  std::optional<double> theta1, theta2, theta3;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  const pxp_model model = args.model.code();
  if (!args.theta1 || !args.theta3) die(kExitUsage, "--theta1 and --theta3 are required");
  if (args.n < 1) die(kExitUsage, "--n must be at least 1");

  double t2 = 0.0;
  if (model == PXP_MODEL_FULL) {
    if (!args.theta2) die(kExitUsage, "--theta2 is required for the full model");
    t2 = *args.theta2;
  } else if (args.theta2) {
    die(kExitUsage, model == PXP_MODEL_SUB2
                        ? "--theta2 is fixed at 0 by sub-model II"
                        : "--theta2 is fixed at theta3 by sub-model I");
  } else {
    t2 = model == PXP_MODEL_SUB1 ? *args.theta3 : 0.0;
  }

  pxp_dataset* ds = nullptr;
  check(pxp_simulate(model, *args.theta1, t2, *args.theta3, args.n, args.seed, &ds));
  const pxp_status wrote = pxp_dataset_write_csv(ds, args.out.c_str());
  pxp_dataset_free(ds);
  check(wrote);
  std::cout << "seed=" << args.seed << "\n";
  std::cout << "wrote " << args.out << " (" << args.n << " rows)\n";
  return kExitOk;
}

// ---- subcommand: fit -----------------------------------------------------------

struct FitArgs {
  std::string data;
  ModelFlags model;
  PriorFlags prior;
  std::string method = "auto";
  ChainFlags chain;
  double level = 0.95;
  std::optional<std::string> out;
};

pxp_method resolve_method(const std::string& name, pxp_model model,
                          const pxp_prior_spec& spec) {
  if (name == "analytic") return PXP_METHOD_ANALYTIC;
  if (name == "quadrature") return PXP_METHOD_QUADRATURE;
  if (name == "harm") return PXP_METHOD_HARM;
  if (name != "auto") die(kExitUsage, "--method must be analytic, quadrature, harm or auto");
  if (spec.kind != PXP_PRIOR_PSEUDO) {
    return model == PXP_MODEL_FULL ? PXP_METHOD_HARM : PXP_METHOD_ANALYTIC;
  }
  if (spec.psi2 == 0.0 && model != PXP_MODEL_FULL) return PXP_METHOD_QUADRATURE;
  return PXP_METHOD_HARM;
}

int run_fit(const FitArgs& args) {
  const pxp_model model = args.model.code();
  const pxp_prior_spec spec = args.prior.build(model);
  const pxp_method method = resolve_method(args.method, model, spec);
  if (!(args.level > 0.0 && args.level < 1.0)) {
    die(kExitUsage, "--level must lie strictly between 0 and 1");
  }

  pxp_dataset* ds = nullptr;
  check(pxp_dataset_read_csv(args.data.c_str(), &ds));

  const pxp_chain_opts chain = args.chain.build();
  pxp_fit* fit = nullptr;
  const pxp_status status = pxp_fit_run(ds, model, &spec, method, &chain, args.level, &fit);
  if (status != PXP_OK) {
    pxp_dataset_free(ds);
    die(exit_code_for(status), pxp_last_error());
  }

  const std::string data_bytes = read_text_file(args.data);
  std::ostringstream canonical;
  canonical << "fit model=" << args.model.model << " prior=" << args.prior.prior
            << " method=" << pxp_fit_method_name(fit) << " level=" << fmt(args.level)
            << " seed=" << args.chain.seed << " kept=" << args.chain.kept
            << " thinning=" << args.chain.thinning << " burn_in=" << args.chain.burn_in
            << " data_hash=" << hex64(fnv1a(data_bytes));

  JsonOut json;
  json.begin_object();
  json.field("schema_version", 1);
  json.field("tool_version", std::string(pxp_version()));
  json.field("command", std::string("fit"));
  json.field("model", args.model.model);
  args.prior.describe(json);
  json.field("method", std::string(pxp_fit_method_name(fit)));
  json.field("level", args.level);
  json.field("seed", args.chain.seed);
  json.field("config_hash", hex64(fnv1a(canonical.str())));
  json.field("data_hash", hex64(fnv1a(data_bytes)));

  double sx = 0, sy = 0, sxy = 0;
  check(pxp_dataset_stats(ds, &sx, &sy, &sxy));
  json.begin_object("dataset");
  json.field("path", args.data);
  json.field("n", static_cast<std::uint64_t>(pxp_dataset_size(ds)));
  json.field("sum_x", sx);
  json.field("sum_y", sy);
  json.field("sum_xy", sxy);
  json.end_object();

  json.begin_array("parameters");
  for (std::size_t i = 0; i < pxp_fit_param_count(fit); ++i) {
    const char* name = nullptr;
    double mean = 0, variance = 0, lower = 0, upper = 0, ess = 0;
    check(pxp_fit_param(fit, i, &name, &mean, &variance, &lower, &upper, &ess));
    json.begin_object_element();
    json.field("name", std::string(name));
    json.field("mean", mean);
    json.field("variance", variance);
    json.field("ci_low", lower);
    json.field("ci_high", upper);
    json.field("ess", ess);  // null when the summary is exact
    json.end_object();
  }
  json.end_array();

  pxp_mle_result mle{};
  check(pxp_fit_mle(fit, &mle));
  json.begin_object("mle");
  json.field("theta1", mle.theta1);
  json.field("theta2", mle.theta2);
  json.field("theta3", mle.theta3);
  json.field("loglik", mle.loglik);
  json.field("converged", mle.converged != 0);
  json.field("on_boundary", mle.on_boundary != 0);
  json.field("iterations", mle.iterations);
  json.end_object();

  double shape = 0, scale = 0;
  if (pxp_fit_predictive(fit, 0, &shape, &scale) == PXP_OK) {
    json.begin_object("predictive");
    json.begin_object("x");
    json.field("shape", shape);
    json.field("scale", scale);
    json.end_object();
    check(pxp_fit_predictive(fit, 1, &shape, &scale));
    json.begin_object("y");
    json.field("shape", shape);
    json.field("scale", scale);
    json.end_object();
    json.end_object();
  } else {
    json.null_field("predictive");
  }

  double acceptance = 0;
  std::size_t kept = 0, thinning = 0, burn_in = 0;
  check(pxp_fit_chain_info(fit, &acceptance, &kept, &thinning, &burn_in));
  if (kept > 0) {
    json.begin_object("chain");
    json.field("kept", static_cast<std::uint64_t>(kept));
    json.field("thinning", static_cast<std::uint64_t>(thinning));
    json.field("burn_in", static_cast<std::uint64_t>(burn_in));
    json.field("acceptance_rate", acceptance);
    json.end_object();
  } else {
    json.null_field("chain");
  }
  json.end_object();

  pxp_fit_free(fit);
  pxp_dataset_free(ds);
  emit_output(args.out, json.str());
  return kExitOk;
}

// ---- subcommand: predict --------------------------------------------------------

struct PredictArgs {
  std::string fit_path;
  std::string target = "x";
  std::optional<std::string> quantiles;
  std::optional<std::string> grid;
  std::optional<std::string> out;
  std::optional<std::string> grid_out;
};

int run_predict(const PredictArgs& args) {
  if (args.target != "x" && args.target != "y") {
    die(kExitUsage, "--target must be x or y");
  }
  const std::string report_bytes = read_text_file(args.fit_path);
  nlohmann::json report;
  try {
    report = nlohmann::json::parse(report_bytes);
  } catch (const std::exception& e) {
    die(kExitUsage, std::string("fit report is not valid JSON: ") + e.what());
  }
  if (!report.contains("predictive") || report["predictive"].is_null()) {
    die(kExitUsage, "fit report lacks a predictive block (full-model and pseudo-prior "
                    "fits have no closed-form predictive)");
  }
  const auto& block = report["predictive"][args.target];
  if (!block.is_object() || !block.contains("shape") || !block.contains("scale")) {
    die(kExitUsage, "fit report predictive block is malformed");
  }
  const double shape = block["shape"].get<double>();
  const double scale = block["scale"].get<double>();

  std::ostringstream canonical;
  canonical << "predict target=" << args.target << " shape=" << fmt(shape)
            << " scale=" << fmt(scale);
  if (args.quantiles) canonical << " quantiles=" << *args.quantiles;
  if (args.grid) canonical << " grid=" << *args.grid;
  const std::string config_hash = hex64(fnv1a(canonical.str()));

  JsonOut json;
  json.begin_object();
  json.field("schema_version", 1);
  json.field("tool_version", std::string(pxp_version()));
  json.field("command", std::string("predict"));
  json.field("source_fit", args.fit_path);
  json.field("target", args.target);
  json.field("config_hash", config_hash);
  json.begin_object("lomax");
  json.field("shape", shape);
  json.field("scale", scale);
  json.end_object();

  double mean = std::numeric_limits<double>::quiet_NaN();
  double variance = std::numeric_limits<double>::quiet_NaN();
  (void)pxp_lomax_mean(shape, scale, &mean);        // NaN when shape <= 1
  (void)pxp_lomax_variance(shape, scale, &variance);  // NaN when shape <= 2
  json.field("mean", mean);
  json.field("variance", variance);

  json.begin_array("quantiles");
  if (args.quantiles) {
    for (double level : parse_double_list(*args.quantiles, "--quantiles")) {
      double value = 0;
      check(pxp_lomax_quantile(shape, scale, level, &value));
      json.begin_object_element();
      json.field("level", level);
      json.field("value", value);
      json.end_object();
    }
  }
  json.end_array();

  if (args.grid) {
    if (!args.grid_out) die(kExitUsage, "--grid requires --grid-out");
    const auto last_colon = args.grid->rfind(':');
    if (last_colon == std::string::npos) {
      die(kExitUsage, "--grid expects lo:hi:steps");
    }
    const Range range = parse_range(args.grid->substr(0, last_colon), "--grid");
    if (range.lo < 0.0) die(kExitUsage, "--grid range must be nonnegative");
    std::size_t steps = 0;
    try {
      steps = static_cast<std::size_t>(std::stoul(args.grid->substr(last_colon + 1)));
    } catch (const std::exception&) {
      die(kExitUsage, "--grid expects an integer step count");
    }
    if (steps < 2) die(kExitUsage, "--grid needs at least 2 steps");

    std::ostringstream csv;
    csv << provenance_comment("predict-grid", config_hash);
    csv << "t,pdf,cdf\n";
    for (std::size_t i = 0; i < steps; ++i) {
      const double t = range.lo + (range.hi - range.lo) * static_cast<double>(i) /
                                      static_cast<double>(steps - 1);
      double pdf = 0, cdf = 0;
      check(pxp_lomax_pdf(shape, scale, t, &pdf));
      check(pxp_lomax_cdf(shape, scale, t, &cdf));
      csv << fmt(t) << ',' << fmt(pdf) << ',' << fmt(cdf) << '\n';
    }
    write_text_file(*args.grid_out, csv.str());
    json.field("grid", *args.grid_out);
  } else {
    json.null_field("grid");
  }
  json.end_object();

  emit_output(args.out, json.str());
  return kExitOk;
}

// ---- subcommand: study -----------------------------------------------------------

struct StudyArgs {
  std::string config;
  bool fast = false;
  std::string out;
};

int run_study_cmd(const StudyArgs& args) {
  check(pxp_study_run_file(args.config.c_str(), args.fast ? 1 : 0, args.out.c_str()));
  std::cout << "wrote " << args.out << "\n";
  return kExitOk;
}

// ---- subcommand: density-grid -------------------------------------------------

struct GridArgs {
  std::string what;
  ModelFlags model;
  PriorFlags prior;
  std::optional<std::string> data;
  std::string param = "theta1";
  std::string range;
  std::size_t steps = 200;
  std::string out;
};

int run_density_grid(const GridArgs& args) {
  const pxp_model model = args.model.code();
  const pxp_prior_spec spec = args.prior.build(model);
  if (args.steps < 2) die(kExitUsage, "--steps must be at least 2");

  pxp_dataset* ds = nullptr;
  if (args.data) check(pxp_dataset_read_csv(args.data->c_str(), &ds));
  auto cleanup = [&]() {
    if (ds) pxp_dataset_free(ds);
  };

  std::ostringstream canonical;
  canonical << "density-grid what=" << args.what << " model=" << args.model.model
            << " prior=" << args.prior.prior << " range=" << args.range
            << " steps=" << args.steps << " param=" << args.param;
  const std::string config_hash = hex64(fnv1a(canonical.str()));

  std::ostringstream csv;
  csv << provenance_comment("density-grid", config_hash);

  auto linspace = [&](const Range& r, std::size_t i) {
    return r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(args.steps - 1);
  };

  if (args.what == "marginal") {
    if (!ds) die(kExitUsage, "--what marginal requires --data");
    if (args.param != "theta1" && args.param != "theta3") {
      die(kExitUsage, "--param must be theta1 or theta3");
    }
    const Range range = parse_range(args.range, "--range");
    if (!(range.lo > 0.0)) die(kExitUsage, "--range must be strictly positive");

    csv << "# mode: normalized\n";
    csv << "theta,density\n";
    if (spec.kind == PXP_PRIOR_PSEUDO) {
      if (spec.psi2 != 0.0) {
        cleanup();
        die(kExitUsage, "marginal grids need psi2 = 0 (use harm fits for psi2 > 0)");
      }
      pxp_marginal* marginal = nullptr;
      const pxp_status status =
          pxp_marginal_create(ds, model, &spec, args.param == "theta1" ? 1 : 3, &marginal);
      if (status != PXP_OK) {
        cleanup();
        die(exit_code_for(status), pxp_last_error());
      }
      for (std::size_t i = 0; i < args.steps; ++i) {
        const double t = linspace(range, i);
        double density = 0;
        check(pxp_marginal_pdf(marginal, t, &density));
        csv << fmt(t) << ',' << fmt(density) << '\n';
      }
      pxp_marginal_free(marginal);
    } else {
      double shape = 0, rate = 0;
      pxp_status status;
      if (args.param == "theta1") {
        status = pxp_posterior_theta1(ds, &spec, &shape, &rate);
      } else {
        status = pxp_posterior_theta3(ds, model, &spec, &shape, &rate);
      }
      if (status != PXP_OK) {
        cleanup();
        die(exit_code_for(status), pxp_last_error());
      }
      for (std::size_t i = 0; i < args.steps; ++i) {
        const double t = linspace(range, i);
        double density = 0;
        check(pxp_gamma_pdf(shape, rate, t, &density));
        csv << fmt(t) << ',' << fmt(density) << '\n';
      }
    }
  } else if (args.what == "prior" || args.what == "posterior") {
    const auto comma = args.range.find(',');
    if (comma == std::string::npos) {
      die(kExitUsage, "joint grids need --range lo:hi,lo:hi");
    }
    const Range r1 = parse_range(args.range.substr(0, comma), "--range (first axis)");
    const Range r2 = parse_range(args.range.substr(comma + 1), "--range (second axis)");
    if (!(r1.lo > 0.0) || !(r2.lo > 0.0)) {
      die(kExitUsage, "--range must be strictly positive");
    }

    // Axis meaning: (theta1, theta3) for prior and sub-model posteriors,
    // (theta2, theta3) for the full-model posterior kernel.
    const bool full_posterior = args.what == "posterior" && model == PXP_MODEL_FULL;

    if (args.what == "prior" && spec.kind == PXP_PRIOR_IMPROPER) {
      die(kExitUsage, "the improper prior has no density surface to plot");
    }
    if (full_posterior && spec.kind == PXP_PRIOR_PSEUDO) {
      die(kExitUsage, "full-model pseudo posterior has three parameters; no 2-D grid");
    }
    if (args.what == "posterior" && !ds) die(kExitUsage, "--what posterior requires --data");

    // Normalised surfaces exist where the joint law factorises into gamma
    // densities; everything else is a kernel, emitted scaled by its grid
    // maximum (a kernel is defined only up to a constant factor).
    const bool normalized = args.what == "prior"
                                ? spec.kind == PXP_PRIOR_INDEPENDENT
                                : !full_posterior && spec.kind != PXP_PRIOR_PSEUDO;

    std::function<double(double, double)> surface;
    if (normalized && args.what == "prior") {
      surface = [&](double a, double b) {
        double p1 = 0, p3 = 0;
        check(pxp_gamma_pdf(spec.alpha1, spec.beta1, a, &p1));
        check(pxp_gamma_pdf(spec.alpha3, spec.beta3, b, &p3));
        return p1 * p3;
      };
    } else if (normalized) {
      double s1 = 0, rr1 = 0, s3 = 0, rr3 = 0;
      check(pxp_posterior_theta1(ds, &spec, &s1, &rr1));
      check(pxp_posterior_theta3(ds, model, &spec, &s3, &rr3));
      surface = [&, s1, rr1, s3, rr3](double a, double b) {
        double p1 = 0, p3 = 0;
        check(pxp_gamma_pdf(s1, rr1, a, &p1));
        check(pxp_gamma_pdf(s3, rr3, b, &p3));
        return p1 * p3;
      };
    } else if (args.what == "prior") {
      surface = [&](double a, double b) {
        double v = 0;
        check(pxp_pseudo_prior_log_kernel(&spec, a, b, &v));
        return v;
      };
    } else if (full_posterior) {
      surface = [&](double a, double b) {
        double v = 0;
        check(pxp_full_theta23_log_kernel(ds, &spec, a, b, &v));
        return v;
      };
    } else {
      surface = [&](double a, double b) {
        double v = 0;
        check(pxp_general_posterior_log_kernel(ds, model, &spec, a, 0.0, b, &v));
        return v;
      };
    }

    std::vector<double> values(args.steps * args.steps, 0.0);
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < args.steps; ++i) {
      for (std::size_t j = 0; j < args.steps; ++j) {
        const double v = surface(linspace(r1, i), linspace(r2, j));
        values[i * args.steps + j] = v;
        max_log = std::max(max_log, v);
      }
    }

    csv << (normalized ? "# mode: normalized\n" : "# mode: kernel (scaled by grid maximum)\n");
    csv << (full_posterior ? "theta2,theta3,value\n" : "theta1,theta3,value\n");
    for (std::size_t i = 0; i < args.steps; ++i) {
      const double a = linspace(r1, i);
      for (std::size_t j = 0; j < args.steps; ++j) {
        const double b = linspace(r2, j);
        double v = values[i * args.steps + j];
        if (!normalized) v = std::exp(v - max_log);
        csv << fmt(a) << ',' << fmt(b) << ',' << fmt(v) << '\n';
      }
    }
  } else {
    die(kExitUsage, "--what must be prior, posterior or marginal");
  }

  cleanup();
  write_text_file(args.out, csv.str());
  std::cout << "wrote " << args.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian inference for the bivariate pseudo-exponential model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pxp_version()));

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "simulate a dataset CSV");
  simulate->add_option("--model", sim.model.model, "full|sub1|sub2")->required();
  simulate->add_option("--theta1", sim.theta1, "marginal rate of x");
  simulate->add_option("--theta2", sim.theta2, "baseline rate of y (full model only)");
  simulate->add_option("--theta3", sim.theta3, "covariate rate of y");
  simulate->add_option("--n", sim.n, "sample size")->required();
  simulate->add_option("--seed", sim.seed, "seed");
  simulate->add_option("--out", sim.out, "output CSV path")->required();

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a model to a dataset (JSON report)");
  fit_cmd->add_option("--data", fit.data, "dataset CSV (header x,y)")->required();
  fit_cmd->add_option("--model", fit.model.model, "full|sub1|sub2")->required();
  fit_cmd->add_option("--prior", fit.prior.prior, "independent|improper|pseudo")->required();
  fit_cmd->add_option("--method", fit.method, "analytic|quadrature|harm|auto");
  fit.prior.add_hyper_options(fit_cmd);
  fit.chain.add_options(fit_cmd);
  fit_cmd->add_option("--level", fit.level, "credible-interval coverage (default 0.95)");
  fit_cmd->add_option("--out", fit.out, "report path (stdout if omitted)");

  PredictArgs predict;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "posterior-predictive quantiles and grids");
  predict_cmd->add_option("--fit", predict.fit_path, "fit report JSON")->required();
  predict_cmd->add_option("--target", predict.target, "x|y (default x)");
  predict_cmd->add_option("--quantiles", predict.quantiles, "comma-separated levels");
  predict_cmd->add_option("--grid", predict.grid, "t grid as lo:hi:steps");
  predict_cmd->add_option("--grid-out", predict.grid_out, "CSV path for the grid");
  predict_cmd->add_option("--out", predict.out, "JSON path (stdout if omitted)");

  StudyArgs study;
  CLI::App* study_cmd = app.add_subcommand("study", "run a simulation study to CSV");
  study_cmd->add_option("--config", study.config, "study configuration file")->required();
  study_cmd->add_flag("--fast", study.fast, "cap kept draws at 1000");
  study_cmd->add_option("--out", study.out, "output CSV path")->required();

  GridArgs grid;
  CLI::App* grid_cmd =
      app.add_subcommand("density-grid", "plot-ready prior/posterior/marginal grids");
  grid_cmd->add_option("--what", grid.what, "prior|posterior|marginal")->required();
  grid_cmd->add_option("--model", grid.model.model, "full|sub1|sub2")->required();
  grid_cmd->add_option("--prior", grid.prior.prior, "independent|improper|pseudo")->required();
  grid.prior.add_hyper_options(grid_cmd);
  grid_cmd->add_option("--data", grid.data, "dataset CSV (posterior/marginal)");
  grid_cmd->add_option("--param", grid.param, "theta1|theta3 (marginal grids)");
  grid_cmd->add_option("--range", grid.range, "lo:hi (marginal) or lo:hi,lo:hi (joint)")
      ->required();
  grid_cmd->add_option("--steps", grid.steps, "grid points per axis (default 200)");
  grid_cmd->add_option("--out", grid.out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (simulate->parsed()) return run_simulate(sim);
  if (fit_cmd->parsed()) return run_fit(fit);
  if (predict_cmd->parsed()) return run_predict(predict);
  if (study_cmd->parsed()) return run_study_cmd(study);
  if (grid_cmd->parsed()) return run_density_grid(grid);
  return kExitUsage;
}
