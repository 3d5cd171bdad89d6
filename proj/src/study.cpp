#include "study.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "distributions.hpp"

namespace pseudoexp {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct KeyValue {
  std::string value;
  int line = 0;
  bool used = false;
};

class ConfigMap {
 public:
  void insert(const std::string& key, const std::string& value, int line) {
    if (entries_.count(key)) {
      throw ConfigError("line " + std::to_string(line) + ": duplicate key `" + key + "`");
    }
    entries_[key] = {value, line, false};
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string require(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw ConfigError("missing required key: " + key);
    }
    it->second.used = true;
    return it->second.value;
  }

  std::string get_or(const std::string& key, const std::string& fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.used = true;
    return it->second.value;
  }

  double number(const std::string& key) { return to_number(key, require(key)); }
  double number_or(const std::string& key, double fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.used = true;
    return to_number(key, it->second.value);
  }

  double to_number(const std::string& key, const std::string& value) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception&) {
      int line = 0;
      auto it = entries_.find(key);
      if (it != entries_.end()) line = it->second.line;
      throw ConfigError("line " + std::to_string(line) + ": key `" + key +
                        "` is not a number: " + value);
    }
  }

  void check_all_used() const {
    for (const auto& [key, kv] : entries_) {
      if (!kv.used) {
        throw ConfigError("line " + std::to_string(kv.line) + ": unknown key `" + key + "`");
      }
    }
  }

 private:
  std::map<std::string, KeyValue> entries_;
};

ModelVariant parse_variant(const std::string& v, int line_hint) {
  if (v == "full") return ModelVariant::Full;
  if (v == "sub1") return ModelVariant::SubModelI;
  if (v == "sub2") return ModelVariant::SubModelII;
  throw ConfigError("line " + std::to_string(line_hint) +
                    ": variant must be full, sub1 or sub2 (got `" + v + "`)");
}

PriorChoice parse_prior(ConfigMap& cfg, const std::string& name, ModelVariant variant) {
  const std::string prefix = "prior." + name + ".";
  const std::string type = cfg.get_or(prefix + "type", "");
  if (type.empty()) {
    throw ConfigError("missing required key: " + prefix + "type");
  }
  PriorChoice choice;
  if (type == "independent") {
    choice.kind = PriorChoice::Kind::IndependentGamma;
    choice.theta1 = {cfg.number(prefix + "alpha1"), cfg.number(prefix + "beta1")};
    choice.theta3 = {cfg.number(prefix + "alpha3"), cfg.number(prefix + "beta3")};
    if (variant == ModelVariant::Full) {
      choice.theta2 = {cfg.number(prefix + "alpha2"), cfg.number(prefix + "beta2")};
      choice.has_theta2 = true;
    }
  } else if (type == "improper") {
    choice.kind = PriorChoice::Kind::Improper;
  } else if (type == "pseudo") {
    choice.kind = PriorChoice::Kind::PseudoGamma;
    choice.pseudo.tau1 = cfg.number(prefix + "tau1");
    choice.pseudo.tau2 = cfg.number(prefix + "tau2");
    choice.pseudo.psi1 = cfg.number(prefix + "psi1");
    choice.pseudo.psi2 = cfg.number_or(prefix + "psi2", 0.0);
    choice.pseudo.psi3 = cfg.number(prefix + "psi3");
    if (variant == ModelVariant::Full) {
      choice.theta2 = {cfg.number(prefix + "alpha2"), cfg.number(prefix + "beta2")};
      choice.has_theta2 = true;
    }
  } else {
    throw ConfigError("prior `" + name + "`: type must be independent, improper or pseudo");
  }
  return choice;
}

}  // namespace

StudyConfig parse_study_config(std::istream& in) {
  ConfigMap cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    cfg.insert(trim(t.substr(0, eq)), trim(t.substr(eq + 1)), line_no);
  }

  StudyConfig sc;
  sc.variant = parse_variant(cfg.get_or("variant", "sub1"), 0);

  const double t1 = cfg.number("theta1");
  const double t3 = cfg.number("theta3");
  switch (sc.variant) {
    case ModelVariant::SubModelI:
      sc.true_params = PseudoExpParams::sub_model_1(t1, t3);
      break;
    case ModelVariant::SubModelII:
      sc.true_params = PseudoExpParams::sub_model_2(t1, t3);
      break;
    case ModelVariant::Full:
      sc.true_params = PseudoExpParams::full(t1, cfg.number("theta2"), t3);
      break;
  }
  validate_params(sc.true_params, sc.variant);

  for (const std::string& item : split_list(cfg.require("sample_sizes"))) {
    const double v = cfg.to_number("sample_sizes", item);
    if (!(v >= 1.0) || v != std::floor(v)) {
      throw ConfigError("sample_sizes entries must be positive integers");
    }
    sc.sample_sizes.push_back(static_cast<std::size_t>(v));
  }
  if (sc.sample_sizes.empty()) {
    throw ConfigError("sample_sizes must not be empty");
  }

  sc.replications = static_cast<std::size_t>(cfg.number_or("replications", 1.0));
  if (sc.replications < 1) throw ConfigError("replications must be at least 1");
  sc.seed = static_cast<std::uint64_t>(cfg.number_or("seed", 0.0));
  sc.level = cfg.number_or("level", 0.95);
  if (!(sc.level > 0.0 && sc.level < 1.0)) {
    throw ConfigError("level must lie strictly between 0 and 1");
  }
  sc.chain.kept = static_cast<std::size_t>(cfg.number_or("kept", 10000.0));
  sc.chain.thinning = static_cast<std::size_t>(cfg.number_or("thinning", 10.0));
  sc.chain.burn_in = static_cast<std::size_t>(cfg.number_or("burn_in", 10000.0));

  const auto prior_names = split_list(cfg.require("priors"));
  if (prior_names.empty()) {
    throw ConfigError("priors must list at least one prior name");
  }
  for (const std::string& name : prior_names) {
    sc.priors.push_back({name, parse_prior(cfg, name, sc.variant)});
  }

  cfg.check_all_used();
  return sc;
}

StudyConfig parse_study_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  return parse_study_config(in);
}

namespace {

std::vector<std::string> parameter_names(ModelVariant variant) {
  if (variant == ModelVariant::Full) return {"theta1", "theta2", "theta3"};
  return {"theta1", "theta3"};
}

}  // namespace

std::vector<StudyRow> run_study(const StudyConfig& config) {
  if (config.sample_sizes.empty() || config.priors.empty()) {
    throw std::invalid_argument("run_study: sample sizes and priors must be nonempty");
  }
  const auto params = parameter_names(config.variant);

  // cell accumulator across replications, keyed by (n index, prior index, param index)
  struct Cell {
    double mean = 0.0, lo = 0.0, hi = 0.0;
    std::size_t count = 0;
    std::string note;
  };
  std::vector<Cell> cells(config.sample_sizes.size() * config.priors.size() * params.size());
  auto cell_at = [&](std::size_t ni, std::size_t pi, std::size_t qi) -> Cell& {
    return cells[(ni * config.priors.size() + pi) * params.size() + qi];
  };

  for (std::size_t ni = 0; ni < config.sample_sizes.size(); ++ni) {
    const std::size_t n = config.sample_sizes[ni];
    for (std::size_t rep = 0; rep < config.replications; ++rep) {
      Rng data_rng(Rng::derive(config.seed, 1000003ull * ni + rep));
      const BivariateSample sample =
          sample_bivariate(config.true_params, config.variant, n, data_rng);
      for (std::size_t pi = 0; pi < config.priors.size(); ++pi) {
        const StudyPrior& prior = config.priors[pi];
        ChainOptions chain = config.chain;
        chain.seed = Rng::derive(config.seed, 7700000ull + 1009ull * ni + 131ull * pi + rep);
        try {
          // Study protocol: exact conjugate posteriors where they exist,
          // hit-and-run chains for every other cell (including psi2 = 0).
          FitMethod method = default_method(config.variant, prior.choice);
          if (method == FitMethod::Quadrature) method = FitMethod::Harm;
          const FitResult fit =
              fit_model(sample, config.variant, prior.choice, method, chain, config.level);
          for (std::size_t qi = 0; qi < params.size(); ++qi) {
            Cell& cell = cell_at(ni, pi, qi);
            const auto& summary = fit.params[qi].summary;
            cell.mean += summary.mean;
            cell.lo += summary.lower;
            cell.hi += summary.upper;
            ++cell.count;
          }
        } catch (const std::exception& e) {
          for (std::size_t qi = 0; qi < params.size(); ++qi) {
            Cell& cell = cell_at(ni, pi, qi);
            if (cell.note.empty()) cell.note = e.what();
          }
        }
      }
    }
  }

  std::vector<StudyRow> rows;
  rows.reserve(cells.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t ni = 0; ni < config.sample_sizes.size(); ++ni) {
    for (std::size_t qi = 0; qi < params.size(); ++qi) {
      for (std::size_t pi = 0; pi < config.priors.size(); ++pi) {
        const Cell& cell = cell_at(ni, pi, qi);
        StudyRow row;
        row.n = config.sample_sizes[ni];
        row.parameter = params[qi];
        row.prior = config.priors[pi].name;
        if (cell.count > 0) {
          const double k = static_cast<double>(cell.count);
          row.mean = cell.mean / k;
          row.ci_low = cell.lo / k;
          row.ci_high = cell.hi / k;
        } else {
          row.mean = row.ci_low = row.ci_high = nan;
          row.note = cell.note;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void export_study(const std::vector<StudyRow>& rows, std::ostream& out) {
  if (rows.empty()) {
    throw std::invalid_argument("export_study: no rows to write");
  }
  out << "n,parameter,prior,mean,ci_low,ci_high\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.parameter << ',' << r.prior << ',' << format_double(r.mean) << ','
        << format_double(r.ci_low) << ',' << format_double(r.ci_high) << '\n';
  }
}

void export_study_file(const std::vector<StudyRow>& rows, const std::string& path,
                       const std::string& provenance_comment) {
  if (rows.empty()) {
    throw std::invalid_argument("export_study: no rows to write");
  }
  std::ostringstream out;
  if (!provenance_comment.empty()) {
    std::istringstream lines(provenance_comment);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  export_study(rows, out);
  write_file_atomic(path, out.str());
}

}  // namespace pseudoexp
