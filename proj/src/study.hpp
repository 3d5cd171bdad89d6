#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fit.hpp"

namespace pseudoexp {

// One prior column of the study, carried with its table label.
struct StudyPrior {
  std::string name;
  PriorChoice choice;
};

struct StudyConfig {
  ModelVariant variant = ModelVariant::SubModelI;
  PseudoExpParams true_params = PseudoExpParams::sub_model_1(2.0, 3.0);
  std::vector<std::size_t> sample_sizes;
  std::vector<StudyPrior> priors;
  std::size_t replications = 1;
  ChainOptions chain;
  std::uint64_t seed = 0;
  double level = 0.95;
};

struct StudyRow {
  std::size_t n = 0;
  std::string parameter;
  std::string prior;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::string note;  // nonempty when the cell's fit failed
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key=value configuration, '#'/';' comments, comma-separated lists,
// priors declared by `priors = a,b` plus `prior.<name>.<key> = value` entries.
StudyConfig parse_study_config(std::istream& in);
StudyConfig parse_study_config_file(const std::string& path);

// One row per (n, parameter, prior), ordered by n, then parameter, then the
// configured prior order. Conjugate cells are exact; the rest run hit-and-run
// chains with per-cell seeds derived from the study seed. A failing cell is
// annotated (NaN values + note) instead of aborting the study.
std::vector<StudyRow> run_study(const StudyConfig& config);

// CSV with header n,parameter,prior,mean,ci_low,ci_high at 17 significant
// digits. Comment lines starting with '#' may precede the header.
void export_study(const std::vector<StudyRow>& rows, std::ostream& out);
void export_study_file(const std::vector<StudyRow>& rows, const std::string& path,
                       const std::string& provenance_comment);

}  // namespace pseudoexp
