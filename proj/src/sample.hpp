#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace pseudoexp {

// Sufficient statistics of a bivariate sample. Kept separate from
// BivariateSample so the no-data (n = 0) posterior identities are expressible.
struct SampleStats {
  std::size_t n = 0;
  double sum_x = 0.0;
  double sum_y = 0.0;
  double sum_xy = 0.0;
};

// Observed pairs (x_i, y_i), all strictly positive, with cached sums.
// Immutable after construction.
class BivariateSample {
 public:
  BivariateSample(std::vector<double> x, std::vector<double> y);

  // Parses CSV with header exactly `x,y`, one pair per row. Throws IoError if
  // the file cannot be opened, DataError on malformed rows or nonpositive
  // entries (1-based data-row numbers are listed in the message).
  static BivariateSample read_csv(const std::string& path);
  static BivariateSample parse_csv(std::istream& in);

  // Writes the same format, 17 significant digits, atomically (temp + rename).
  void write_csv(const std::string& path) const;
  void write_csv(std::ostream& out) const;

  std::size_t size() const { return x_.size(); }
  double x(std::size_t i) const { return x_[i]; }
  double y(std::size_t i) const { return y_[i]; }
  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ys() const { return y_; }

  double sum_x() const { return sum_x_; }
  double sum_y() const { return sum_y_; }
  double sum_xy() const { return sum_xy_; }
  double sum_log_x() const { return sum_log_x_; }
  double sum_log1p_x() const { return sum_log1p_x_; }

  SampleStats stats() const { return {size(), sum_x_, sum_y_, sum_xy_}; }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  double sum_x_ = 0.0;
  double sum_y_ = 0.0;
  double sum_xy_ = 0.0;
  double sum_log_x_ = 0.0;
  double sum_log1p_x_ = 0.0;
};

// Atomic text-file write used for every file this library produces.
void write_file_atomic(const std::string& path, const std::string& contents);

// 17-significant-digit decimal rendering used in all emitted files.
std::string format_double(double v);

}  // namespace pseudoexp
