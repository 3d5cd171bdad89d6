#include "sample.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "types.hpp"

namespace pseudoexp {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_number(const std::string& field, double* out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  std::size_t pos = 0;
  try {
    *out = std::stod(t, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == t.size() && std::isfinite(*out);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp);
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("rename failed for: " + path);
  }
}

BivariateSample::BivariateSample(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) {
    throw DataError("x and y must have the same length");
  }
  if (x_.empty()) {
    throw DataError("sample must contain at least one pair");
  }
  std::string bad;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!(x_[i] > 0.0) || !(y_[i] > 0.0) || !std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      if (!bad.empty()) bad += ", ";
      bad += std::to_string(i + 1);
    }
  }
  if (!bad.empty()) {
    throw DataError("nonpositive or non-finite entries at row(s): " + bad);
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    sum_x_ += x_[i];
    sum_y_ += y_[i];
    sum_xy_ += x_[i] * y_[i];
    sum_log_x_ += std::log(x_[i]);
    sum_log1p_x_ += std::log1p(x_[i]);
  }
}

BivariateSample BivariateSample::parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty dataset file");
  }
  if (trim(line) != "x,y") {
    throw DataError("dataset header must be exactly `x,y`");
  }
  std::vector<double> xs, ys;
  std::string bad;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    ++row;
    const auto comma = t.find(',');
    double xv = 0.0, yv = 0.0;
    bool ok = comma != std::string::npos &&
              parse_number(t.substr(0, comma), &xv) &&
              parse_number(t.substr(comma + 1), &yv) && xv > 0.0 && yv > 0.0;
    if (!ok) {
      if (!bad.empty()) bad += ", ";
      bad += std::to_string(row);
      continue;
    }
    xs.push_back(xv);
    ys.push_back(yv);
  }
  if (!bad.empty()) {
    throw DataError("invalid dataset row(s) (must be two positive decimals): " + bad);
  }
  if (xs.empty()) {
    throw DataError("dataset contains no rows");
  }
  return BivariateSample(std::move(xs), std::move(ys));
}

BivariateSample BivariateSample::read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset: " + path);
  return parse_csv(in);
}

void BivariateSample::write_csv(std::ostream& out) const {
  out << "x,y\n";
  for (std::size_t i = 0; i < x_.size(); ++i) {
    out << format_double(x_[i]) << ',' << format_double(y_[i]) << '\n';
  }
}

void BivariateSample::write_csv(const std::string& path) const {
  std::ostringstream out;
  write_csv(out);
  write_file_atomic(path, out.str());
}

}  // namespace pseudoexp
