#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sample.hpp"
#include "types.hpp"

using namespace pseudoexp;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pseudoexp_test_" + name)).string();
}

}  // namespace

TEST_CASE("cached sums equal forward recomputation") {
  const std::vector<double> x{0.5, 1.25, 2.0, 0.125};
  const std::vector<double> y{1.0, 0.5, 0.75, 2.5};
  const BivariateSample s(x, y);
  double sx = 0, sy = 0, sxy = 0, slx = 0, sl1x = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxy += x[i] * y[i];
    slx += std::log(x[i]);
    sl1x += std::log1p(x[i]);
  }
  CHECK(s.sum_x() == sx);
  CHECK(s.sum_y() == sy);
  CHECK(s.sum_xy() == sxy);
  CHECK(s.sum_log_x() == slx);
  CHECK(s.sum_log1p_x() == sl1x);
  CHECK(s.size() == 4);
}

TEST_CASE("construction rejects invalid shapes and values") {
  CHECK_THROWS_AS(BivariateSample({}, {}), DataError);
  CHECK_THROWS_AS(BivariateSample({1.0}, {1.0, 2.0}), DataError);
  CHECK_THROWS_AS(BivariateSample({1.0, -2.0}, {1.0, 1.0}), DataError);
  CHECK_THROWS_AS(BivariateSample({1.0}, {0.0}), DataError);
  try {
    BivariateSample({1.0, -1.0, 2.0, 0.0}, {1.0, 1.0, 1.0, 1.0});
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("2") != std::string::npos);
    CHECK(msg.find("4") != std::string::npos);
  }
}

TEST_CASE("csv round trip is bit exact") {
  std::vector<double> x, y;
  for (int i = 1; i <= 25; ++i) {
    x.push_back(0.1 + 0.37 * i + 1e-13 * i);
    y.push_back(2.0 / i);
  }
  const BivariateSample s(x, y);
  const std::string path = tmp_path("roundtrip.csv");
  s.write_csv(path);
  const BivariateSample r = BivariateSample::read_csv(path);
  REQUIRE(r.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(r.x(i) == s.x(i));
    CHECK(r.y(i) == s.y(i));
  }
  std::filesystem::remove(path);
}

TEST_CASE("csv header must be exactly x,y") {
  std::istringstream bad("a,b\n1,2\n");
  CHECK_THROWS_AS(BivariateSample::parse_csv(bad), DataError);
  std::istringstream empty("");
  CHECK_THROWS_AS(BivariateSample::parse_csv(empty), DataError);
  std::istringstream crlf("x,y\r\n1.5,2.5\r\n");
  const BivariateSample s = BivariateSample::parse_csv(crlf);
  CHECK(s.x(0) == 1.5);
  CHECK(s.y(0) == 2.5);
}

TEST_CASE("csv parser lists offending 1-based row numbers") {
  std::istringstream in("x,y\n1,1\n-3,2\n2,2\nnope,4\n0,1\n");
  try {
    BivariateSample::parse_csv(in);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("2") != std::string::npos);  // -3,2
    CHECK(msg.find("4") != std::string::npos);  // nope,4
    CHECK(msg.find("5") != std::string::npos);  // 0,1
    CHECK(msg.find("3") == std::string::npos);  // valid row not listed
  }
}

TEST_CASE("blank lines are ignored, rows after them keep numbering") {
  std::istringstream in("x,y\n1,1\n\n2,0.5\n");
  const BivariateSample s = BivariateSample::parse_csv(in);
  CHECK(s.size() == 2);
  CHECK(s.sum_x() == 3.0);
  CHECK(s.sum_xy() == 2.0);
}

TEST_CASE("missing file raises an io error, not a data error") {
  CHECK_THROWS_AS(BivariateSample::read_csv("/nonexistent/nowhere.csv"), IoError);
}

TEST_CASE("format_double survives a parse round trip") {
  for (double v : {1.0 / 3.0, 1e-300, 123456.789, 5.0423e17}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
