#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "cwm/csv.hpp"

using namespace cwm;

namespace {

ErrorCode parse_error(const std::string& text, int dx, int dy, std::string* message = nullptr) {
  std::istringstream in(text);
  try {
    parse_dataset(in, dx, dy);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("three rows") {
  std::istringstream in("x,y\n1,2\n3.5,-4e-1\n 5 , 6\n");
  const Dataset d = parse_dataset(in, 1, 1);
  REQUIRE(d.n() == 3);
  CHECK(d.values()(0, 0) == 1.0);
  CHECK(d.values()(1, 1) == -0.4);
  CHECK(d.values()(2, 0) == 5.0);
  CHECK(d.values()(2, 1) == 6.0);
}

TEST_CASE("CRLF line endings and a trailing blank line") {
  std::istringstream in("a,b\r\n1,2\r\n3,4\r\n\r\n");
  CHECK(parse_dataset(in, 1, 1).n() == 2);
}

TEST_CASE("missing values name the row and column") {
  std::string msg;
  CHECK(parse_error("x,y\n1,2\n3,NA\n", 1, 1, &msg) == ErrorCode::NonFiniteValue);
  CHECK(msg.find("row 2") != std::string::npos);
  CHECK(msg.find("column 2") != std::string::npos);
  CHECK(parse_error("x,y\nnan,1\n", 1, 1) == ErrorCode::NonFiniteValue);
  CHECK(parse_error("x,y\n1,-inf\n", 1, 1) == ErrorCode::NonFiniteValue);
  CHECK(parse_error("x,y\n1,1e999\n", 1, 1) == ErrorCode::NonFiniteValue);
}

TEST_CASE("malformed cells and rows") {
  std::string msg;
  CHECK(parse_error("x,y\n1,abc\n", 1, 1, &msg) == ErrorCode::ParseError);
  CHECK(msg.find("row 1, column 2") != std::string::npos);
  CHECK(parse_error("x,y\n1,\n", 1, 1) == ErrorCode::ParseError);
  CHECK(parse_error("x,y\n1,2,3\n", 1, 1) == ErrorCode::ParseError);
  CHECK(parse_error("x,y\n1;2\n", 1, 1) == ErrorCode::ParseError);
  CHECK(parse_error("x,y\n1,2x\n", 1, 1) == ErrorCode::ParseError);
  CHECK(parse_error("x,y\n", 1, 1) == ErrorCode::ParseError);
}

TEST_CASE("header width must match") {
  CHECK(parse_error("x,y,z\n1,2,3\n", 1, 1) == ErrorCode::HeaderMismatch);
  CHECK(parse_error("", 1, 1) == ErrorCode::HeaderMismatch);
}

TEST_CASE("write and read back bit-identically") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(50, 3);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = u(rng) * std::pow(10.0, 40.0 * u(rng));
  }
  m(0, 0) = std::numeric_limits<double>::denorm_min();
  m(1, 1) = -0.0;
  m(2, 2) = std::numeric_limits<double>::max();
  const Dataset d(m, 2, 1);
  std::istringstream in(dataset_csv(d));
  const Dataset back = parse_dataset(in, 2, 1);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      CHECK(std::memcmp(&back.values()(i, j), &m(i, j), sizeof(double)) == 0);
    }
  }
}

TEST_CASE("format_double") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(dataset_csv(Dataset(Matrix::Ones(1, 2), 1, 1)) == "x1,y1\n1,1\n");
}

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(Dataset(Matrix::Ones(3, 3), 1, 1), Error);
  Matrix bad = Matrix::Ones(2, 2);
  bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Dataset(bad, 1, 1), Error);
}
