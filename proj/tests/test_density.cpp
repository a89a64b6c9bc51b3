#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cwm/density.hpp"
#include "cwm/golden.hpp"
#include "test_support.hpp"

using namespace cwm;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("factor_covariance") {
  SUBCASE("identity") {
    const CovFactor f = factor_covariance(Matrix::Identity(2, 2));
    CHECK((f.lower() - Matrix::Identity(2, 2)).norm() == 0.0);
    CHECK(f.log_det() == 0.0);
  }
  SUBCASE("diagonal by hand") {
    const CovFactor f = factor_covariance(mat2(4, 0, 0, 9));
    CHECK(f.lower()(0, 0) == doctest::Approx(2.0));
    CHECK(f.lower()(1, 1) == doctest::Approx(3.0));
    CHECK(f.lower()(1, 0) == 0.0);
    CHECK(f.log_det() == doctest::Approx(std::log(36.0)).epsilon(1e-14));
  }
  SUBCASE("indefinite") {
    CHECK(code_of([] { factor_covariance(mat2(1, 2, 2, 1)); }) == ErrorCode::NotPositiveDefinite);
  }
  SUBCASE("not symmetric") {
    CHECK(code_of([] { factor_covariance(mat2(1, 0.5, 0.4, 1)); }) == ErrorCode::InvalidArgument);
  }
  SUBCASE("random SPD reconstructs with positive diagonal") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
      const int d = 1 + t % 6;
      const Matrix s = test::random_spd(d, rng);
      const CovFactor f = factor_covariance(s);
      for (int i = 0; i < d; ++i) CHECK(f.lower()(i, i) > 0.0);
      CHECK((f.covariance() - s).norm() <= 1e-10 * s.norm());
      CHECK(f.log_det() == doctest::Approx(std::log(s.determinant())).epsilon(1e-10));
    }
  }
}

TEST_CASE("mahalanobis_sq") {
  const CovFactor id = factor_covariance(Matrix::Identity(2, 2));
  CHECK(mahalanobis_sq(vec({0, 0}), vec({0, 0}), id) == 0.0);
  CHECK(mahalanobis_sq(vec({1, 1}), vec({0, 0}), id) == doctest::Approx(2.0));
  CHECK(mahalanobis_sq(vec({2, 0}), vec({0, 0}), factor_covariance(mat2(4, 0, 0, 1))) ==
        doctest::Approx(1.0));
  CHECK(code_of([&] { mahalanobis_sq(vec({1, 2, 3}), vec({0, 0}), id); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("log_gaussian_pdf") {
  const CovFactor one = factor_covariance(Matrix::Identity(1, 1));
  const double std_normal_at_zero = std::log(1.0 / std::sqrt(2.0 * std::numbers::pi));
  CHECK(log_gaussian_pdf(vec({0}), vec({0}), one) == doctest::Approx(-0.9189385).epsilon(1e-7));
  CHECK(log_gaussian_pdf(vec({0}), vec({0}), one) == doctest::Approx(std_normal_at_zero).epsilon(1e-15));
  CHECK(log_gaussian_pdf(vec({3, 4}), vec({3, 4}), factor_covariance(Matrix::Identity(2, 2))) ==
        doctest::Approx(-std::log(2.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(log_gaussian_pdf(vec({1}), vec({0}), one) ==
        doctest::Approx(std_normal_at_zero - 0.5).epsilon(1e-15));
}

TEST_CASE("log_contaminated_pdf") {
  const CovFactor one = factor_covariance(Matrix::Identity(1, 1));
  SUBCASE("nested Gaussian limit") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
      const int d = 1 + t % 4;
      const CovFactor f = factor_covariance(test::random_spd(d, rng));
      const Vector w = test::random_vector(d, rng, 2.0);
      const Vector mu = test::random_vector(d, rng);
      CHECK(std::abs(log_contaminated_pdf(w, mu, f, 1.0 - 1e-12, 1.0 + 1e-12) -
                     log_gaussian_pdf(w, mu, f)) < 1e-9);
    }
  }
  SUBCASE("two-term sum") {
    const double phi0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double expected = std::log(0.95 * phi0 + 0.05 * phi0 / 10.0);
    CHECK(log_contaminated_pdf(vec({0}), vec({0}), one, 0.95, 100.0) ==
          doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("invalid contamination") {
    CHECK(code_of([&] { log_contaminated_pdf(vec({0}), vec({0}), one, 0.9, 0.5); }) ==
          ErrorCode::InvalidContamination);
    CHECK(code_of([&] { log_contaminated_pdf(vec({0}), vec({0}), one, 0.0, 2.0); }) ==
          ErrorCode::InvalidContamination);
    CHECK(code_of([&] { log_contaminated_pdf(vec({0}), vec({0}), one, 1.2, 2.0); }) ==
          ErrorCode::InvalidContamination);
  }
  SUBCASE("far tail stays finite") {
    const double v = log_contaminated_pdf(vec({1e3}), vec({0}), one, 0.95, 500.0);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(std::log(0.05) + log_gaussian_pdf(vec({1e3}), vec({0}),
                                                                 factor_covariance(500.0 * Matrix::Identity(1, 1))))
                   .epsilon(1e-12));
  }
}

TEST_CASE("weight_g examples") {
  const double g0 = 1.0 / (1.0 + (0.05 / 0.95) * 0.1);
  CHECK(weight_g(0.0, 0.95, 100.0, 1) == doctest::Approx(g0).epsilon(1e-15));
  CHECK(weight_g(0.0, 0.95, 100.0, 1) == doctest::Approx(0.994764).epsilon(1e-6));
  CHECK(weight_g(1e6, 0.95, 100.0, 1) < 1e-12);
  for (double delta : {0.0, 1.0, 10.0, 100.0}) {
    CHECK(std::abs(weight_g(delta, 0.5, 1.0 + 1e-9, 2) - 0.5) < 1e-6);
  }
  CHECK_THROWS_AS(weight_g(1.0, 0.95, 0.9, 1), Error);
}

TEST_CASE("weight_g is the typical posterior of the contaminated density") {
  // Independent oracle: ratio of the two weighted normal densities.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0.55, 0.99), ue(1.1, 400.0), ud(0.0, 30.0);
  for (int t = 0; t < 200; ++t) {
    const int d = 1 + t % 5;
    const double a = ua(rng), e = ue(rng), delta = ud(rng);
    const double typ = a * std::exp(-0.5 * delta);
    const double inf = (1.0 - a) * std::pow(e, -0.5 * d) * std::exp(-0.5 * delta / e);
    CHECK(weight_g(delta, a, e, d) == doctest::Approx(typ / (typ + inf)).epsilon(1e-12));
  }
}

TEST_CASE("weight_w examples") {
  for (double delta : {0.0, 3.0, 50.0}) CHECK(std::abs(weight_w(delta, 0.9, 1.0 + 1e-9, 1) - 1.0) < 1e-6);
  CHECK(std::abs(weight_w(1e6, 0.95, 100.0, 1) - 0.01) < 1e-12);
  const double g0 = 1.0 / (1.0 + (0.05 / 0.95) * 0.1);
  CHECK(weight_w(0.0, 0.95, 100.0, 1) == doctest::Approx((1.0 + 99.0 * g0) / 100.0).epsilon(1e-15));
  CHECK(weight_w(0.0, 0.95, 100.0, 1) == doctest::Approx(0.994816).epsilon(1e-6));
}

TEST_CASE("weights decrease strictly in delta") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ua(0.5, 0.999), ue(1.01, 100.0), ud(0.0, 40.0);
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + t % 4;
    const double a = ua(rng), e = ue(rng);
    double d1 = ud(rng), d2 = ud(rng);
    if (d1 > d2) std::swap(d1, d2);
    if (d2 - d1 < 1e-3) d2 = d1 + 1e-3;
    REQUIRE(weight_g(d1, a, e, d) > weight_g(d2, a, e, d));
    REQUIRE(weight_w(d1, a, e, d) > weight_w(d2, a, e, d));
  }
}

TEST_CASE("mixture lower bounds") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.5, 0.99), ue(1.5, 300.0);
  for (int t = 0; t < 200; ++t) {
    const int d = 1 + t % 3;
    const Matrix s = test::random_spd(d, rng);
    const CovFactor f = factor_covariance(s);
    const double a = ua(rng), e = ue(rng);
    const Vector w = test::random_vector(d, rng, 5.0);
    const Vector mu = test::random_vector(d, rng);
    const double lc = log_contaminated_pdf(w, mu, f, a, e);
    CHECK(lc >= std::log(a) + log_gaussian_pdf(w, mu, f) - 1e-12);
    CHECK(lc >= std::log(1.0 - a) + log_gaussian_pdf(w, mu, factor_covariance(e * s)) - 1e-12);
  }
}

TEST_CASE("1-D Gaussian density integrates to one") {
  const CovFactor f = factor_covariance(Matrix::Constant(1, 1, 2.25));
  const Vector mu = vec({0.7});
  const double h = 1e-3;
  double total = 0.0;
  for (double x = -20.0; x <= 20.0; x += h) total += std::exp(log_gaussian_pdf(vec({x}), mu, f)) * h;
  CHECK(std::abs(total - 1.0) < 1e-4);
}

TEST_CASE("mahalanobis distance is rotation invariant") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + t % 4;
    const Matrix s = test::random_spd(d, rng);
    const Matrix q = Eigen::HouseholderQR<Matrix>(test::random_spd(d, rng, 0.0)).householderQ();
    const Vector w = test::random_vector(d, rng, 2.0);
    const Vector mu = test::random_vector(d, rng);
    Matrix rs = q * s * q.transpose();
    rs = 0.5 * (rs + rs.transpose());
    const double a = mahalanobis_sq(w, mu, factor_covariance(s));
    const double b = mahalanobis_sq(q * w, q * mu, factor_covariance(rs));
    CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, a));
  }
}

TEST_CASE("golden section") {
  const auto r = golden_section_maximize([](double x) { return -(x - 2.5) * (x - 2.5); }, 0.0, 10.0);
  CHECK(r.x == doctest::Approx(2.5).epsilon(1e-7));
  const auto edge = golden_section_maximize([](double x) { return x; }, 1.0, 3.0);
  CHECK(edge.x == 3.0);
}

TEST_CASE("log_add_exp") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(log_add_exp(-inf, -inf) == -inf);
  CHECK(log_add_exp(-inf, 1.5) == 1.5);
  CHECK(log_add_exp(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)).epsilon(1e-15));
  CHECK(log_add_exp(-1000.0, -1000.0) == doctest::Approx(-1000.0 + std::log(2.0)).epsilon(1e-15));
}
