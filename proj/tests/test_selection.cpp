#include <doctest.h>

#include <cmath>

#include "cwm/selection.hpp"
#include "cwm/simulate.hpp"
#include "test_support.hpp"

using namespace cwm;

TEST_CASE("bic arithmetic") {
  CHECK(std::abs(bic(-1800.0, 37, 270) - (-3807.14)) < 0.01);
  CHECK(bic(-123.5, 0, 50) == -247.0);
  CHECK(bic(-10.0, 9, 100) - bic(-10.0, 9, 200) == doctest::Approx(9.0 * std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(bic(0.0, 1, 0), Error);
}

TEST_CASE("Scenario A selects two Gaussian components") {
  const Dataset d = test::scenario_dataset(Scenario::A, 200, 81);
  FitConfig c;
  c.seed = 3;
  const auto r = select_k(d, {1, 2, 3}, c, Family::Gaussian);
  CHECK(r.best_k == 2);
  CHECK(r.best_family == Family::Gaussian);
  REQUIRE(r.best_fit.has_value());
  CHECK(r.best_fit->params.k() == 2);
  REQUIRE(r.table.size() == 3);
  for (const auto& e : r.table) CHECK(e.m == count_free_parameters(e.k, 2, 2, Family::Gaussian));
}

TEST_CASE("a single candidate wins trivially") {
  const Dataset d = test::scenario_dataset(Scenario::A, 100, 82);
  const auto r = select_k(d, {1}, FitConfig{}, Family::Contaminated);
  CHECK(r.best_k == 1);
}

TEST_CASE("parameter counts of the two families differ by 4k") {
  const Dataset d = test::scenario_dataset(Scenario::B, 150, 83);
  const auto r = select_k(d, {1, 2}, FitConfig{}, {Family::Gaussian, Family::Contaminated});
  REQUIRE(r.table.size() == 4);
  CHECK(r.table[2].m - r.table[0].m == 4);
  CHECK(r.table[3].m - r.table[1].m == 8);
}

TEST_CASE("noise favours the contaminated model with two components") {
  const Dataset clean = test::scenario_dataset(Scenario::A, 200, 84);
  std::mt19937_64 rng(85);
  const auto noisy = perturb_with_uniform_noise(clean, 20, test::noise_box_side(clean), rng);
  FitConfig c;
  c.seed = 5;
  const auto contaminated = select_k(noisy.data, {1, 2, 3}, c, Family::Contaminated);
  CHECK(contaminated.best_k == 2);
  const auto both = select_k(noisy.data, {2}, c, {Family::Gaussian, Family::Contaminated});
  REQUIRE(both.table.size() == 2);
  CHECK(both.table[1].bic > both.table[0].bic);
}

TEST_CASE("failed fits are kept and skipped") {
  Matrix m(6, 2);
  m << 0, 0, 1, 1, 2, 2.1, 3, 2.9, 4, 4.2, 5, 5;
  const auto r = select_k(Dataset(m, 1, 1), {1, 3}, FitConfig{}, Family::Gaussian);
  REQUIRE(r.table.size() == 2);
  CHECK_FALSE(r.table[0].failed);
  CHECK(r.table[1].failed);
  CHECK(r.best_k == 1);
  const std::string csv = selection_csv(r);
  CHECK(csv.rfind("family,k,loglik,m,bic,converged\n", 0) == 0);
  CHECK(csv.find("gaussian,3,NA,") != std::string::npos);
  const auto j = selection_json(r);
  CHECK(j["best_k"] == 1);
  CHECK(j["table"][1]["failed"] == true);
}

TEST_CASE("selection is deterministic") {
  const Dataset d = test::scenario_dataset(Scenario::B, 120, 86);
  FitConfig c;
  c.seed = 9;
  const auto a = select_k(d, {1, 2}, c, {Family::Gaussian, Family::Contaminated});
  const auto b = select_k(d, {1, 2}, c, {Family::Gaussian, Family::Contaminated});
  CHECK(selection_csv(a) == selection_csv(b));
  CHECK(selection_json(a).dump() == selection_json(b).dump());
}
