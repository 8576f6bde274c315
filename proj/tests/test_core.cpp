// Copyright 2026 The quanta Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "quanta/core.hpp"
#include "quanta/errors.hpp"

using namespace quanta;

namespace {

  bool has_violation(const WeightDensity& w, const std::string& text) {
    const auto r = validate(w);
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const std::string& v) { return v.find(text) != std::string::npos; });
  }

}

TEST_CASE("validate: finite comb with unit masses is ok") {
  CHECK(validate(WeightDensity::comb(1.0, {1, 1, 1})).ok());
}

TEST_CASE("validate: negative spacing is reported") {
  CHECK(has_violation(WeightDensity::comb(-1.0, {1}), "epsilon must be positive"));
}

TEST_CASE("validate: repeated table abscissa is reported") {
  CHECK(has_violation(WeightDensity::tabulated({0, 0}, {1, 2}), "eta not strictly increasing"));
}

TEST_CASE("validate: the remaining invariants") {
  CHECK(has_violation(WeightDensity::comb(1.0, {0, 0}), "at least one positive mass"));
  CHECK(has_violation(WeightDensity::comb(1.0, {1, -1}), "nonnegative"));
  CHECK(has_violation(WeightDensity::tabulated({0.5, 1}, {1, 1}), "start at eta = 0"));
  CHECK(has_violation(WeightDensity::tabulated({0, 1}, {1, -1}), "nonnegative"));
  CHECK(has_violation(WeightDensity::tabulated({0}, {1}), "two knots"));
  CHECK(has_violation(WeightDensity::tabulated({0, 1, 2}, {1, 1}), "differ in length"));
  CHECK_FALSE(validate(WeightDensity()).ok());
  CHECK_FALSE(validate(WeightDensity::constant(0.0)).ok());
}

TEST_CASE("validate: every builder produces a valid density") {
  CHECK(validate(WeightDensity::unit_comb(0.5)).ok());
  CHECK(validate(WeightDensity::comb(2.0, {0, 3}, 0.5)).ok());
  CHECK(validate(WeightDensity::tabulated({0, 1, 3}, {0, 2, 0})).ok());
  CHECK(validate(WeightDensity::constant()).ok());
  CHECK(validate(WeightDensity::exponential(2)).ok());
  CHECK(validate(WeightDensity::inverse_sqrt()).ok());
  CHECK(validate(WeightDensity::mixture(WeightDensity::unit_comb(1), WeightDensity::exponential())).ok());
  CHECK(validate(WeightDensity::unit_comb(1).scaled(3.0)).ok());
  oracle::DensityFactory f(11);
  for (int i = 0; i < 200; ++i)
    CHECK(validate(f.any()).ok());
}

TEST_CASE("kind") {
  CHECK(WeightDensity::unit_comb(1).kind() == DensityKind::Comb);
  CHECK(WeightDensity::tabulated({0, 1}, {1, 1}).kind() == DensityKind::Tabulated);
  CHECK(WeightDensity::constant().kind() == DensityKind::Analytic);
  CHECK(WeightDensity::mixture(WeightDensity::unit_comb(1), WeightDensity::tabulated({0, 1}, {1, 1})).kind() ==
        DensityKind::Mixture);
  CHECK(std::string(to_string(DensityKind::Mixture)) == "mixture");
}

TEST_CASE("cumulative mass: three unit atoms up to 2.5") {
  CHECK(cumulative_mass(WeightDensity::comb(1.0, {1, 1, 1}), 2.5) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("cumulative mass: constant table") {
  CHECK(cumulative_mass(WeightDensity::tabulated({0, 10}, {1, 1}), 2.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("cumulative mass at zero keeps only the atom at zero") {
  CHECK(cumulative_mass(WeightDensity::comb(1.0, {0.7, 1}), 0.0) == 0.7);
  CHECK(cumulative_mass(WeightDensity::tabulated({0, 1}, {3, 3}), 0.0) == 0.0);
  CHECK(cumulative_mass(WeightDensity::constant(), 0.0) == 0.0);
  CHECK(cumulative_mass(WeightDensity::inverse_sqrt(), 0.0) == 0.0);
}

TEST_CASE("cumulative mass: atoms count at closed left endpoints") {
  const auto w = WeightDensity::unit_comb(0.5);
  CHECK(cumulative_mass(w, 1.0) == doctest::Approx(3.0));
  CHECK(cumulative_mass(w, 0.999999) == doctest::Approx(2.0));
}

TEST_CASE("cumulative mass: analytic reference densities") {
  for (double e : {0.01, 0.5, 1.0, 3.0}) {
    CHECK(cumulative_mass(WeightDensity::constant(2.0), e) == doctest::Approx(2 * e).epsilon(1e-14));
    CHECK(cumulative_mass(WeightDensity::exponential(), e) == doctest::Approx(-std::expm1(-e)).epsilon(1e-14));
    CHECK(cumulative_mass(WeightDensity::inverse_sqrt(), e) ==
          doctest::Approx(2 * std::sqrt(std::min(e, 1.0))).epsilon(1e-14));
  }
}

TEST_CASE("cumulative mass: table against quadrature") {
  const std::vector<double> eta{0, 0.3, 1.1, 2.0}, w{1.0, 0.2, 1.7, 0.4};
  const auto d = WeightDensity::tabulated(eta, w);
  for (double e : {0.1, 0.3, 0.75, 1.9, 2.0, 5.0}) {
    // Simpson is exact on each linear piece
    double want = 0;
    for (std::size_t i = 0; i + 1 < eta.size(); ++i) {
      const double hi = std::min(e, eta[i + 1]);
      if (hi > eta[i])
        want += oracle::simpson([&](double x) { return oracle::table_value(eta, w, x); }, eta[i], hi, 2);
    }
    CHECK(cumulative_mass(d, e) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("cumulative mass rejects negative eta0") {
  CHECK_THROWS_AS(cumulative_mass(WeightDensity::unit_comb(1), -0.1), DomainError);
}

TEST_CASE("cumulative mass is nondecreasing and linear over mixtures") {
  oracle::DensityFactory f(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = f.comb();
    const auto b = f.table();
    const auto m = WeightDensity::mixture(a, b);
    double prev = -1;
    for (int i = 0; i <= 60; ++i) {
      const double e = 0.15 * i;
      const double got = cumulative_mass(m, e);
      CHECK(got >= prev);
      prev = got;
      const double sum = cumulative_mass(a, e) + cumulative_mass(b, e);
      CHECK(std::abs(got - sum) <= 1e-12 * sum);
    }
  }
}

TEST_CASE("infinite comb: mass grows by one per atom") {
  const auto w = WeightDensity::unit_comb(1.0);
  for (int k = 0; k < 50; ++k)
    CHECK(cumulative_mass(w, k + 0.5) == doctest::Approx(k + 1.0));
}

TEST_CASE("scaled multiplies every part") {
  const auto w = WeightDensity::mixture(WeightDensity::comb(1, {1, 2}), WeightDensity::tabulated({0, 1}, {1, 1}));
  CHECK(cumulative_mass(w.scaled(3.0), 4.0) == doctest::Approx(3 * cumulative_mass(w, 4.0)));
}

TEST_CASE("support start") {
  CHECK(WeightDensity::comb(0.5, {0, 0, 2}).support_start() == 1.0);
  CHECK(WeightDensity::tabulated({0, 1, 2}, {0, 0, 1}).support_start() == 1.0);
  CHECK(WeightDensity::unit_comb(1).support_start() == 0.0);
  CHECK(WeightDensity::mixture(WeightDensity::comb(1, {0, 1}), WeightDensity::tabulated({0, 2, 3}, {0, 0, 1}))
            .support_start() == 1.0);
}

TEST_CASE("ensemble configuration") {
  const EnsembleConfig c{4, 2, 10.0};
  CHECK(c.beta() == 2.5);
  CHECK(c.ratio() == 0.5);
  CHECK(EnsembleConfig::from_beta(3, 6, 2.0).e_total == 6.0);
  CHECK_NOTHROW(check(c));
  CHECK_THROWS_AS(check({0, 1, 1.0}), DomainError);
  CHECK_THROWS_AS(check({1, 0, 1.0}), DomainError);
  CHECK_THROWS_AS(check({1, 1, 0.0}), DomainError);
}

TEST_CASE("physical constants default to reduced units") {
  PhysicalConstants k;
  CHECK(k.k_boltzmann == 1.0);
  CHECK(k.h_planck == 1.0);
  CHECK(k.c_light == 1.0);
  CHECK(k.valid());
  k.c_light = 0;
  CHECK_FALSE(k.valid());
}

TEST_CASE("alpha grids") {
  const auto lin = AlphaGrid::linear(1, 3, 5);
  CHECK(lin.size() == 5);
  CHECK(lin[2] == doctest::Approx(2.0));
  CHECK(lin.values().back() == 3.0);
  const auto lg = AlphaGrid::logarithmic(0.1, 10, 3);
  CHECK(lg[1] == doctest::Approx(1.0));
  CHECK(lg.values().back() == 10.0);
  CHECK_THROWS_AS(AlphaGrid({1.0}), DomainError);
  CHECK_THROWS_AS(AlphaGrid({1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(AlphaGrid({0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(AlphaGrid::linear(2, 1, 4), DomainError);
}

TEST_CASE("energy curves reject increasing energy beyond the tolerance") {
  CHECK_NOTHROW(EnergyCurve({1, 2, 3}, {3, 2, 2 + 0.5e-9}));
  CHECK_THROWS_AS(EnergyCurve({1, 2, 3}, {3, 2, 2 + 2e-9}), DomainError);
  CHECK_THROWS_AS(EnergyCurve({1, 2}, {1, -1}), DomainError);
  CHECK_THROWS_AS(EnergyCurve({2, 1}, {1, 1}), DomainError);
  CHECK_THROWS_AS(EnergyCurve({1, 2}, {1}), DomainError);
}
