// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>

#include "doctest.h"
#include "qhd/classical_walk.hpp"
#include "qhd/errors.hpp"
#include "qhd/scenarios.hpp"
#include "qhd/state_space.hpp"

using namespace qhd;

namespace {

// Upper 0.999 quantile of chi-square with k degrees of freedom
// (Wilson-Hilferty).
double chi2_upper(int k) {
  const double z = 3.090232;
  const double a = 2.0 / (9.0 * k);
  return k * std::pow(1.0 - a + z * std::sqrt(a), 3);
}

}  // namespace

TEST_CASE("settings validation") {
  WalkSettings s;
  CHECK_NOTHROW(s.validate());
  s.trajectories = 0;
  CHECK_THROWS_AS(s.validate(), InvalidParameter);
  s = {};
  s.t_max = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidParameter);
  s = {};
  s.record_times = {0.0, 2.0, 1.0};
  CHECK_THROWS_AS(s.validate(), InvalidParameter);
  s.record_times = {0.0, 200.0};
  CHECK_THROWS_AS(s.validate(), InvalidParameter);
}

TEST_CASE("frozen scenario is constant with zero spread") {
  const Lattice lat(6);
  WalkSettings s;
  s.trajectories = 10;
  s.t_max = 50.0;
  const auto out = simulate(lat, build_scenario({ScenarioKind::kMiddleRow, 6, {}}), s);
  REQUIRE(out.times.size() == 51);
  for (std::size_t k = 0; k < out.times.size(); ++k) {
    CHECK(out.G[k] == out.G.front());
    CHECK(out.standard_error[k] == 0.0);
  }
  CHECK(out.G.front() == doctest::Approx(1.0 - std::pow(2.0 * 15 / 36 - 1, 2)));
}

TEST_CASE("single particle spreads uniformly") {
  const Lattice lat(3);
  WalkSettings s;
  s.trajectories = 4000;
  s.t_max = 30.0;
  const auto out = simulate(lat, Configuration::from_sites(9, std::vector<int>{0}), s);
  for (double n : out.occupations.back()) CHECK(std::abs(n - 1.0 / 9) < 0.03);
  CHECK(std::abs(out.G.back()) < 3.0 * out.standard_error.back() + 1e-3);
}

TEST_CASE("occupations are probabilities summing to M") {
  const Lattice lat(6);
  const auto c = build_scenario({ScenarioKind::kSecondRow, 6, {}});
  WalkSettings s;
  s.trajectories = 50;
  s.t_max = 20.0;
  const auto out = simulate(lat, c, s);
  for (const auto& occ : out.occupations) {
    double sum = 0.0;
    for (double n : occ) {
      CHECK(n >= 0.0);
      CHECK(n <= 1.0);
      sum += n;
    }
    CHECK(std::abs(sum - 15.0) < 1e-10);
  }
}

TEST_CASE("long runs visit a small fragment uniformly") {
  const Lattice lat(3);
  const Basis sector = enumerate_sector(lat, 3);
  const auto d = decompose_sector(lat, sector);
  const Basis frag = fragment_basis(sector, d, d.largest_id);
  REQUIRE(frag.size() <= 50);
  REQUIRE(frag.size() > 5);

  WalkSettings s;
  s.t_max = 8000.0;
  for (int k = 1; k <= 4000; ++k) s.record_times.push_back(2.0 * k);
  const auto path = walk_trajectory(lat, frag[0], s, 0);
  std::map<std::size_t, int> counts;
  for (const auto& c : path) {
    const auto idx = frag.index_of(c);
    REQUIRE(idx.has_value());
    ++counts[*idx];
  }
  const double expected = static_cast<double>(path.size()) / frag.size();
  double chi2 = 0.0;
  for (std::size_t i = 0; i < frag.size(); ++i) {
    const double o = counts.count(i) ? counts[i] : 0.0;
    chi2 += (o - expected) * (o - expected) / expected;
  }
  CHECK(chi2 < chi2_upper(static_cast<int>(frag.size()) - 1));
}

TEST_CASE("seeded runs are reproducible and thread independent") {
  const Lattice lat(6);
  const auto c = build_scenario({ScenarioKind::kFirstRow, 6, {}});
  WalkSettings s;
  s.trajectories = 64;
  s.t_max = 10.0;
  s.seed = 42;
  const auto a = simulate(lat, c, s);
  const auto b = simulate(lat, c, s);
  s.threads = 3;
  const auto t = simulate(lat, c, s);
  CHECK(a.G == b.G);
  CHECK(a.G == t.G);
  CHECK(a.standard_error == t.standard_error);
  CHECK(a.occupations == t.occupations);
  s.seed = 43;
  CHECK(simulate(lat, c, s).G != a.G);
}

TEST_CASE("trajectories stay valid") {
  const Lattice lat(6);
  WalkSettings s;
  s.t_max = 50.0;
  const auto path =
      walk_trajectory(lat, build_scenario({ScenarioKind::kHalfDiagonal, 6, {}}), s, 3);
  for (const auto& c : path) {
    CHECK(is_valid(c, lat));
    CHECK(c.particle_count() == 15);
  }
}

TEST_CASE("invalid initial state is rejected") {
  CHECK_THROWS_AS(simulate(Lattice(2), Configuration::from_bits("1100"), {}),
                  ConstraintViolation);
}
