// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "qhd/errors.hpp"
#include "qhd/lattice.hpp"
#include "qhd/scenarios.hpp"

using namespace qhd;

namespace {

Configuration scenario(ScenarioKind kind, int L, std::vector<int> removals = {}) {
  return build_scenario({kind, L, std::move(removals)});
}

}  // namespace

TEST_CASE("checkerboard examples") {
  const Lattice l2(2);
  const auto c2 = checkerboard(l2);
  CHECK(c2.particle_count() == 2);
  CHECK(c2.occupied(l2.site(0, 0)));
  CHECK(c2.occupied(l2.site(1, 1)));
  CHECK(checkerboard(Lattice(6)).particle_count() == 18);
  CHECK(checkerboard(Lattice(8)).particle_count() == 32);
  CHECK(checkerboard(Lattice(5)).particle_count() == 13);
}

TEST_CASE("named scenario particle counts") {
  CHECK(scenario(ScenarioKind::kSecondRow, 8).particle_count() == 28);
  CHECK(scenario(ScenarioKind::kFirstRow, 6).particle_count() == 15);
  CHECK(scenario(ScenarioKind::kHalfDiagonal, 10).particle_count() == 45);
  CHECK(scenario(ScenarioKind::kMiddleRow, 6).particle_count() == 15);
}

TEST_CASE("named scenarios are valid for every even L") {
  for (int L = 4; L <= 20; L += 2) {
    const Lattice lat(L);
    CHECK(frozen_and_snakes(scenario(ScenarioKind::kCrystal, L), lat).frozen);
    CHECK(scenario(ScenarioKind::kCrystal, L).particle_count() == L * L / 2);
    for (auto kind : {ScenarioKind::kSecondRow, ScenarioKind::kFirstRow,
                      ScenarioKind::kHalfDiagonal, ScenarioKind::kMiddleRow}) {
      const auto c = scenario(kind, L);
      CHECK(is_valid(c, lat));
      CHECK(c.particle_count() == L * L / 2 - L / 2);
    }
    if (L >= 6) CHECK(allowed_hops(scenario(ScenarioKind::kMiddleRow, L), lat).empty());
    CHECK_FALSE(allowed_hops(scenario(ScenarioKind::kSecondRow, L), lat).empty());
  }
}

TEST_CASE("middle row at L=4 leaves a sliding boundary particle") {
  // Row 3 has no row above it, so once row 2 is emptied the particle at
  // (3,1) can slide to the corner.
  const Lattice lat(4);
  const auto hops = allowed_hops(scenario(ScenarioKind::kMiddleRow, 4), lat);
  REQUIRE(hops.size() == 1);
  CHECK(hops[0] == Hop{lat.site(3, 1), lat.site(3, 0)});
}

TEST_CASE("removed rows and diagonal") {
  const Lattice lat(6);
  const auto second = scenario(ScenarioKind::kSecondRow, 6);
  const auto first = scenario(ScenarioKind::kFirstRow, 6);
  const auto half = scenario(ScenarioKind::kHalfDiagonal, 6);
  for (int c = 0; c < 6; ++c) {
    CHECK_FALSE(second.occupied(lat.site(1, c)));
    CHECK_FALSE(first.occupied(lat.site(0, c)));
  }
  for (int k = 0; k < 3; ++k) CHECK_FALSE(half.occupied(lat.site(k, k)));
  for (int k = 3; k < 6; ++k) CHECK(half.occupied(lat.site(k, k)));
}

TEST_CASE("point defects and custom removals") {
  const Lattice lat(20);
  const auto defects = default_point_defects(lat);
  REQUIRE(defects.size() == 2);
  CHECK(defects[0] == lat.site(5, 5));
  CHECK(defects[1] == lat.site(15, 15));
  CHECK(scenario(ScenarioKind::kPointDefects, 20).particle_count() == 198);
  CHECK(scenario(ScenarioKind::kCustom, 4, {0, 5}).particle_count() == 6);
  CHECK_THROWS_AS(scenario(ScenarioKind::kCustom, 4, {1}), InvalidScenario);
  CHECK_THROWS_AS(scenario(ScenarioKind::kCustom, 4, {16}), InvalidScenario);
}

TEST_CASE("scenario names round trip") {
  for (auto kind : {ScenarioKind::kCrystal, ScenarioKind::kSecondRow, ScenarioKind::kFirstRow,
                    ScenarioKind::kHalfDiagonal, ScenarioKind::kMiddleRow,
                    ScenarioKind::kPointDefects, ScenarioKind::kCustom}) {
    CHECK(parse_scenario_kind(scenario_name(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_scenario_kind("diagonal"), InvalidScenario);
}
