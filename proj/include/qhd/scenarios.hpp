// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qhd/lattice.hpp"

namespace qhd {

enum class ScenarioKind {
  kCrystal,
  kSecondRow,
  kFirstRow,
  kHalfDiagonal,
  kMiddleRow,
  kPointDefects,
  kCustom,
};

/// Named initial state. removal_sites is only consulted for point-defects
/// (empty means the bundled default) and custom.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kCrystal;
  int L = 0;
  std::vector<int> removal_sites;
};

ScenarioKind parse_scenario_kind(std::string_view name);
std::string_view scenario_name(ScenarioKind kind);

/// Sites with (r + c) even. For odd L this gives (L*L + 1) / 2 particles.
Configuration checkerboard(const Lattice& lattice);

/// Two well-separated vacancies on the main diagonal at L/4 and 3L/4.
std::vector<int> default_point_defects(const Lattice& lattice);

/// Sites removed from the checkerboard for a named scenario.
std::vector<int> scenario_removals(const ScenarioSpec& spec, const Lattice& lattice);

/// Throws InvalidScenario if a removal site is not occupied in the crystal.
Configuration build_scenario(const ScenarioSpec& spec);

}  // namespace qhd
