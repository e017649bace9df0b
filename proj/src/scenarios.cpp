// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhd/scenarios.hpp"

#include <array>
#include <utility>

#include "qhd/errors.hpp"

namespace qhd {

namespace {

constexpr std::array<std::pair<std::string_view, ScenarioKind>, 7> kNames{{
    {"crystal", ScenarioKind::kCrystal},
    {"second-row", ScenarioKind::kSecondRow},
    {"first-row", ScenarioKind::kFirstRow},
    {"half-diagonal", ScenarioKind::kHalfDiagonal},
    {"middle-row", ScenarioKind::kMiddleRow},
    {"point-defects", ScenarioKind::kPointDefects},
    {"custom", ScenarioKind::kCustom},
}};

std::vector<int> occupied_in_row(const Lattice& lattice, const Configuration& crystal, int row) {
  std::vector<int> out;
  for (int c = 0; c < lattice.linear_size(); ++c) {
    const int s = lattice.site(row, c);
    if (crystal.occupied(s)) out.push_back(s);
  }
  return out;
}

}  // namespace

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (const auto& [n, kind] : kNames) {
    if (n == name) return kind;
  }
  throw InvalidScenario("unknown scenario '" + std::string(name) + "'");
}

std::string_view scenario_name(ScenarioKind kind) {
  for (const auto& [n, k] : kNames) {
    if (k == kind) return n;
  }
  return "unknown";
}

Configuration checkerboard(const Lattice& lattice) {
  Configuration c(lattice.site_count());
  for (int s = 0; s < lattice.site_count(); ++s) {
    if ((lattice.row(s) + lattice.col(s)) % 2 == 0) c.set(s);
  }
  return c;
}

std::vector<int> default_point_defects(const Lattice& lattice) {
  const int L = lattice.linear_size();
  const int a = L / 4;
  const int b = (3 * L) / 4;
  if (a == b) return {lattice.site(a, a)};
  return {lattice.site(a, a), lattice.site(b, b)};
}

std::vector<int> scenario_removals(const ScenarioSpec& spec, const Lattice& lattice) {
  const int L = lattice.linear_size();
  const Configuration crystal = checkerboard(lattice);
  switch (spec.kind) {
    case ScenarioKind::kCrystal:
      return {};
    case ScenarioKind::kSecondRow:
      return occupied_in_row(lattice, crystal, 1);
    case ScenarioKind::kFirstRow:
      return occupied_in_row(lattice, crystal, 0);
    case ScenarioKind::kMiddleRow:
      return occupied_in_row(lattice, crystal, L / 2);
    case ScenarioKind::kHalfDiagonal: {
      std::vector<int> out;
      for (int k = 0; k < L / 2; ++k) out.push_back(lattice.site(k, k));
      return out;
    }
    case ScenarioKind::kPointDefects:
      return spec.removal_sites.empty() ? default_point_defects(lattice) : spec.removal_sites;
    case ScenarioKind::kCustom:
      return spec.removal_sites;
  }
  return {};
}

Configuration build_scenario(const ScenarioSpec& spec) {
  const Lattice lattice(spec.L);
  Configuration config = checkerboard(lattice);
  for (int s : scenario_removals(spec, lattice)) {
    if (s < 0 || s >= lattice.site_count()) {
      throw InvalidScenario("removal site " + std::to_string(s) + " is outside the lattice");
    }
    if (!config.occupied(s)) {
      throw InvalidScenario("removal site " + std::to_string(s) + " (row " +
                            std::to_string(lattice.row(s)) + ", col " +
                            std::to_string(lattice.col(s)) + ") is not occupied");
    }
    config.clear(s);
  }
  return config;
}

}  // namespace qhd
