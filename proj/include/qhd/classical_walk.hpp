// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qhd/lattice.hpp"

namespace qhd {

/// Continuous-time constrained random walk: every allowed hop fires at
/// `hop_rate`, so the waiting time is exponential with rate
/// hop_rate * (#allowed hops) and the move is drawn uniformly.
struct WalkSettings {
  std::size_t trajectories = 1000;
  double t_max = 100.0;
  double hop_rate = 1.0;
  std::uint64_t seed = 7;
  /// Observation grid; empty means 0, 1, ..., floor(t_max).
  std::vector<double> record_times;
  /// Worker threads (0 = hardware concurrency). Results do not depend on it.
  unsigned threads = 1;

  void validate() const;
};

struct ClassicalSeries {
  int L = 0;
  int M = 0;
  double eta = 0.0;
  double g_star = 0.0;
  std::size_t trajectories = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> occupations;  // ensemble mean per time
  std::vector<double> G;                          // from the mean occupations
  std::vector<double> standard_error;             // of G across trajectories
};

ClassicalSeries simulate(const Lattice& lattice, const Configuration& initial,
                         const WalkSettings& settings);

/// Single seeded trajectory; returns the configuration at each record time.
/// Exposed for statistical tests of the chain itself.
std::vector<Configuration> walk_trajectory(const Lattice& lattice, const Configuration& initial,
                                           const WalkSettings& settings,
                                           std::size_t trajectory_id);

}  // namespace qhd
