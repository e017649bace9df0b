// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file state_space.hpp
 * @brief Fixed-particle-number sectors and their kinetic fragments.
 *
 * A Basis is an ordered list of valid configurations (ascending numeric
 * value of the bit-set) with an exact inverse lookup. Sectors and fragments
 * share the type, so every downstream consumer sees the same canonical
 * ordering regardless of how the states were discovered.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qhd/lattice.hpp"

namespace qhd {

inline constexpr std::size_t kDefaultStateCap = 50'000'000;

class Basis {
 public:
  Basis() = default;

  /// `configs` must be sorted ascending and duplicate-free.
  Basis(int site_count, int particle_count, std::span<const Configuration> configs);

  /// Takes ownership of flat storage (word_count words per state, ascending).
  static Basis from_flat(int site_count, int particle_count, std::vector<std::uint64_t> words);

  std::size_t size() const noexcept { return words_ == 0 ? 0 : data_.size() / words_; }
  bool empty() const noexcept { return size() == 0; }
  int site_count() const noexcept { return site_count_; }
  int particle_count() const noexcept { return particle_count_; }

  Configuration operator[](std::size_t i) const {
    return Configuration::from_words(site_count_, state_words(i));
  }

  std::span<const std::uint64_t> state_words(std::size_t i) const noexcept {
    return {data_.data() + i * words_, static_cast<std::size_t>(words_)};
  }

  /// Binary search; nullopt when the configuration is not in the basis.
  std::optional<std::size_t> index_of(const Configuration& config) const noexcept;

 private:
  int site_count_ = 0;
  int particle_count_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> data_;
};

/// Exact sector size from a row transfer count (L <= 12), else nullopt.
std::optional<double> estimate_sector_size(const Lattice& lattice, int particles);

/// All valid configurations with the given particle count. Throws
/// CapacityError when the sector would exceed `cap` states.
Basis enumerate_sector(const Lattice& lattice, int particles, std::size_t cap = kDefaultStateCap);

/// Closure of `config` under allowed hops (breadth-first), canonically sorted.
Basis fragment_of(const Lattice& lattice, const Configuration& config,
                  std::size_t cap = kDefaultStateCap);

struct FragmentDecomposition {
  /// Fragment label per basis ordinal; fragments are numbered in order of
  /// their smallest member.
  std::vector<int> fragment_id;
  std::vector<std::size_t> fragment_sizes;
  std::size_t total = 0;
  std::size_t largest_size = 0;
  int largest_id = -1;  // lowest id among the largest fragments
  double ratio = 0.0;   // largest_size / total

  int fragment_count() const noexcept { return static_cast<int>(fragment_sizes.size()); }
  std::vector<std::size_t> members(int id) const;
};

FragmentDecomposition decompose_sector(const Lattice& lattice, const Basis& sector);

/// Sub-basis of a sector restricted to one fragment.
Basis fragment_basis(const Basis& sector, const FragmentDecomposition& decomposition, int id);

struct FragmentationThresholds {
  double eta1 = 0.0;     // 1/L
  double eta2 = 0.0;     // 1/2 - ceil(L/2)/L^2
  double eta_max = 0.0;  // 1/2 - (L mod 2)/(2 L^2)
  /// Single-size heuristic: smallest scanned eta with ratio < 0.5.
  std::optional<double> eta_star;
};

FragmentationThresholds fragmentation_thresholds(int L);

struct ScanRow {
  int M = 0;
  double eta = 0.0;
  std::size_t N = 0;
  std::size_t N_max = 0;
  double ratio = 0.0;
};

struct FragmentationScan {
  int L = 0;
  std::vector<ScanRow> rows;
  std::vector<int> skipped;  // particle counts refused by the capacity cap
  FragmentationThresholds thresholds;
};

/// One row per M in [m_first, m_last]; empty sectors are omitted.
FragmentationScan scan_fragmentation(const Lattice& lattice, int m_first, int m_last,
                                     std::size_t cap = kDefaultStateCap);

/// Largest particle count admitting a valid configuration (exhaustive).
int max_particle_count(const Lattice& lattice, std::size_t cap = kDefaultStateCap);

}  // namespace qhd
