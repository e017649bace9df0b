// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectral.hpp
 * @brief Dense eigenstates of fragment Hamiltonians and their diagnostics.
 *
 * Entanglement entropy uses a bipartition into the bottom rows (A) and the
 * rest (B). Because the particle number is fixed, the amplitude matrix
 * psi(a, b) is block diagonal in the particle count of the A pattern, so the
 * Schmidt spectrum is collected block by block from the smaller Gram matrix.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qhd/hamiltonian.hpp"
#include "qhd/lattice.hpp"
#include "qhd/state_space.hpp"

namespace qhd {

inline constexpr std::size_t kDefaultDenseCap = 20'000;

struct Spectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k is the eigenvector of values(k)
  bool fallback = false;    // LAPACK result was rejected, Eigen solver used
};

/// Full dense eigendecomposition through LAPACK, checked by a randomized
/// residual probe; a rejected result is recomputed with Eigen's solver.
/// Throws CapacityError above `dense_cap`.
Spectrum diagonalize(const SparseHamiltonian& hamiltonian,
                     std::size_t dense_cap = kDefaultDenseCap);

/// Degeneracy-group label per eigenvalue: consecutive levels closer than
/// `tolerance` share a label; labels count up from 0.
std::vector<int> degeneracy_groups(const Eigen::VectorXd& ascending_values,
                                   double tolerance = 1e-9);

struct EaOrder {
  double q_ea = 0.0;
  double q = 0.0;  // (q_ea - (2 eta - 1)^4) / (1 - (2 eta - 1)^4)
};

/// Per-basis precomputation shared by every state analyzed on that basis.
class EigenstateAnalyzer {
 public:
  /// rows_in_a < 0 selects floor(L/2) bottom rows.
  EigenstateAnalyzer(const Lattice& lattice, const Basis& basis, int rows_in_a = -1);

  int rows_in_a() const noexcept { return rows_in_a_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t distinct_a_patterns() const noexcept { return a_patterns_; }
  std::size_t distinct_b_patterns() const noexcept { return b_patterns_; }

  /// Von Neumann entropy (natural log) of the bottom-row subsystem; Schmidt
  /// weights below 1e-14 are dropped.
  double entanglement_entropy(std::span<const double> amplitudes) const;
  double entanglement_entropy(std::span<const std::complex<double>> amplitudes) const;

  /// Throws DomainError when eta is 0 or 1.
  EaOrder ea_order(std::span<const double> amplitudes) const;
  EaOrder ea_order(std::span<const std::complex<double>> amplitudes) const;

 private:
  struct Entry {
    std::size_t state;
    int a;
    int b;
  };
  struct Block {
    int a_count = 0;
    int b_count = 0;
    std::vector<Entry> entries;
  };

  template <typename T>
  double entropy_impl(std::span<const T> amplitudes) const;
  EaOrder ea_from_probabilities(std::span<const double> probabilities) const;

  int sites_;
  int particles_;
  int rows_in_a_;
  std::size_t dimension_;
  std::size_t a_patterns_ = 0;
  std::size_t b_patterns_ = 0;
  std::vector<Block> blocks_;
  std::vector<int> occupied_;  // particles_ sites per state
};

double entanglement_entropy(const Lattice& lattice, const Basis& basis,
                            std::span<const double> amplitudes, int rows_in_a = -1);
double entanglement_entropy(const Lattice& lattice, const Basis& basis,
                            std::span<const std::complex<double>> amplitudes, int rows_in_a = -1);
EaOrder ea_order(const Lattice& lattice, const Basis& basis, std::span<const double> amplitudes);
EaOrder ea_order(const Lattice& lattice, const Basis& basis,
                 std::span<const std::complex<double>> amplitudes);

enum class ScanScope { kLargestFragment, kAllFragments };

struct EigenstateRow {
  double lambda = 0.0;
  int fragment_id = 0;
  std::size_t fragment_dimension = 0;
  std::size_t state_index = 0;  // ascending-energy index within the fragment
  double energy = 0.0;
  double energy_density = 0.0;  // E / L^2
  double entropy = 0.0;         // S_A
  double q = 0.0;
  double q_ea = 0.0;
  int degeneracy_group = 0;
};

struct SkippedFragment {
  int fragment_id = 0;
  std::size_t dimension = 0;
};

struct ScarScanOptions {
  double hopping = 1.0;
  std::size_t dense_cap = kDefaultDenseCap;
  std::size_t state_cap = kDefaultStateCap;
  int rows_in_a = -1;
  unsigned threads = 1;
};

struct ScarScan {
  int L = 0;
  int M = 0;
  std::size_t sector_dimension = 0;
  int fragment_count = 0;
  int largest_fragment_id = -1;
  std::size_t largest_fragment_dimension = 0;
  std::vector<EigenstateRow> rows;  // ordered by lambda, fragment, state
  std::vector<SkippedFragment> skipped;
  int eigensolver_fallbacks = 0;

  bool partial() const noexcept { return !skipped.empty(); }
};

/// Eigenstate diagnostics for every requested lambda. With the
/// largest-fragment scope a too-large fragment raises CapacityError; with
/// all fragments, oversized ones are listed in `skipped`.
ScarScan scar_scan(const Lattice& lattice, int particles, std::span<const double> lambdas,
                   ScanScope scope, const ScarScanOptions& options = {});

}  // namespace qhd
