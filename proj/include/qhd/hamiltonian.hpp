// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qhd/lattice.hpp"
#include "qhd/state_space.hpp"

namespace qhd {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultNonzeroCap = 500'000'000;

/// Constrained hopping plus diagonal NNN interaction over a fixed basis.
///
/// Only the strict upper triangle of the hopping graph is stored (one column
/// index per allowed hop pair, every such entry has value J); the diagonal
/// holds lambda times the number of occupied diagonal pairs.
class SparseHamiltonian {
 public:
  SparseHamiltonian(double hopping, double interaction, std::vector<double> diagonal,
                    std::vector<std::size_t> row_begin, std::vector<std::uint32_t> upper_cols);

  std::size_t dimension() const noexcept { return diagonal_.size(); }
  double hopping() const noexcept { return hopping_; }
  double interaction() const noexcept { return interaction_; }
  const std::vector<double>& diagonal() const noexcept { return diagonal_; }

  /// Stored strict-upper entries (each represents a symmetric pair).
  std::size_t upper_nonzeros() const noexcept { return upper_cols_.size(); }

  std::span<const std::uint32_t> upper_row(std::size_t i) const noexcept {
    return {upper_cols_.data() + row_begin_[i], upper_cols_.data() + row_begin_[i + 1]};
  }

  /// out = H * in. Throws InvalidParameter on a dimension mismatch.
  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  void apply(std::span<const double> in, std::span<double> out) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

  /// Upper bound on the spectral radius (max absolute row sum).
  double gershgorin_bound() const;

  Eigen::MatrixXd to_dense() const;

  /// "dimension <D>\n" then one "i j value" line per stored entry, diagonal
  /// first and upper triangle after, 0-based.
  void write_triplets(std::ostream& os) const;

 private:
  double hopping_;
  double interaction_;
  std::vector<double> diagonal_;
  std::vector<std::size_t> row_begin_;
  std::vector<std::uint32_t> upper_cols_;
};

/// Throws CapacityError when the stored nonzeros would exceed `nonzero_cap`.
SparseHamiltonian build_hamiltonian(const Lattice& lattice, const Basis& basis, double hopping,
                                    double interaction,
                                    std::size_t nonzero_cap = kDefaultNonzeroCap);

}  // namespace qhd
