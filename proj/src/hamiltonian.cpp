// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhd/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "qhd/errors.hpp"

namespace qhd {

SparseHamiltonian::SparseHamiltonian(double hopping, double interaction,
                                     std::vector<double> diagonal,
                                     std::vector<std::size_t> row_begin,
                                     std::vector<std::uint32_t> upper_cols)
    : hopping_(hopping),
      interaction_(interaction),
      diagonal_(std::move(diagonal)),
      row_begin_(std::move(row_begin)),
      upper_cols_(std::move(upper_cols)) {
  if (row_begin_.size() != diagonal_.size() + 1 || row_begin_.back() != upper_cols_.size()) {
    throw InvalidParameter("inconsistent sparse Hamiltonian layout");
  }
}

namespace {

template <typename T>
void symmetric_apply(const std::vector<double>& diagonal, const std::vector<std::size_t>& row_begin,
                     const std::vector<std::uint32_t>& cols, double hopping,
                     std::span<const T> in, std::span<T> out) {
  const std::size_t n = diagonal.size();
  if (in.size() != n || out.size() != n) {
    throw InvalidParameter("vector dimension " + std::to_string(in.size()) +
                           " does not match Hamiltonian dimension " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = diagonal[i] * in[i];
  for (std::size_t i = 0; i < n; ++i) {
    T acc{};
    const T xi = hopping * in[i];
    for (std::size_t k = row_begin[i]; k < row_begin[i + 1]; ++k) {
      const std::uint32_t j = cols[k];
      acc += in[j];
      out[j] += xi;
    }
    out[i] += hopping * acc;
  }
}

}  // namespace

void SparseHamiltonian::apply(std::span<const cplx> in, std::span<cplx> out) const {
  symmetric_apply<cplx>(diagonal_, row_begin_, upper_cols_, hopping_, in, out);
}

void SparseHamiltonian::apply(std::span<const double> in, std::span<double> out) const {
  symmetric_apply<double>(diagonal_, row_begin_, upper_cols_, hopping_, in, out);
}

Eigen::VectorXcd SparseHamiltonian::apply(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out(v.size());
  apply(std::span<const cplx>(v.data(), static_cast<std::size_t>(v.size())),
        std::span<cplx>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

double SparseHamiltonian::gershgorin_bound() const {
  const std::size_t n = dimension();
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    degree[i] += row_begin_[i + 1] - row_begin_[i];
    for (auto j : upper_row(i)) ++degree[j];
  }
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    bound = std::max(bound, std::abs(diagonal_[i]) +
                                std::abs(hopping_) * static_cast<double>(degree[i]));
  }
  return bound;
}

Eigen::MatrixXd SparseHamiltonian::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dense(i, i) = diagonal_[i];
    for (auto j : upper_row(i)) {
      dense(i, j) = hopping_;
      dense(j, i) = hopping_;
    }
  }
  return dense;
}

void SparseHamiltonian::write_triplets(std::ostream& os) const {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  os << "dimension " << dimension() << '\n';
  for (std::size_t i = 0; i < dimension(); ++i) os << i << ' ' << i << ' ' << diagonal_[i] << '\n';
  for (std::size_t i = 0; i < dimension(); ++i) {
    for (auto j : upper_row(i)) os << i << ' ' << j << ' ' << hopping_ << '\n';
  }
  os.precision(old_precision);
}

SparseHamiltonian build_hamiltonian(const Lattice& lattice, const Basis& basis, double hopping,
                                    double interaction, std::size_t nonzero_cap) {
  const std::size_t n = basis.size();
  if (n == 0) throw InvalidParameter("cannot build a Hamiltonian on an empty basis");
  if (basis.site_count() != lattice.site_count()) {
    throw InvalidParameter("basis and lattice sizes differ");
  }
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw CapacityError("basis dimension exceeds 32-bit column indices", static_cast<double>(n));
  }

  std::vector<double> diagonal(n);
  std::vector<std::size_t> row_begin(n + 1, 0);
  std::vector<std::uint32_t> cols;
  std::vector<std::uint32_t> row_cols;
  for (std::size_t i = 0; i < n; ++i) {
    const Configuration c = basis[i];
    diagonal[i] = interaction * occupied_nnn_pairs(c, lattice);
    row_cols.clear();
    for_each_hop(c, lattice, [&](int from, int to) {
      const auto j = basis.index_of(c.moved(from, to));
      if (!j) {
        throw InvalidParameter("basis is not closed under allowed hops (not a union of fragments)");
      }
      if (*j > i) row_cols.push_back(static_cast<std::uint32_t>(*j));
    });
    std::sort(row_cols.begin(), row_cols.end());
    cols.insert(cols.end(), row_cols.begin(), row_cols.end());
    if (cols.size() + n > nonzero_cap) {
      const double estimate =
          static_cast<double>(cols.size()) * static_cast<double>(n) / static_cast<double>(i + 1);
      throw CapacityError("Hamiltonian nonzeros exceed the cap of " + std::to_string(nonzero_cap),
                          estimate);
    }
    row_begin[i + 1] = cols.size();
  }
  return SparseHamiltonian(hopping, interaction, std::move(diagonal), std::move(row_begin),
                           std::move(cols));
}

}  // namespace qhd
