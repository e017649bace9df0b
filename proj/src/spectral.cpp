// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhd/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "qhd/errors.hpp"

namespace qhd {

namespace {

// Randomized consistency check of a full eigendecomposition, O(n^2): for a
// fixed pseudo-random x, V^T V x = x and H V y = V (Lambda y) with y = V^T x.
bool decomposition_consistent(const SparseHamiltonian& h, const Spectrum& s) {
  const auto n = static_cast<Eigen::Index>(h.dimension());
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd x(n);
  for (auto& v : x) v = u(rng);
  const Eigen::VectorXd y = s.vectors.transpose() * x;
  const Eigen::VectorXd vy = s.vectors * y;
  const double scale = std::max(1.0, h.gershgorin_bound());
  const double tol = 1e-8 * x.norm();
  if (!((vy - x).norm() <= tol)) return false;
  Eigen::VectorXd hv(n);
  h.apply(std::span<const double>(vy.data(), static_cast<std::size_t>(n)),
          std::span<double>(hv.data(), static_cast<std::size_t>(n)));
  const Eigen::VectorXd lv = s.vectors * s.values.cwiseProduct(y).eval();
  return (hv - lv).norm() <= tol * scale;
}

}  // namespace

Spectrum diagonalize(const SparseHamiltonian& hamiltonian, std::size_t dense_cap) {
  const std::size_t n = hamiltonian.dimension();
  if (n > dense_cap) {
    throw CapacityError("dimension " + std::to_string(n) + " exceeds the dense cap of " +
                            std::to_string(dense_cap),
                        static_cast<double>(n));
  }
  Spectrum s;
  const auto dim = static_cast<lapack_int>(n);
  s.values.resize(dim);
  s.vectors.resize(dim, dim);
  {
    Eigen::MatrixXd dense = hamiltonian.to_dense();
    std::vector<lapack_int> support(2 * n);
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', dim, dense.data(), dim, 0.0, 0.0, 0, 0,
                       0.0, &found, s.values.data(), s.vectors.data(), dim, support.data());
    if (info != 0 || found != dim) {
      throw NumericError("dense eigensolver failed (info " + std::to_string(info) + ")");
    }
  }
  if (decomposition_consistent(hamiltonian, s)) return s;

  // Some BLAS builds return wrong products on some CPUs; redo it without BLAS.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hamiltonian.to_dense());
  if (eig.info() != Eigen::Success) throw NumericError("fallback eigensolver failed");
  s.values = eig.eigenvalues();
  s.vectors = eig.eigenvectors();
  s.fallback = true;
  if (!decomposition_consistent(hamiltonian, s)) {
    throw NumericError("eigendecomposition failed its consistency check");
  }
  return s;
}

std::vector<int> degeneracy_groups(const Eigen::VectorXd& values, double tolerance) {
  std::vector<int> groups(static_cast<std::size_t>(values.size()), 0);
  for (Eigen::Index k = 1; k < values.size(); ++k) {
    groups[k] = groups[k - 1] + (values(k) - values(k - 1) > tolerance ? 1 : 0);
  }
  return groups;
}

EigenstateAnalyzer::EigenstateAnalyzer(const Lattice& lattice, const Basis& basis, int rows_in_a)
    : sites_(lattice.site_count()),
      particles_(basis.particle_count()),
      rows_in_a_(rows_in_a < 0 ? lattice.linear_size() / 2 : rows_in_a),
      dimension_(basis.size()) {
  if (basis.site_count() != sites_) throw InvalidParameter("basis and lattice sizes differ");
  if (rows_in_a_ > lattice.linear_size()) throw InvalidParameter("bipartition exceeds lattice");

  // A = sites below rows_in_a * L, i.e. the low bits of the configuration.
  const int a_sites = rows_in_a_ * lattice.linear_size();
  Configuration a_mask(sites_);
  for (int s = 0; s < a_sites; ++s) a_mask.set(s);

  std::unordered_map<Configuration, int, ConfigurationHash> a_index;
  std::unordered_map<Configuration, int, ConfigurationHash> b_index;
  std::unordered_map<int, int> block_of_count;
  occupied_.reserve(dimension_ * static_cast<std::size_t>(std::max(particles_, 0)));

  for (std::size_t i = 0; i < dimension_; ++i) {
    const Configuration c = basis[i];
    const auto occ = c.occupied_sites();
    occupied_.insert(occupied_.end(), occ.begin(), occ.end());

    Configuration a_part(sites_);
    Configuration b_part(sites_);
    int a_count = 0;
    for (int s : occ) {
      if (s < a_sites) {
        a_part.set(s);
        ++a_count;
      } else {
        b_part.set(s);
      }
    }
    auto [bit, inserted] = block_of_count.try_emplace(a_count, static_cast<int>(blocks_.size()));
    if (inserted) blocks_.emplace_back();
    Block& block = blocks_[bit->second];
    auto [ait, a_new] = a_index.try_emplace(a_part, block.a_count);
    if (a_new) ++block.a_count;
    auto [bjt, b_new] = b_index.try_emplace(b_part, block.b_count);
    if (b_new) ++block.b_count;
    block.entries.push_back({i, ait->second, bjt->second});
  }
  a_patterns_ = a_index.size();
  b_patterns_ = b_index.size();

  // Group entries by the larger side so the Gram matrix of the smaller side
  // is accumulated column by column.
  for (auto& block : blocks_) {
    const bool gram_on_a = block.a_count <= block.b_count;
    std::stable_sort(block.entries.begin(), block.entries.end(),
                     [gram_on_a](const Entry& x, const Entry& y) {
                       return gram_on_a ? x.b < y.b : x.a < y.a;
                     });
  }
}

template <typename T>
double EigenstateAnalyzer::entropy_impl(std::span<const T> amplitudes) const {
  if (amplitudes.size() != dimension_) {
    throw InvalidParameter("amplitude count does not match the basis dimension");
  }
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  constexpr double kDrop = 1e-14;
  double entropy = 0.0;
  auto add = [&](double weight) {
    if (weight >= kDrop) entropy -= weight * std::log(weight);
  };

  for (const auto& block : blocks_) {
    if (block.a_count == 1 || block.b_count == 1) {
      // rank one: a single Schmidt weight
      double weight = 0.0;
      for (const auto& e : block.entries) weight += std::norm(amplitudes[e.state]);
      add(weight);
      continue;
    }
    const bool gram_on_a = block.a_count <= block.b_count;
    const int side = gram_on_a ? block.a_count : block.b_count;
    Matrix gram = Matrix::Zero(side, side);
    const auto& entries = block.entries;
    std::size_t begin = 0;
    while (begin < entries.size()) {
      const int key = gram_on_a ? entries[begin].b : entries[begin].a;
      std::size_t end = begin;
      while (end < entries.size() && (gram_on_a ? entries[end].b : entries[end].a) == key) ++end;
      for (std::size_t u = begin; u < end; ++u) {
        const int ru = gram_on_a ? entries[u].a : entries[u].b;
        const T xu = amplitudes[entries[u].state];
        for (std::size_t v = begin; v < end; ++v) {
          const int rv = gram_on_a ? entries[v].a : entries[v].b;
          if constexpr (std::is_same_v<T, double>) {
            gram(ru, rv) += xu * amplitudes[entries[v].state];
          } else {
            gram(ru, rv) += xu * std::conj(amplitudes[entries[v].state]);
          }
        }
      }
      begin = end;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericError("reduced density matrix eigensolve failed");
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) add(eig.eigenvalues()(k));
  }
  return entropy;
}

double EigenstateAnalyzer::entanglement_entropy(std::span<const double> amplitudes) const {
  return entropy_impl(amplitudes);
}

double EigenstateAnalyzer::entanglement_entropy(
    std::span<const std::complex<double>> amplitudes) const {
  return entropy_impl(amplitudes);
}

EaOrder EigenstateAnalyzer::ea_from_probabilities(std::span<const double> probabilities) const {
  if (particles_ <= 0 || particles_ >= sites_) {
    throw DomainError("normalized EA order parameter is undefined at eta = 0 or 1");
  }
  const int n = sites_;
  // joint[u * n + v] = <n_u n_v>, accumulated over occupied pairs (u <= v)
  std::vector<double> joint(static_cast<std::size_t>(n) * n, 0.0);
  const auto m = static_cast<std::size_t>(particles_);
  for (std::size_t i = 0; i < dimension_; ++i) {
    const double p = probabilities[i];
    if (p == 0.0) continue;
    const int* occ = occupied_.data() + i * m;
    for (std::size_t u = 0; u < m; ++u) {
      double* row = joint.data() + static_cast<std::size_t>(occ[u]) * n;
      for (std::size_t v = u; v < m; ++v) row[occ[v]] += p;
    }
  }
  double sum = 0.0;
  for (int u = 0; u < n; ++u) {
    const double mu = joint[static_cast<std::size_t>(u) * n + u];
    sum += 1.0;  // C_uu = 1
    for (int v = u + 1; v < n; ++v) {
      const double mv = joint[static_cast<std::size_t>(v) * n + v];
      const double c = 4.0 * joint[static_cast<std::size_t>(u) * n + v] - 2.0 * mu - 2.0 * mv + 1.0;
      sum += 2.0 * c * c;
    }
  }
  EaOrder out;
  out.q_ea = sum / (static_cast<double>(n) * n);
  const double eta = static_cast<double>(particles_) / n;
  const double base = std::pow(2.0 * eta - 1.0, 4);
  out.q = (out.q_ea - base) / (1.0 - base);
  return out;
}

EaOrder EigenstateAnalyzer::ea_order(std::span<const double> amplitudes) const {
  if (amplitudes.size() != dimension_) {
    throw InvalidParameter("amplitude count does not match the basis dimension");
  }
  std::vector<double> p(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) p[i] = amplitudes[i] * amplitudes[i];
  return ea_from_probabilities(p);
}

EaOrder EigenstateAnalyzer::ea_order(std::span<const std::complex<double>> amplitudes) const {
  if (amplitudes.size() != dimension_) {
    throw InvalidParameter("amplitude count does not match the basis dimension");
  }
  std::vector<double> p(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) p[i] = std::norm(amplitudes[i]);
  return ea_from_probabilities(p);
}

double entanglement_entropy(const Lattice& lattice, const Basis& basis,
                            std::span<const double> amplitudes, int rows_in_a) {
  return EigenstateAnalyzer(lattice, basis, rows_in_a).entanglement_entropy(amplitudes);
}

double entanglement_entropy(const Lattice& lattice, const Basis& basis,
                            std::span<const std::complex<double>> amplitudes, int rows_in_a) {
  return EigenstateAnalyzer(lattice, basis, rows_in_a).entanglement_entropy(amplitudes);
}

EaOrder ea_order(const Lattice& lattice, const Basis& basis, std::span<const double> amplitudes) {
  return EigenstateAnalyzer(lattice, basis).ea_order(amplitudes);
}

EaOrder ea_order(const Lattice& lattice, const Basis& basis,
                 std::span<const std::complex<double>> amplitudes) {
  return EigenstateAnalyzer(lattice, basis).ea_order(amplitudes);
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

ScarScan scar_scan(const Lattice& lattice, int particles, std::span<const double> lambdas,
                   ScanScope scope, const ScarScanOptions& options) {
  const Basis sector = enumerate_sector(lattice, particles, options.state_cap);
  if (sector.empty()) {
    throw InvalidParameter("no valid configuration with M=" + std::to_string(particles));
  }
  const FragmentDecomposition decomposition = decompose_sector(lattice, sector);

  ScarScan scan;
  scan.L = lattice.linear_size();
  scan.M = particles;
  scan.sector_dimension = sector.size();
  scan.fragment_count = decomposition.fragment_count();
  scan.largest_fragment_id = decomposition.largest_id;
  scan.largest_fragment_dimension = decomposition.largest_size;

  std::vector<int> targets;
  if (scope == ScanScope::kLargestFragment) {
    if (decomposition.largest_size > options.dense_cap) {
      std::ostringstream os;
      os << "largest fragment of L=" << scan.L << ", M=" << particles << " has dimension "
         << decomposition.largest_size << ", exceeding the dense cap of " << options.dense_cap;
      throw CapacityError(os.str(), static_cast<double>(decomposition.largest_size));
    }
    targets.push_back(decomposition.largest_id);
  } else {
    for (int id = 0; id < decomposition.fragment_count(); ++id) {
      if (decomposition.fragment_sizes[id] > options.dense_cap) {
        scan.skipped.push_back({id, decomposition.fragment_sizes[id]});
      } else {
        targets.push_back(id);
      }
    }
  }

  // split the sector into per-fragment bases in one pass
  std::vector<std::vector<std::uint64_t>> words(decomposition.fragment_count());
  std::vector<char> wanted(decomposition.fragment_count(), 0);
  for (int id : targets) wanted[id] = 1;
  for (std::size_t i = 0; i < sector.size(); ++i) {
    const int id = decomposition.fragment_id[i];
    if (!wanted[id]) continue;
    auto w = sector.state_words(i);
    words[id].insert(words[id].end(), w.begin(), w.end());
  }
  std::vector<Basis> bases;
  std::vector<EigenstateAnalyzer> analyzers;
  bases.reserve(targets.size());
  analyzers.reserve(targets.size());
  for (int id : targets) {
    bases.push_back(Basis::from_flat(sector.site_count(), particles, std::move(words[id])));
    analyzers.emplace_back(lattice, bases.back(), options.rows_in_a);
  }

  const double sites = lattice.site_count();
  for (double lambda : lambdas) {
    for (std::size_t f = 0; f < targets.size(); ++f) {
      const Basis& basis = bases[f];
      const SparseHamiltonian h = build_hamiltonian(lattice, basis, options.hopping, lambda);
      const Spectrum spectrum = diagonalize(h, options.dense_cap);
      scan.eigensolver_fallbacks += spectrum.fallback ? 1 : 0;
      const auto groups = degeneracy_groups(spectrum.values);
      const std::size_t n = basis.size();
      const std::size_t first = scan.rows.size();
      scan.rows.resize(first + n);
      parallel_for(n, options.threads, [&](std::size_t k) {
        const std::span<const double> v(spectrum.vectors.col(static_cast<Eigen::Index>(k)).data(), n);
        EigenstateRow& row = scan.rows[first + k];
        row.lambda = lambda;
        row.fragment_id = targets[f];
        row.fragment_dimension = n;
        row.state_index = k;
        row.energy = spectrum.values(static_cast<Eigen::Index>(k));
        row.energy_density = row.energy / sites;
        row.entropy = analyzers[f].entanglement_entropy(v);
        const EaOrder ea = analyzers[f].ea_order(v);
        row.q = ea.q;
        row.q_ea = ea.q_ea;
        row.degeneracy_group = groups[k];
      });
    }
  }
  return scan;
}

}  // namespace qhd
