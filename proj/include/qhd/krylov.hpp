// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file krylov.hpp
 * @brief Short-time Lanczos propagation and the autocorrelation G(t).
 *
 * Each output step of length dt is covered by one or more Krylov substeps.
 * A substep builds an m-dimensional Lanczos basis of (H, psi) with full
 * reorthogonalization, exponentiates the tridiagonal matrix through its
 * eigendecomposition and accepts the largest trial length whose a-posteriori
 * error estimate beta_m |[exp(-i tau T)]_{m,1}| stays within error_tol * tau.
 * With error_tol = 0 every output step is a single fixed-length substep.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qhd/hamiltonian.hpp"
#include "qhd/lattice.hpp"
#include "qhd/state_space.hpp"

namespace qhd {

struct PropagatorSettings {
  double dt = 0.1;           // output step, units of 1/J
  int krylov_dim = 7;        // Lanczos vectors per substep
  double breakdown_tol = 1e-12;
  double error_tol = 1e-8;   // local error per unit time; 0 = fixed steps

  /// Throws InvalidParameter unless dt > 0, 2 <= krylov_dim <= 50,
  /// breakdown_tol > 0 and error_tol >= 0.
  void validate() const;
};

class KrylovPropagator {
 public:
  KrylovPropagator(const SparseHamiltonian& hamiltonian, PropagatorSettings settings);

  /// psi <- exp(-i H dt) psi, renormalized. Returns the norm before
  /// renormalization. Throws NumericError on non-finite values.
  double step(Eigen::VectorXcd& psi);

  /// Substeps used by the most recent call to step().
  int last_substeps() const noexcept { return last_substeps_; }

 private:
  double substep(Eigen::VectorXcd& psi, double max_tau);

  const SparseHamiltonian& hamiltonian_;
  PropagatorSettings settings_;
  double scale_;
  double tau_hint_;
  int last_substeps_ = 0;
  std::vector<Eigen::VectorXcd> lanczos_;
  Eigen::VectorXcd work_;
};

/// One propagation step with a temporary propagator.
Eigen::VectorXcd step(const SparseHamiltonian& hamiltonian, const Eigen::VectorXcd& psi,
                      const PropagatorSettings& settings);

/// <n_i> for every site of the lattice, from amplitudes over `basis`.
std::vector<double> site_occupations(const Basis& basis, std::span<const cplx> amplitudes);

/// G = (1/L^2) sum_i (2 n_i(0) - 1)(2 <n_i> - 1) - (2 eta - 1)^2.
double autocorrelation(std::span<const double> occupations, const Configuration& initial);

struct EvolveOptions {
  double hopping = 1.0;
  double interaction = 0.0;
  double t_max = 100.0;
  std::vector<double> snapshot_times;
  /// Averaging window for G-bar; defaults to [t_max/2, t_max].
  std::optional<double> window_start;
  std::optional<double> window_end;
  bool track_energy = true;
  std::size_t state_cap = kDefaultStateCap;
};

struct OccupationSnapshot {
  double time = 0.0;
  std::vector<double> occupations;
};

struct TimeSeries {
  int L = 0;
  int M = 0;
  double eta = 0.0;
  double g_star = 0.0;
  std::size_t fragment_dimension = 0;
  std::vector<double> times;
  std::vector<double> G;
  std::vector<OccupationSnapshot> snapshots;
  double window_start = 0.0;
  double window_end = 0.0;
  double g_bar = 0.0;
  double max_norm_drift = 0.0;     // max |1 - ||psi|| | before renormalization
  double initial_energy = 0.0;
  double max_energy_drift = 0.0;   // max |<H>(t) - <H>(0)| / spectral scale
  long long total_substeps = 0;
};

/// Evolves a basis configuration within its fragment and records G every dt.
TimeSeries evolve(const Lattice& lattice, const Configuration& initial,
                  const EvolveOptions& options, const PropagatorSettings& settings);

}  // namespace qhd
