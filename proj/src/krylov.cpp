// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhd/krylov.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "qhd/errors.hpp"

namespace qhd {

void PropagatorSettings::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be positive");
  if (krylov_dim < 2 || krylov_dim > 50) {
    throw InvalidParameter("Krylov dimension must lie in [2, 50], got " +
                           std::to_string(krylov_dim));
  }
  if (!(breakdown_tol > 0.0)) throw InvalidParameter("breakdown tolerance must be positive");
  if (!(error_tol >= 0.0)) throw InvalidParameter("error tolerance must be non-negative");
}

KrylovPropagator::KrylovPropagator(const SparseHamiltonian& hamiltonian,
                                   PropagatorSettings settings)
    : hamiltonian_(hamiltonian), settings_(settings) {
  settings_.validate();
  scale_ = std::max(1.0, hamiltonian_.gershgorin_bound());
  tau_hint_ = settings_.dt;
  lanczos_.reserve(settings_.krylov_dim);
}

double KrylovPropagator::substep(Eigen::VectorXcd& psi, double max_tau) {
  const Eigen::Index n = psi.size();
  const int m = static_cast<int>(std::min<Eigen::Index>(settings_.krylov_dim, n));
  const double norm = psi.norm();
  if (!std::isfinite(norm) || norm == 0.0) throw NumericError("state norm is zero or non-finite");

  lanczos_.clear();
  lanczos_.push_back(psi / norm);
  std::vector<double> alpha;
  std::vector<double> beta;
  double residual = 0.0;  // beta_m, drives the error estimate
  bool invariant = false;
  work_.resize(n);
  for (int j = 0; j < m; ++j) {
    const auto& q = lanczos_[j];
    hamiltonian_.apply(std::span<const cplx>(q.data(), static_cast<std::size_t>(n)),
                       std::span<cplx>(work_.data(), static_cast<std::size_t>(n)));
    alpha.push_back(q.dot(work_).real());
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& v : lanczos_) work_ -= v.dot(work_) * v;
    }
    const double b = work_.norm();
    if (!std::isfinite(b) || !std::isfinite(alpha.back())) {
      throw NumericError("non-finite value in Lanczos recursion");
    }
    if (b < settings_.breakdown_tol * scale_) {
      invariant = true;
      break;
    }
    if (j + 1 == m) {
      residual = b;
      break;
    }
    beta.push_back(b);
    lanczos_.push_back(work_ / b);
  }

  const int k = static_cast<int>(alpha.size());
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) tri(i, i) = alpha[i];
  for (int i = 0; i + 1 < k; ++i) tri(i, i + 1) = tri(i + 1, i) = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
  if (eig.info() != Eigen::Success) throw NumericError("tridiagonal eigensolve failed");
  const Eigen::VectorXd& theta = eig.eigenvalues();
  const Eigen::MatrixXd& vecs = eig.eigenvectors();

  auto coefficients = [&](double tau) {
    Eigen::VectorXcd phase(k);
    for (int i = 0; i < k; ++i) phase(i) = std::polar(vecs(0, i), -theta(i) * tau);
    return Eigen::VectorXcd(vecs.cast<cplx>() * phase);
  };

  const bool limited = max_tau <= tau_hint_;
  double tau = std::min(max_tau, tau_hint_);
  if (max_tau - tau < 1e-9 * settings_.dt) tau = max_tau;
  Eigen::VectorXcd c = coefficients(tau);
  bool first_try = true;
  if (!invariant && settings_.error_tol > 0.0) {
    // Below this the computed coefficient is rounding noise and carries no
    // information about the truncation error.
    constexpr double kRoundoff = 64.0 * std::numeric_limits<double>::epsilon();
    while (residual * std::abs(c(k - 1)) > settings_.error_tol * tau &&
           std::abs(c(k - 1)) > kRoundoff) {
      tau *= 0.5;
      first_try = false;
      if (tau < 1e-8 * settings_.dt) throw NumericError("Krylov substep collapsed");
      c = coefficients(tau);
    }
  }
  if (!first_try) {
    tau_hint_ = tau;
  } else if (!limited) {
    tau_hint_ = std::min(settings_.dt, 2.0 * tau);
  }

  psi.setZero();
  for (int i = 0; i < k; ++i) psi += (norm * c(i)) * lanczos_[i];
  return tau;
}

double KrylovPropagator::step(Eigen::VectorXcd& psi) {
  if (psi.size() != static_cast<Eigen::Index>(hamiltonian_.dimension())) {
    throw InvalidParameter("state dimension does not match the Hamiltonian");
  }
  last_substeps_ = 0;
  double remaining = settings_.dt;
  while (remaining > 0.0) {
    const double taken = substep(psi, remaining);
    ++last_substeps_;
    remaining = (taken >= remaining) ? 0.0 : remaining - taken;
  }
  const double norm = psi.norm();
  if (!std::isfinite(norm) || norm == 0.0) throw NumericError("propagated state is non-finite");
  psi /= norm;
  return norm;
}

Eigen::VectorXcd step(const SparseHamiltonian& hamiltonian, const Eigen::VectorXcd& psi,
                      const PropagatorSettings& settings) {
  KrylovPropagator propagator(hamiltonian, settings);
  Eigen::VectorXcd out = psi;
  propagator.step(out);
  return out;
}

std::vector<double> site_occupations(const Basis& basis, std::span<const cplx> amplitudes) {
  if (amplitudes.size() != basis.size()) {
    throw InvalidParameter("amplitude count does not match the basis dimension");
  }
  std::vector<double> occ(static_cast<std::size_t>(basis.site_count()), 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double p = std::norm(amplitudes[i]);
    if (p == 0.0) continue;
    const auto words = basis.state_words(i);
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::uint64_t bits = words[w];
      while (bits) {
        occ[w * 64 + std::countr_zero(bits)] += p;
        bits &= bits - 1;
      }
    }
  }
  return occ;
}

double autocorrelation(std::span<const double> occupations, const Configuration& initial) {
  const int sites = initial.site_count();
  if (static_cast<int>(occupations.size()) != sites) {
    throw InvalidParameter("occupation vector does not match the lattice");
  }
  const double eta = static_cast<double>(initial.particle_count()) / sites;
  double sum = 0.0;
  for (int i = 0; i < sites; ++i) {
    const double sign = initial.occupied(i) ? 1.0 : -1.0;
    sum += sign * (2.0 * occupations[i] - 1.0);
  }
  const double g_star = (2.0 * eta - 1.0) * (2.0 * eta - 1.0);
  return sum / sites - g_star;
}

TimeSeries evolve(const Lattice& lattice, const Configuration& initial,
                  const EvolveOptions& options, const PropagatorSettings& settings) {
  settings.validate();
  if (!(options.t_max >= 0.0)) throw InvalidParameter("t_max must be non-negative");

  const Basis basis = fragment_of(lattice, initial, options.state_cap);
  const SparseHamiltonian h =
      build_hamiltonian(lattice, basis, options.hopping, options.interaction);
  const std::size_t dim = basis.size();
  const int sites = lattice.site_count();

  TimeSeries ts;
  ts.L = lattice.linear_size();
  ts.M = initial.particle_count();
  ts.eta = static_cast<double>(ts.M) / sites;
  ts.g_star = (2.0 * ts.eta - 1.0) * (2.0 * ts.eta - 1.0);
  ts.fragment_dimension = dim;

  const auto steps = static_cast<long long>(std::llround(options.t_max / settings.dt));
  const double t_end = static_cast<double>(steps) * settings.dt;
  ts.window_start = options.window_start.value_or(0.5 * t_end);
  ts.window_end = options.window_end.value_or(t_end);
  if (ts.window_end < ts.window_start) throw InvalidParameter("averaging window is empty");

  std::vector<long long> snapshot_steps;
  for (double t : options.snapshot_times) {
    const auto s = static_cast<long long>(std::llround(t / settings.dt));
    if (t < 0.0 || s > steps) {
      throw InvalidParameter("snapshot time " + std::to_string(t) + " outside [0, t_max]");
    }
    snapshot_steps.push_back(s);
  }

  // (1/L^2) sum_i sigma_i(0) sigma_i(c) = 1 - 2 d_H(c, c0) / L^2
  std::vector<double> overlap(dim);
  const auto init_words = initial.words();
  for (std::size_t i = 0; i < dim; ++i) {
    const auto w = basis.state_words(i);
    int distance = 0;
    for (std::size_t k = 0; k < w.size(); ++k) distance += std::popcount(w[k] ^ init_words[k]);
    overlap[i] = 1.0 - 2.0 * distance / sites;
  }

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  psi(static_cast<Eigen::Index>(*basis.index_of(initial))) = 1.0;

  const double scale = std::max(1.0, h.gershgorin_bound());
  auto energy = [&]() { return psi.dot(h.apply(psi)).real(); };
  if (options.track_energy) ts.initial_energy = energy();

  auto record = [&](long long n) {
    const double t = static_cast<double>(n) * settings.dt;
    double g = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double p = std::norm(psi(static_cast<Eigen::Index>(i)));
      g += p * overlap[i];
      total += p;
    }
    ts.times.push_back(t);
    ts.G.push_back(g / total - ts.g_star);
    for (auto s : snapshot_steps) {
      if (s == n) {
        ts.snapshots.push_back(
            {t, site_occupations(basis, std::span<const cplx>(psi.data(), dim))});
      }
    }
  };

  KrylovPropagator propagator(h, settings);
  record(0);
  for (long long n = 1; n <= steps; ++n) {
    const double norm = propagator.step(psi);
    ts.total_substeps += propagator.last_substeps();
    ts.max_norm_drift = std::max(ts.max_norm_drift, std::abs(1.0 - norm));
    if (options.track_energy) {
      ts.max_energy_drift =
          std::max(ts.max_energy_drift, std::abs(energy() - ts.initial_energy) / scale);
    }
    record(n);
  }

  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < ts.times.size(); ++i) {
    if (ts.times[i] >= ts.window_start - 1e-9 && ts.times[i] <= ts.window_end + 1e-9) {
      sum += ts.G[i];
      ++count;
    }
  }
  ts.g_bar = count ? sum / static_cast<double>(count) : 0.0;
  return ts;
}

}  // namespace qhd
