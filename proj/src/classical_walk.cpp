// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhd/classical_walk.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <random>
#include <thread>

#include "qhd/errors.hpp"
#include "qhd/krylov.hpp"

namespace qhd {

void WalkSettings::validate() const {
  if (trajectories < 1) throw InvalidParameter("at least one trajectory is required");
  if (!(t_max > 0.0)) throw InvalidParameter("t_max must be positive");
  if (!(hop_rate > 0.0)) throw InvalidParameter("hop rate must be positive");
  for (std::size_t i = 0; i < record_times.size(); ++i) {
    if (record_times[i] < 0.0 || record_times[i] > t_max) {
      throw InvalidParameter("record times must lie in [0, t_max]");
    }
    if (i > 0 && record_times[i] <= record_times[i - 1]) {
      throw InvalidParameter("record times must be strictly increasing");
    }
  }
}

namespace {

std::vector<double> resolve_times(const WalkSettings& settings) {
  if (!settings.record_times.empty()) return settings.record_times;
  std::vector<double> times;
  for (int k = 0; k <= static_cast<int>(std::floor(settings.t_max)); ++k) times.push_back(k);
  return times;
}

std::mt19937_64 trajectory_engine(std::uint64_t seed, std::size_t trajectory_id) {
  const auto id = static_cast<std::uint64_t>(trajectory_id);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
  return std::mt19937_64(seq);
}

// Calls observe(record_index, configuration) for every record time.
template <typename Observe>
void run_trajectory(const Lattice& lattice, const Configuration& initial, double hop_rate,
                    const std::vector<double>& times, std::mt19937_64& rng, Observe&& observe) {
  Configuration current = initial;
  std::vector<Hop> hops;
  double t = 0.0;
  std::size_t next = 0;
  while (next < times.size()) {
    hops.clear();
    for_each_hop(current, lattice, [&](int from, int to) { hops.push_back({from, to}); });
    if (hops.empty()) {
      for (; next < times.size(); ++next) observe(next, current);
      return;
    }
    const double rate = hop_rate * static_cast<double>(hops.size());
    // 53-bit uniform in (0, 1]
    const double u = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    const double t_next = t - std::log(u) / rate;
    for (; next < times.size() && times[next] < t_next; ++next) observe(next, current);
    if (next == times.size()) return;
    std::uniform_int_distribution<std::size_t> pick(0, hops.size() - 1);
    const Hop& hop = hops[pick(rng)];
    current = current.moved(hop.from, hop.to);
    assert(is_valid(current, lattice));
    t = t_next;
  }
}

}  // namespace

std::vector<Configuration> walk_trajectory(const Lattice& lattice, const Configuration& initial,
                                           const WalkSettings& settings,
                                           std::size_t trajectory_id) {
  settings.validate();
  if (!is_valid(initial, lattice)) throw ConstraintViolation("initial configuration is invalid");
  const auto times = resolve_times(settings);
  auto rng = trajectory_engine(settings.seed, trajectory_id);
  std::vector<Configuration> out(times.size());
  run_trajectory(lattice, initial, settings.hop_rate, times, rng,
                 [&](std::size_t r, const Configuration& c) { out[r] = c; });
  return out;
}

ClassicalSeries simulate(const Lattice& lattice, const Configuration& initial,
                         const WalkSettings& settings) {
  settings.validate();
  if (!is_valid(initial, lattice)) throw ConstraintViolation("initial configuration is invalid");

  const auto times = resolve_times(settings);
  const int sites = lattice.site_count();
  const std::size_t slots = times.size();

  // Integer accumulators make the reduction exact and thus independent of
  // how trajectories are distributed over workers.
  struct Accumulator {
    std::vector<long long> counts;         // slots x sites
    std::vector<long long> overlap;        // sum of sum_i s_i sigma_i
    std::vector<long long> overlap_sq;
  };
  unsigned workers = settings.threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                           : settings.threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, settings.trajectories));
  std::vector<Accumulator> acc(workers);
  for (auto& a : acc) {
    a.counts.assign(slots * sites, 0);
    a.overlap.assign(slots, 0);
    a.overlap_sq.assign(slots, 0);
  }

  std::atomic<std::size_t> next_id{0};
  auto work = [&](unsigned w) {
    Accumulator& a = acc[w];
    for (std::size_t id = next_id++; id < settings.trajectories; id = next_id++) {
      auto rng = trajectory_engine(settings.seed, id);
      run_trajectory(lattice, initial, settings.hop_rate, times, rng,
                     [&](std::size_t r, const Configuration& c) {
                       long long o = 0;
                       for (int s = 0; s < sites; ++s) {
                         const bool occ = c.occupied(s);
                         a.counts[r * sites + s] += occ ? 1 : 0;
                         o += (occ == initial.occupied(s)) ? 1 : -1;
                       }
                       a.overlap[r] += o;
                       a.overlap_sq[r] += o * o;
                     });
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  ClassicalSeries out;
  out.L = lattice.linear_size();
  out.M = initial.particle_count();
  out.eta = static_cast<double>(out.M) / sites;
  out.g_star = (2.0 * out.eta - 1.0) * (2.0 * out.eta - 1.0);
  out.trajectories = settings.trajectories;
  out.times = times;
  const double k = static_cast<double>(settings.trajectories);
  for (std::size_t r = 0; r < slots; ++r) {
    std::vector<double> occ(sites, 0.0);
    long long overlap = 0;
    long long overlap_sq = 0;
    for (const auto& a : acc) {
      for (int s = 0; s < sites; ++s) occ[s] += static_cast<double>(a.counts[r * sites + s]);
      overlap += a.overlap[r];
      overlap_sq += a.overlap_sq[r];
    }
    for (auto& x : occ) x /= k;
    const double mean = static_cast<double>(overlap) / k;
    double se = 0.0;
    if (settings.trajectories > 1) {
      const double var =
          std::max(0.0, (static_cast<double>(overlap_sq) - k * mean * mean) / (k - 1.0));
      se = std::sqrt(var / k) / sites;
    }
    out.G.push_back(autocorrelation(occ, initial));
    out.occupations.push_back(std::move(occ));
    out.standard_error.push_back(se);
  }
  return out;
}

}  // namespace qhd
