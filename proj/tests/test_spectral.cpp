// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qhd/errors.hpp"
#include "qhd/hamiltonian.hpp"
#include "qhd/spectral.hpp"
#include "qhd/state_space.hpp"

using namespace qhd;

namespace {

std::vector<oracle::Mask> masks(const Basis& b) {
  std::vector<oracle::Mask> out;
  for (std::size_t i = 0; i < b.size(); ++i) out.push_back(b.state_words(i)[0]);
  return out;
}

std::vector<cplx> random_state(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  double norm = 0.0;
  for (auto& x : v) {
    x = {g(rng), g(rng)};
    norm += std::norm(x);
  }
  for (auto& x : v) x /= std::sqrt(norm);
  return v;
}

double normalized_q(double q_ea, double eta) {
  const double floor = std::pow(2 * eta - 1, 4);
  return (q_ea - floor) / (1 - floor);
}

}  // namespace

TEST_CASE("diagonalize small cases") {
  const Lattice l2(2);
  const auto one = diagonalize(build_hamiltonian(
      l2, fragment_of(l2, Configuration::from_sites(4, std::vector<int>{0, 3})), 1.0, 0.25));
  REQUIRE(one.values.size() == 1);
  CHECK(one.values(0) == doctest::Approx(0.25));

  const auto cycle = diagonalize(build_hamiltonian(l2, enumerate_sector(l2, 1), 1.0, 0.0));
  REQUIRE(cycle.values.size() == 4);
  const double expected[] = {-2, 0, 0, 2};
  for (int k = 0; k < 4; ++k) CHECK(std::abs(cycle.values(k) - expected[k]) < 1e-12);
  CHECK(degeneracy_groups(cycle.values) == std::vector<int>{0, 1, 1, 2});
}

TEST_CASE("spectrum residuals and orthonormality") {
  const Lattice lat(5);
  const Basis sector = enumerate_sector(lat, 10);
  const auto d = decompose_sector(lat, sector);
  const auto h = build_hamiltonian(lat, fragment_basis(sector, d, d.largest_id), 1.0, 0.3);
  REQUIRE(h.dimension() == 312);
  const auto spec = diagonalize(h);
  const Eigen::MatrixXd dense = h.to_dense();
  const auto n = spec.values.size();
  CHECK(std::is_sorted(spec.values.begin(), spec.values.end()));
  const Eigen::MatrixXd overlap = spec.vectors.transpose() * spec.vectors;
  CHECK((overlap - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double r = (dense * spec.vectors.col(k) - spec.values(k) * spec.vectors.col(k)).norm();
    CHECK(r < 1e-8 * std::max(1.0, std::abs(spec.values(k))));
  }
}

TEST_CASE("dense cap") {
  const Lattice lat(4);
  CHECK_THROWS_AS(diagonalize(build_hamiltonian(lat, enumerate_sector(lat, 3), 1.0, 0.0), 100),
                  CapacityError);
}

TEST_CASE("entropy of product and two-term states") {
  const Lattice lat(4);
  const Basis sector = enumerate_sector(lat, 2);
  const EigenstateAnalyzer an(lat, sector);
  CHECK(an.rows_in_a() == 2);
  std::vector<double> v(sector.size(), 0.0);
  v[17] = 1.0;
  CHECK(an.entanglement_entropy(v) == 0.0);

  // one particle in each half, moved in both halves
  const auto c1 = Configuration::from_sites(16, std::vector<int>{0, 10});
  const auto c2 = Configuration::from_sites(16, std::vector<int>{2, 15});
  std::fill(v.begin(), v.end(), 0.0);
  v[*sector.index_of(c1)] = std::sqrt(0.5);
  v[*sector.index_of(c2)] = std::sqrt(0.5);
  CHECK(std::abs(an.entanglement_entropy(v) - std::log(2.0)) < 1e-14);
}

TEST_CASE("entropy matches the reduced density matrix on random L=3 states") {
  std::mt19937_64 rng(2026);
  const Lattice lat(3);
  int checked = 0;
  for (int M = 1; M <= 5; ++M) {
    const Basis sector = enumerate_sector(lat, M);
    const EigenstateAnalyzer an(lat, sector);
    for (int trial = 0; trial < 20; ++trial, ++checked) {
      const auto psi = random_state(sector.size(), rng);
      const double expected = oracle::rdm_entropy(masks(sector), psi, 3);
      CHECK(std::abs(an.entanglement_entropy(psi) - expected) < 1e-10);
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("entropy bounds, phase and ordering invariance") {
  std::mt19937_64 rng(9);
  const Lattice lat(4);
  const Basis sector = enumerate_sector(lat, 4);
  const EigenstateAnalyzer an(lat, sector, 2);
  const auto psi = random_state(sector.size(), rng);
  const double s = an.entanglement_entropy(psi);
  CHECK(s >= 0.0);
  CHECK(s <= std::log(static_cast<double>(
                 std::min(an.distinct_a_patterns(), an.distinct_b_patterns()))) + 1e-12);

  auto rotated = psi;
  for (auto& x : rotated) x *= std::polar(1.0, 0.7);
  CHECK(std::abs(an.entanglement_entropy(rotated) - s) < 1e-12);

  // same state written over a reversed basis order: the oracle sees the
  // permutation, the analyzer the canonical basis
  auto states = masks(sector);
  std::vector<oracle::Mask> rev(states.rbegin(), states.rend());
  std::vector<cplx> rev_psi(psi.rbegin(), psi.rend());
  CHECK(std::abs(oracle::rdm_entropy(rev, rev_psi, 8) - s) < 1e-10);
}

TEST_CASE("ea order on basis states is one") {
  for (int L = 2; L <= 4; ++L) {
    const Lattice lat(L);
    for (int M = 1; M < L * L; ++M) {
      const Basis sector = enumerate_sector(lat, M);
      if (sector.empty()) continue;
      const EigenstateAnalyzer an(lat, sector);
      for (std::size_t i = 0; i < sector.size(); i += 1 + sector.size() / 7) {
        std::vector<double> v(sector.size(), 0.0);
        v[i] = 1.0;
        const auto q = an.ea_order(v);
        CHECK(std::abs(q.q_ea - 1.0) < 1e-12);
        CHECK(std::abs(q.q - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("ea order on uniform sector states matches direct summation") {
  const Lattice l2(2);
  const Basis s22 = enumerate_sector(l2, 2);
  std::vector<double> half(2, std::sqrt(0.5));
  CHECK(std::abs(ea_order(l2, s22, half).q_ea - 1.0) < 1e-12);

  for (int L = 2; L <= 4; ++L) {
    const Lattice lat(L);
    for (int M = 1; M < L * L; ++M) {
      const Basis sector = enumerate_sector(lat, M);
      if (sector.empty()) continue;
      const double amp = 1.0 / std::sqrt(static_cast<double>(sector.size()));
      std::vector<double> v(sector.size(), amp);
      std::vector<double> p(sector.size(), amp * amp);
      const double expected = oracle::q_ea(L, masks(sector), p);
      const auto got = ea_order(lat, sector, v);
      CHECK(std::abs(got.q_ea - expected) < 1e-10);
      CHECK(std::abs(got.q - normalized_q(expected, static_cast<double>(M) / (L * L))) < 1e-10);
    }
  }
  const Lattice l3(3);
  const Basis s32 = enumerate_sector(l3, 2);
  std::vector<double> flat(s32.size(), 1.0 / std::sqrt(24.0));
  CHECK(ea_order(l3, s32, flat).q < 0.2);
}

TEST_CASE("ea order is undefined for empty and full lattices") {
  const Lattice lat(2);
  std::vector<double> one{1.0};
  CHECK_THROWS_AS(ea_order(lat, enumerate_sector(lat, 0), one), DomainError);
}

TEST_CASE("degeneracy groups") {
  Eigen::VectorXd v(6);
  v << -1.0, -1.0 + 1e-12, 0.0, 0.5, 0.5 + 5e-10, 2.0;
  CHECK(degeneracy_groups(v) == std::vector<int>{0, 0, 1, 2, 2, 3});
}

TEST_CASE("scar scan scopes agree and frozen fragments are product states") {
  const Lattice lat(4);
  const double lambdas[] = {0.0, 0.4};
  const auto all = scar_scan(lat, 7, lambdas, ScanScope::kAllFragments);
  const auto largest = scar_scan(lat, 7, lambdas, ScanScope::kLargestFragment);
  CHECK_FALSE(all.partial());
  CHECK(all.sector_dimension == enumerate_sector(lat, 7).size());
  CHECK(all.rows.size() == 2 * all.sector_dimension);
  CHECK(largest.rows.size() == 2 * largest.largest_fragment_dimension);

  std::vector<EigenstateRow> filtered;
  int frozen_rows = 0;
  for (const auto& r : all.rows) {
    if (r.fragment_id == all.largest_fragment_id) filtered.push_back(r);
    if (r.fragment_dimension == 1) {
      ++frozen_rows;
      CHECK(r.entropy == 0.0);
      CHECK(std::abs(r.q - 1.0) < 1e-12);
    }
    CHECK(r.entropy >= 0.0);
    CHECK(r.q <= 1.0 + 1e-10);
    CHECK(r.energy_density == doctest::Approx(r.energy / 16.0));
  }
  CHECK(frozen_rows > 0);
  REQUIRE(filtered.size() == largest.rows.size());
  for (std::size_t k = 0; k < filtered.size(); ++k) {
    CHECK(filtered[k].lambda == largest.rows[k].lambda);
    CHECK(filtered[k].state_index == largest.rows[k].state_index);
    CHECK(std::abs(filtered[k].energy - largest.rows[k].energy) < 1e-12);
    CHECK(filtered[k].degeneracy_group == largest.rows[k].degeneracy_group);
  }
}

TEST_CASE("scar scan is independent of the thread count") {
  const Lattice lat(4);
  const double lambdas[] = {0.1};
  ScarScanOptions one, many;
  many.threads = 4;
  const auto a = scar_scan(lat, 6, lambdas, ScanScope::kAllFragments, one);
  const auto b = scar_scan(lat, 6, lambdas, ScanScope::kAllFragments, many);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].entropy == b.rows[k].entropy);
    CHECK(a.rows[k].q == b.rows[k].q);
  }
}

TEST_CASE("scar scan capacity handling") {
  const Lattice lat(5);
  const double lambdas[] = {0.0};
  ScarScanOptions opt;
  opt.dense_cap = 10;
  CHECK_THROWS_AS(scar_scan(lat, 6, lambdas, ScanScope::kLargestFragment, opt), CapacityError);
  const auto partial = scar_scan(lat, 6, lambdas, ScanScope::kAllFragments, opt);
  CHECK(partial.partial());
  for (const auto& s : partial.skipped) CHECK(s.dimension > 10);
  CHECK_THROWS_AS(scar_scan(Lattice(2), 3, lambdas, ScanScope::kAllFragments), InvalidParameter);
}
