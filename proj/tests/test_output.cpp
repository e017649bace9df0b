// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include "doctest.h"
#include "qhd/output.hpp"
#include "qhd/scenarios.hpp"

using namespace qhd;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("doubles print with 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("basis and fragment tables") {
  const Lattice lat(2);
  const Basis b = enumerate_sector(lat, 2);
  CHECK(basis_csv(b) == "index,occupancy\n0,0110\n1,1001\n");
  CHECK(fragments_csv(decompose_sector(lat, b)) == "fragment_id,size\n0,1\n1,1\n");
}

TEST_CASE("scan table and sidecar") {
  const auto scan = scan_fragmentation(Lattice(3), 0, 9);
  const auto csv = scan_csv(scan);
  CHECK(first_line(csv) == "L,M,eta,N,N_max,ratio");
  CHECK(line_count(csv) == 1 + scan.rows.size());
  const auto j = scan_sidecar(scan);
  CHECK(j.at("eta1").get<double>() == doctest::Approx(1.0 / 3));
  CHECK(j.contains("eta_star"));
  CHECK(j.at("skipped_M").empty());
}

TEST_CASE("time series and snapshot tables") {
  const Lattice lat(4);
  const auto c = build_scenario({ScenarioKind::kCrystal, 4, {}});
  EvolveOptions opt;
  opt.t_max = 0.2;
  opt.snapshot_times = {0.2};
  const auto ts = evolve(lat, c, opt, {});
  const auto csv = time_series_csv(ts);
  CHECK(first_line(csv) == "t,G");
  CHECK(line_count(csv) == 4);
  const auto snap = snapshot_csv(lat, c, ts.snapshots.at(0).occupations);
  CHECK(first_line(snap) == "site_index,row,col,n_initial,n_expected");
  CHECK(line_count(snap) == 17);
  std::istringstream rows(snap);
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) {
    // frozen: expectation equals the initial occupation exactly
    const auto last = line.rfind(',');
    const auto prev = line.rfind(',', last - 1);
    CHECK(line.substr(prev + 1, last - prev - 1) == line.substr(last + 1));
  }
}

TEST_CASE("spectrum and classical headers") {
  const Lattice lat(3);
  const double lambdas[] = {0.0};
  const auto scan = scar_scan(lat, 2, lambdas, ScanScope::kAllFragments);
  const auto csv = spectrum_csv(scan);
  CHECK(first_line(csv) == "lambda,fragment_id,state_index,E,E_over_L2,S_A,Q,degeneracy_group");
  CHECK(line_count(csv) == 1 + scan.rows.size());

  WalkSettings s;
  s.trajectories = 3;
  s.t_max = 2.0;
  const auto cl = simulate(lat, Configuration::from_sites(9, std::vector<int>{4}), s);
  const auto ccsv = classical_csv(cl);
  CHECK(first_line(ccsv) == "t,G_cl,stderr");
  CHECK(line_count(ccsv) == 4);
}
