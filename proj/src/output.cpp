// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhd/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qhd/errors.hpp"

namespace qhd {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string basis_csv(const Basis& basis) {
  std::ostringstream os;
  os << "index,occupancy\n";
  for (std::size_t i = 0; i < basis.size(); ++i) os << i << ',' << basis[i].to_bits() << '\n';
  return os.str();
}

std::string fragments_csv(const FragmentDecomposition& d) {
  std::ostringstream os;
  os << "fragment_id,size\n";
  for (int id = 0; id < d.fragment_count(); ++id) os << id << ',' << d.fragment_sizes[id] << '\n';
  return os.str();
}

std::string scan_csv(const FragmentationScan& scan) {
  std::ostringstream os;
  os << "L,M,eta,N,N_max,ratio\n";
  for (const auto& r : scan.rows) {
    os << scan.L << ',' << r.M << ',' << format_double(r.eta) << ',' << r.N << ',' << r.N_max
       << ',' << format_double(r.ratio) << '\n';
  }
  return os.str();
}

nlohmann::json scan_sidecar(const FragmentationScan& scan) {
  nlohmann::json j;
  j["L"] = scan.L;
  j["eta1"] = scan.thresholds.eta1;
  j["eta2"] = scan.thresholds.eta2;
  j["eta_max"] = scan.thresholds.eta_max;
  if (scan.thresholds.eta_star) {
    j["eta_star"] = *scan.thresholds.eta_star;
  } else {
    j["eta_star"] = nullptr;
  }
  j["eta_star_note"] = "single-size heuristic: smallest scanned eta with N_max/N < 0.5";
  j["skipped_M"] = scan.skipped;
  return j;
}

std::string time_series_csv(const TimeSeries& series) {
  std::ostringstream os;
  os << "t,G\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    os << format_double(series.times[i]) << ',' << format_double(series.G[i]) << '\n';
  }
  return os.str();
}

std::string snapshot_csv(const Lattice& lattice, const Configuration& initial,
                         std::span<const double> occupations) {
  if (static_cast<int>(occupations.size()) != lattice.site_count()) {
    throw InvalidParameter("occupation vector does not match the lattice");
  }
  std::ostringstream os;
  os << "site_index,row,col,n_initial,n_expected\n";
  for (int s = 0; s < lattice.site_count(); ++s) {
    os << s << ',' << lattice.row(s) << ',' << lattice.col(s) << ','
       << (initial.occupied(s) ? 1 : 0) << ',' << format_double(occupations[s]) << '\n';
  }
  return os.str();
}

std::string spectrum_csv(const ScarScan& scan) {
  std::ostringstream os;
  os << "lambda,fragment_id,state_index,E,E_over_L2,S_A,Q,degeneracy_group\n";
  for (const auto& r : scan.rows) {
    os << format_double(r.lambda) << ',' << r.fragment_id << ',' << r.state_index << ','
       << format_double(r.energy) << ',' << format_double(r.energy_density) << ','
       << format_double(r.entropy) << ',' << format_double(r.q) << ',' << r.degeneracy_group
       << '\n';
  }
  return os.str();
}

std::string classical_csv(const ClassicalSeries& series) {
  std::ostringstream os;
  os << "t,G_cl,stderr\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    os << format_double(series.times[i]) << ',' << format_double(series.G[i]) << ','
       << format_double(series.standard_error[i]) << '\n';
  }
  return os.str();
}

}  // namespace qhd
