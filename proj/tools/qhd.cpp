// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver: one subcommand per experiment, CSV and JSON outputs.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qhd/classical_walk.hpp"
#include "qhd/errors.hpp"
#include "qhd/hamiltonian.hpp"
#include "qhd/krylov.hpp"
#include "qhd/lattice.hpp"
#include "qhd/output.hpp"
#include "qhd/scenarios.hpp"
#include "qhd/spectral.hpp"
#include "qhd/state_space.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qhd;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNumeric = 4;

// Spectrum scans enumerate the whole sector before picking fragments; this
// keeps refusals fast for sectors far beyond dense reach.
constexpr std::size_t kSpectrumStateCap = 2'000'000;

unsigned resolve_threads(unsigned threads) {
  return threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
}

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < sizes.size(); ++k) os << (k ? ", " : "") << sizes[k];
  os << ']';
  return os.str();
}

std::string time_tag(double t) {
  std::string s = format_double(t);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

struct Common {
  int L = 0;
  std::string out = "qhd-out";
  unsigned threads = 1;
  std::size_t state_cap = kDefaultStateCap;
};

struct ScenarioArgs {
  std::string name = "crystal";
  std::vector<int> removals;

  Configuration build(int L) const {
    return build_scenario({parse_scenario_kind(name), L, removals});
  }
  void to_json(json& j) const {
    j["scenario"] = name;
    j["removal_sites"] = removals;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--L", c.L, "Linear lattice size (2..21)")->required();
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  sub->add_option("--state-cap", c.state_cap, "Refuse bases larger than this")
      ->capture_default_str();
}

void add_scenario(CLI::App* sub, ScenarioArgs& s) {
  sub->add_option("--scenario", s.name,
                  "crystal, second-row, first-row, half-diagonal, middle-row, point-defects "
                  "or custom")
      ->capture_default_str();
  sub->add_option("--removals", s.removals,
                  "Sites removed from the crystal for point-defects or custom")
      ->delimiter(',');
}

json common_json(const Common& c) {
  return {{"L", c.L}, {"out", c.out}, {"threads", c.threads}, {"state_cap", c.state_cap}};
}

// Writes run.json with the resolved configuration, tool version and runtime.
void write_run_record(const std::string& command, const Common& c, json config,
                      std::chrono::steady_clock::time_point start, json results = json::object()) {
  config.update(common_json(c));
  json run = {{"command", command},
              {"version", QHD_VERSION},
              {"config", config},
              {"results", results},
              {"runtime_seconds",
               std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  write_json(fs::path(c.out) / "run.json", run);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact dynamics of quantum hard disks on an open square lattice"};
  app.set_version_flag("--version", QHD_VERSION);
  app.set_config("--config", "", "TOML run configuration; flags override its values");
  app.require_subcommand(1);

  std::function<int()> action;
  const auto start = std::chrono::steady_clock::now();

  // basis
  Common basis_c;
  int basis_m = 0;
  auto* basis = app.add_subcommand("basis", "Enumerate a fixed-M sector");
  add_common(basis, basis_c);
  basis->add_option("--M", basis_m, "Particle count")->required();
  basis->callback([&] {
    action = [&] {
      const Lattice lat(basis_c.L);
      const Basis b = enumerate_sector(lat, basis_m, basis_c.state_cap);
      std::cout << "dim: " << b.size() << '\n';
      write_text(fs::path(basis_c.out) / "basis.csv", basis_csv(b));
      write_run_record("basis", basis_c, {{"M", basis_m}}, start, {{"dim", b.size()}});
      return 0;
    };
  });

  // fragments
  Common frag_c;
  int frag_m = 0;
  auto* fragments = app.add_subcommand("fragments", "Split a sector into kinetic fragments");
  add_common(fragments, frag_c);
  fragments->add_option("--M", frag_m, "Particle count")->required();
  fragments->callback([&] {
    action = [&] {
      const Lattice lat(frag_c.L);
      const auto d = decompose_sector(lat, enumerate_sector(lat, frag_m, frag_c.state_cap));
      std::cout << "fragments: " << d.fragment_count() << ", sizes: " << join_sizes(d.fragment_sizes)
                << '\n';
      std::cout << "N: " << d.total << ", N_max: " << d.largest_size
                << ", ratio: " << format_double(d.ratio) << '\n';
      write_text(fs::path(frag_c.out) / "fragments.csv", fragments_csv(d));
      write_run_record("fragments", frag_c, {{"M", frag_m}}, start,
                       {{"fragments", d.fragment_count()}, {"N", d.total},
                        {"N_max", d.largest_size}});
      return 0;
    };
  });

  // scan
  Common scan_c;
  int scan_min = 0, scan_max = -1;
  auto* scan = app.add_subcommand("scan", "Fragmentation ratio for every particle count");
  add_common(scan, scan_c);
  scan->add_option("--m-min", scan_min, "First particle count")->capture_default_str();
  scan->add_option("--m-max", scan_max, "Last particle count (default L^2)");
  scan->callback([&] {
    action = [&] {
      const Lattice lat(scan_c.L);
      const int last = scan_max < 0 ? lat.site_count() : scan_max;
      const auto s = scan_fragmentation(lat, scan_min, last, scan_c.state_cap);
      for (const auto& r : s.rows) {
        std::cout << "M=" << r.M << " N=" << r.N << " N_max=" << r.N_max
                  << " ratio=" << format_double(r.ratio) << '\n';
      }
      const auto sidecar = scan_sidecar(s);
      std::cout << "eta1: " << format_double(s.thresholds.eta1)
                << ", eta2: " << format_double(s.thresholds.eta2) << '\n';
      for (int m : s.skipped) std::cerr << "warning: M=" << m << " skipped by the state cap\n";
      write_text(fs::path(scan_c.out) / "scan.csv", scan_csv(s));
      write_json(fs::path(scan_c.out) / "scan.json", sidecar);
      write_run_record("scan", scan_c, {{"m_min", scan_min}, {"m_max", last}}, start);
      return 0;
    };
  });

  // evolve
  Common ev_c;
  ScenarioArgs ev_s;
  EvolveOptions ev_o;
  PropagatorSettings ev_p;
  double ev_ws = -1.0, ev_we = -1.0;
  auto* evolve_cmd = app.add_subcommand("evolve", "Krylov time evolution of a scenario");
  add_common(evolve_cmd, ev_c);
  add_scenario(evolve_cmd, ev_s);
  evolve_cmd->add_option("--J", ev_o.hopping, "Hopping amplitude")->capture_default_str();
  evolve_cmd->add_option("--lambda", ev_o.interaction, "Diagonal pair interaction")
      ->capture_default_str();
  evolve_cmd->add_option("--tmax", ev_o.t_max, "Final time Jt")->capture_default_str();
  evolve_cmd->add_option("--dt", ev_p.dt, "Output step")->capture_default_str();
  evolve_cmd->add_option("--krylov-dim", ev_p.krylov_dim, "Lanczos vectors per substep")
      ->capture_default_str();
  evolve_cmd->add_option("--error-tol", ev_p.error_tol,
                         "Local error per unit time (0 = fixed substeps)")
      ->capture_default_str();
  evolve_cmd->add_option("--window-start", ev_ws, "Averaging window start (default tmax/2)");
  evolve_cmd->add_option("--window-end", ev_we, "Averaging window end (default tmax)");
  evolve_cmd->add_option("--snapshot-at", ev_o.snapshot_times, "Occupation snapshot times")
      ->delimiter(',');
  evolve_cmd->callback([&] {
    action = [&] {
      const Lattice lat(ev_c.L);
      ev_o.state_cap = ev_c.state_cap;
      if (ev_ws >= 0.0) ev_o.window_start = ev_ws;
      if (ev_we >= 0.0) ev_o.window_end = ev_we;
      const Configuration c0 = ev_s.build(ev_c.L);
      const TimeSeries ts = evolve(lat, c0, ev_o, ev_p);
      const fs::path out(ev_c.out);
      write_text(out / "G.csv", time_series_csv(ts));
      json snaps = json::array();
      for (const auto& s : ts.snapshots) {
        const std::string file = "snapshot_t" + time_tag(s.time) + ".csv";
        write_text(out / file, snapshot_csv(lat, c0, s.occupations));
        snaps.push_back({{"t", s.time}, {"file", file}});
      }
      json sidecar = {{"L", ts.L},
                      {"M", ts.M},
                      {"eta", ts.eta},
                      {"lambda", ev_o.interaction},
                      {"J", ev_o.hopping},
                      {"dt", ev_p.dt},
                      {"krylov_dim", ev_p.krylov_dim},
                      {"error_tol", ev_p.error_tol},
                      {"window", {ts.window_start, ts.window_end}},
                      {"fragment_dimension", ts.fragment_dimension},
                      {"G0", ts.G.front()},
                      {"G_star", ts.g_star},
                      {"G_bar", ts.g_bar},
                      {"max_norm_drift", ts.max_norm_drift},
                      {"max_energy_drift", ts.max_energy_drift},
                      {"substeps", ts.total_substeps},
                      {"snapshots", snaps}};
      ev_s.to_json(sidecar);
      write_json(out / "G.json", sidecar);
      std::cout << "fragment dimension: " << ts.fragment_dimension << '\n'
                << "G(0): " << format_double(ts.G.front()) << '\n'
                << "G_bar over [" << format_double(ts.window_start) << ", "
                << format_double(ts.window_end) << "]: " << format_double(ts.g_bar) << '\n';
      json cfg = {{"J", ev_o.hopping},
                  {"lambda", ev_o.interaction},
                  {"tmax", ev_o.t_max},
                  {"dt", ev_p.dt},
                  {"krylov_dim", ev_p.krylov_dim},
                  {"error_tol", ev_p.error_tol},
                  {"window", {ts.window_start, ts.window_end}},
                  {"snapshot_at", ev_o.snapshot_times}};
      ev_s.to_json(cfg);
      write_run_record("evolve", ev_c, cfg, start,
                       {{"M", ts.M},
                        {"fragment_dimension", ts.fragment_dimension},
                        {"G0", ts.G.front()},
                        {"G_bar", ts.g_bar}});
      return 0;
    };
  });

  // spectrum
  Common sp_c;
  sp_c.state_cap = kSpectrumStateCap;
  int sp_m = 0;
  std::string sp_scope = "largest-fragment";
  std::vector<double> sp_lambdas{0.0};
  ScarScanOptions sp_o;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenstate entanglement and EA order");
  add_common(spectrum, sp_c);
  spectrum->add_option("--M", sp_m, "Particle count")->required();
  spectrum->add_option("--scope", sp_scope, "largest-fragment or all-fragments")
      ->check(CLI::IsMember({"largest-fragment", "all-fragments"}))
      ->capture_default_str();
  spectrum->add_option("--lambdas", sp_lambdas, "Interaction values")->delimiter(',');
  spectrum->add_option("--J", sp_o.hopping, "Hopping amplitude")->capture_default_str();
  spectrum->add_option("--dense-cap", sp_o.dense_cap, "Largest dense diagonalization")
      ->capture_default_str();
  spectrum->add_option("--rows-in-a", sp_o.rows_in_a, "Bottom rows in subsystem A (-1 = L/2)")
      ->capture_default_str();
  spectrum->callback([&] {
    action = [&] {
      const Lattice lat(sp_c.L);
      sp_o.state_cap = sp_c.state_cap;
      sp_o.threads = resolve_threads(sp_c.threads);
      const auto scope = sp_scope == "all-fragments" ? ScanScope::kAllFragments
                                                     : ScanScope::kLargestFragment;
      const ScarScan s = scar_scan(lat, sp_m, sp_lambdas, scope, sp_o);
      const fs::path out(sp_c.out);
      write_text(out / "spectrum.csv", spectrum_csv(s));
      json skipped = json::array();
      for (const auto& k : s.skipped) {
        skipped.push_back({{"fragment_id", k.fragment_id}, {"dimension", k.dimension}});
      }
      json sidecar = {{"L", s.L},
                      {"M", s.M},
                      {"J", sp_o.hopping},
                      {"lambdas", sp_lambdas},
                      {"scope", sp_scope},
                      {"sector_dimension", s.sector_dimension},
                      {"fragment_count", s.fragment_count},
                      {"largest_fragment_id", s.largest_fragment_id},
                      {"largest_fragment_dimension", s.largest_fragment_dimension},
                      {"partial", s.partial()},
                      {"skipped_fragments", skipped},
                      {"eigensolver_fallbacks", s.eigensolver_fallbacks}};
      write_json(out / "spectrum.json", sidecar);
      std::cout << "sector dimension: " << s.sector_dimension << ", fragments: "
                << s.fragment_count << ", largest: " << s.largest_fragment_dimension << '\n'
                << "rows: " << s.rows.size() << '\n';
      std::size_t product_rows = 0;
      for (const auto& r : s.rows) {
        product_rows += r.fragment_dimension == 1 && r.entropy == 0.0 && r.q == 1.0;
      }
      std::cout << "size-1 fragment rows with S_A=0, Q=1: " << product_rows << '\n';
      if (s.partial()) {
        std::cerr << "warning: " << s.skipped.size()
                  << " fragments above the dense cap were skipped\n";
      }
      if (s.eigensolver_fallbacks > 0) {
        std::cerr << "warning: LAPACK eigenvectors failed verification " << s.eigensolver_fallbacks
                  << " times and were recomputed; set OPENBLAS_CORETYPE to a working kernel\n";
      }
      json cfg = {{"M", sp_m},
                  {"scope", sp_scope},
                  {"lambdas", sp_lambdas},
                  {"J", sp_o.hopping},
                  {"dense_cap", sp_o.dense_cap},
                  {"rows_in_a", sp_o.rows_in_a}};
      write_run_record("spectrum", sp_c, cfg, start,
                       {{"sector_dimension", s.sector_dimension},
                        {"largest_fragment_dimension", s.largest_fragment_dimension},
                        {"rows", s.rows.size()},
                        {"partial", s.partial()},
                        {"eigensolver_fallbacks", s.eigensolver_fallbacks}});
      return 0;
    };
  });

  // classical
  Common cl_c;
  ScenarioArgs cl_s;
  WalkSettings cl_w;
  double cl_lambda = 0.0;
  std::vector<double> cl_snapshots;
  auto* classical = app.add_subcommand("classical", "Constrained classical random walk");
  add_common(classical, cl_c);
  add_scenario(classical, cl_s);
  classical->add_option("--trajectories", cl_w.trajectories, "Ensemble size")
      ->capture_default_str();
  classical->add_option("--tmax", cl_w.t_max, "Final time Jt")->capture_default_str();
  classical->add_option("--J", cl_w.hop_rate, "Rate per allowed hop")->capture_default_str();
  classical->add_option("--seed", cl_w.seed, "Random seed")->capture_default_str();
  classical->add_option("--lambda", cl_lambda, "Accepted for parity; has no effect")
      ->capture_default_str();
  classical->add_option("--snapshot-at", cl_snapshots, "Occupation snapshot times")
      ->delimiter(',');
  classical->callback([&] {
    action = [&] {
      const Lattice lat(cl_c.L);
      cl_w.threads = resolve_threads(cl_c.threads);
      for (int k = 0; k <= static_cast<int>(cl_w.t_max); ++k) cl_w.record_times.push_back(k);
      for (double t : cl_snapshots) {
        if (t < 0.0 || t > cl_w.t_max) {
          throw InvalidParameter("snapshot time " + format_double(t) + " outside [0, tmax]");
        }
        cl_w.record_times.push_back(t);
      }
      std::sort(cl_w.record_times.begin(), cl_w.record_times.end());
      cl_w.record_times.erase(std::unique(cl_w.record_times.begin(), cl_w.record_times.end()),
                              cl_w.record_times.end());
      const Configuration c0 = cl_s.build(cl_c.L);
      const ClassicalSeries r = simulate(lat, c0, cl_w);
      const fs::path out(cl_c.out);
      write_text(out / "classical.csv", classical_csv(r));
      json snaps = json::array();
      for (double t : cl_snapshots) {
        const auto k = static_cast<std::size_t>(
            std::find(r.times.begin(), r.times.end(), t) - r.times.begin());
        const std::string file = "snapshot_t" + time_tag(t) + ".csv";
        write_text(out / file, snapshot_csv(lat, c0, r.occupations.at(k)));
        snaps.push_back({{"t", t}, {"file", file}});
      }
      json sidecar = {{"L", r.L},
                      {"M", r.M},
                      {"eta", r.eta},
                      {"J", cl_w.hop_rate},
                      {"lambda", cl_lambda},
                      {"lambda_inert", true},
                      {"trajectories", r.trajectories},
                      {"seed", cl_w.seed},
                      {"tmax", cl_w.t_max},
                      {"G_star", r.g_star},
                      {"snapshots", snaps}};
      cl_s.to_json(sidecar);
      write_json(out / "classical.json", sidecar);
      std::cout << "G_cl(0): " << format_double(r.G.front()) << '\n'
                << "G_cl(" << format_double(r.times.back()) << "): " << format_double(r.G.back())
                << " +- " << format_double(r.standard_error.back()) << '\n';
      json cfg = {{"trajectories", cl_w.trajectories},
                  {"tmax", cl_w.t_max},
                  {"J", cl_w.hop_rate},
                  {"seed", cl_w.seed},
                  {"lambda", cl_lambda},
                  {"snapshot_at", cl_snapshots}};
      cl_s.to_json(cfg);
      write_run_record("classical", cl_c, cfg, start,
                       {{"M", r.M}, {"G_cl_final", r.G.back()},
                        {"stderr_final", r.standard_error.back()}});
      return 0;
    };
  });

  // hamiltonian
  Common h_c;
  int h_m = -1;
  ScenarioArgs h_s;
  double h_j = 1.0, h_lambda = 0.0;
  auto* ham = app.add_subcommand(
      "hamiltonian", "Write the sparse Hamiltonian of a sector (--M) or of a scenario's fragment");
  add_common(ham, h_c);
  ham->add_option("--M", h_m, "Particle count; omit to use the scenario's fragment");
  add_scenario(ham, h_s);
  ham->add_option("--J", h_j, "Hopping amplitude")->capture_default_str();
  ham->add_option("--lambda", h_lambda, "Diagonal pair interaction")->capture_default_str();
  ham->callback([&] {
    action = [&] {
      const Lattice lat(h_c.L);
      const Basis b = h_m >= 0 ? enumerate_sector(lat, h_m, h_c.state_cap)
                               : fragment_of(lat, h_s.build(h_c.L), h_c.state_cap);
      const SparseHamiltonian h = build_hamiltonian(lat, b, h_j, h_lambda);
      std::ostringstream os;
      h.write_triplets(os);
      const fs::path out(h_c.out);
      write_text(out / "hamiltonian.txt", os.str());
      write_text(out / "basis.csv", basis_csv(b));
      std::cout << "dim: " << h.dimension() << '\n';
      json cfg = {{"M", h_m}, {"J", h_j}, {"lambda", h_lambda}};
      if (h_m < 0) h_s.to_json(cfg);
      write_run_record("hamiltonian", h_c, cfg, start, {{"dim", h.dimension()}});
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action();
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << " (estimated size " << e.estimated_size() << ")\n";
    return kExitCapacity;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
