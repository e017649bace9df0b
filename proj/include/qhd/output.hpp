// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file output.hpp
 * @brief CSV and JSON artifact writers.
 *
 * CSV files have one header row, '.' decimals, '\n' line endings and 17
 * significant digits for floating point values.
 */

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qhd/classical_walk.hpp"
#include "qhd/krylov.hpp"
#include "qhd/lattice.hpp"
#include "qhd/spectral.hpp"
#include "qhd/state_space.hpp"

namespace qhd {

/// Shortest round-trip form is not required; always 17 significant digits.
std::string format_double(double value);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// index,occupancy
std::string basis_csv(const Basis& basis);
/// fragment_id,size
std::string fragments_csv(const FragmentDecomposition& decomposition);
/// L,M,eta,N,N_max,ratio
std::string scan_csv(const FragmentationScan& scan);
nlohmann::json scan_sidecar(const FragmentationScan& scan);

/// t,G
std::string time_series_csv(const TimeSeries& series);
/// site_index,row,col,n_initial,n_expected
std::string snapshot_csv(const Lattice& lattice, const Configuration& initial,
                         std::span<const double> occupations);

/// lambda,fragment_id,state_index,E,E_over_L2,S_A,Q,degeneracy_group
std::string spectrum_csv(const ScarScan& scan);

/// t,G_cl,stderr
std::string classical_csv(const ClassicalSeries& series);

}  // namespace qhd
