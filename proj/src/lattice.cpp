// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhd/lattice.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "qhd/errors.hpp"

namespace qhd {

Lattice::Lattice(int linear_size) : size_(linear_size) {
  if (linear_size < 2) {
    throw InvalidParameter("lattice size L must be >= 2, got " + std::to_string(linear_size));
  }
  if (linear_size * linear_size > kMaxSites) {
    throw InvalidParameter("lattice size L=" + std::to_string(linear_size) +
                           " exceeds the supported maximum of " + std::to_string(kMaxSites) +
                           " sites");
  }
  const int L = size_;
  for (int r = 0; r < L; ++r) {
    for (int c = 0; c < L; ++c) {
      const int s = site(r, c);
      if (c + 1 < L) nn_pairs_.push_back({s, site(r, c + 1)});
      if (r + 1 < L) nn_pairs_.push_back({s, site(r + 1, c)});
      if (r + 1 < L && c + 1 < L) nnn_pairs_.push_back({s, site(r + 1, c + 1)});
      if (r + 1 < L && c > 0) nnn_pairs_.push_back({s, site(r + 1, c - 1)});
    }
  }

  std::vector<std::vector<int>> adj(site_count());
  for (const auto& p : nn_pairs_) {
    adj[p.a].push_back(p.b);
    adj[p.b].push_back(p.a);
  }
  nbr_begin_.push_back(0);
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    nbr_.insert(nbr_.end(), list.begin(), list.end());
    nbr_begin_.push_back(static_cast<int>(nbr_.size()));
  }
}

Lattice build_lattice(int linear_size) { return Lattice(linear_size); }

Configuration::Configuration(int site_count) : site_count_(site_count) {
  if (site_count < 0 || site_count > kMaxSites) {
    throw InvalidParameter("configuration size " + std::to_string(site_count) +
                           " outside [0, " + std::to_string(kMaxSites) + "]");
  }
}

Configuration Configuration::from_sites(int site_count, std::span<const int> sites) {
  Configuration c(site_count);
  for (int s : sites) {
    if (s < 0 || s >= site_count) {
      throw InvalidParameter("site index " + std::to_string(s) + " out of range");
    }
    c.set(s);
  }
  return c;
}

Configuration Configuration::from_bits(std::string_view bits) {
  Configuration c(static_cast<int>(bits.size()));
  for (std::size_t s = 0; s < bits.size(); ++s) {
    if (bits[s] == '1') {
      c.set(static_cast<int>(s));
    } else if (bits[s] != '0') {
      throw InvalidParameter("occupancy string may only contain '0' and '1'");
    }
  }
  return c;
}

Configuration Configuration::from_words(int site_count, std::span<const std::uint64_t> words) {
  Configuration c(site_count);
  std::copy_n(words.begin(), std::min<std::size_t>(words.size(), kMaxWords), c.words_.begin());
  return c;
}

std::vector<int> Configuration::occupied_sites() const {
  std::vector<int> out;
  for (int w = 0; w < word_count(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      out.push_back(w * 64 + std::countr_zero(bits));
      bits &= bits - 1;
    }
  }
  return out;
}

std::string Configuration::to_bits() const {
  std::string out(static_cast<std::size_t>(site_count_), '0');
  for (int s = 0; s < site_count_; ++s) {
    if (occupied(s)) out[s] = '1';
  }
  return out;
}

std::size_t Configuration::hash() const noexcept {
  // splitmix64 finalizer folded over the words
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(site_count_);
  for (auto w : words_) {
    std::uint64_t z = h + w + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    h = z ^ (z >> 31);
  }
  return static_cast<std::size_t>(h);
}

namespace {

void require_sized(const Configuration& config, const Lattice& lattice) {
  if (config.site_count() != lattice.site_count()) {
    throw InvalidParameter("configuration has " + std::to_string(config.site_count()) +
                           " sites, lattice has " + std::to_string(lattice.site_count()));
  }
}

}  // namespace

bool is_valid(const Configuration& config, const Lattice& lattice) {
  require_sized(config, lattice);
  for (const auto& p : lattice.nn_pairs()) {
    if (config.occupied(p.a) && config.occupied(p.b)) return false;
  }
  return true;
}

std::vector<Hop> allowed_hops(const Configuration& config, const Lattice& lattice) {
  if (!is_valid(config, lattice)) {
    throw ConstraintViolation("configuration " + config.to_bits() +
                              " violates the hard-disk constraint");
  }
  std::vector<Hop> hops;
  for_each_hop(config, lattice, [&](int from, int to) { hops.push_back({from, to}); });
  return hops;
}

int occupied_nnn_pairs(const Configuration& config, const Lattice& lattice) {
  int n = 0;
  for (const auto& p : lattice.nnn_pairs()) {
    n += (config.occupied(p.a) && config.occupied(p.b)) ? 1 : 0;
  }
  return n;
}

bool FrozenReport::has_snake() const noexcept {
  return std::any_of(occupied_diagonals.begin(), occupied_diagonals.end(),
                     [](const DiagonalLine& d) { return d.snake; });
}

FrozenReport frozen_and_snakes(const Configuration& config, const Lattice& lattice) {
  FrozenReport report;
  report.frozen = allowed_hops(config, lattice).empty();

  const int L = lattice.linear_size();
  auto scan = [&](DiagonalOrientation orientation, int lo, int hi) {
    for (int offset = lo; offset <= hi; ++offset) {
      int length = 0;
      bool full = true;
      for (int r = 0; r < L; ++r) {
        const int c = orientation == DiagonalOrientation::kMain ? r - offset : offset - r;
        if (c < 0 || c >= L) continue;
        ++length;
        if (!config.occupied(lattice.site(r, c))) {
          full = false;
          break;
        }
      }
      if (full && length >= 2) {
        report.occupied_diagonals.push_back({orientation, offset, length, length == L});
      }
    }
  };
  scan(DiagonalOrientation::kMain, -(L - 1), L - 1);
  scan(DiagonalOrientation::kAnti, 0, 2 * L - 2);
  return report;
}

nlohmann::json to_json(const Configuration& config, const Lattice& lattice) {
  require_sized(config, lattice);
  return {{"L", lattice.linear_size()},
          {"M", config.particle_count()},
          {"indexing", "row-major s = r*L + c, row 0 at the bottom"},
          {"occupancy", config.to_bits()}};
}

Configuration configuration_from_json(const nlohmann::json& j) {
  const int L = j.at("L").get<int>();
  auto c = Configuration::from_bits(j.at("occupancy").get<std::string>());
  if (c.site_count() != L * L) {
    throw InvalidParameter("occupancy string length does not match L*L");
  }
  if (j.contains("M") && j.at("M").get<int>() != c.particle_count()) {
    throw InvalidParameter("particle count M does not match the occupancy string");
  }
  return c;
}

}  // namespace qhd
