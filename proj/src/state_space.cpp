// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhd/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "qhd/errors.hpp"

namespace qhd {

namespace {

int words_for(int site_count) { return (site_count + 63) / 64; }

// Numeric comparison of two raw bit-sets of equal word count.
int compare_words(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y) {
  for (std::size_t w = x.size(); w-- > 0;) {
    if (x[w] != y[w]) return x[w] < y[w] ? -1 : 1;
  }
  return 0;
}

std::string capacity_message(const char* what, const Lattice& lattice, int particles,
                             double estimate, std::size_t cap, bool lower_bound) {
  std::ostringstream os;
  os << what << " for L=" << lattice.linear_size() << ", M=" << particles << " has "
     << (lower_bound ? "more than " : "") << std::llround(estimate)
     << " configurations, exceeding the cap of " << cap;
  return os.str();
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;  // smaller ordinal stays root
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

Basis::Basis(int site_count, int particle_count, std::span<const Configuration> configs)
    : site_count_(site_count), particle_count_(particle_count), words_(words_for(site_count)) {
  data_.reserve(configs.size() * static_cast<std::size_t>(words_));
  for (const auto& c : configs) {
    if (c.site_count() != site_count) throw InvalidParameter("basis configuration size mismatch");
    auto w = c.words();
    data_.insert(data_.end(), w.begin(), w.end());
  }
  for (std::size_t i = 1; i < configs.size(); ++i) {
    if (!(configs[i - 1] < configs[i])) {
      throw InvalidParameter("basis configurations must be strictly ascending");
    }
  }
}

Basis Basis::from_flat(int site_count, int particle_count, std::vector<std::uint64_t> words) {
  Basis b;
  b.site_count_ = site_count;
  b.particle_count_ = particle_count;
  b.words_ = words_for(site_count);
  if (words.size() % static_cast<std::size_t>(b.words_) != 0) {
    throw InvalidParameter("flat basis storage is not a whole number of states");
  }
  b.data_ = std::move(words);
  return b;
}

std::optional<std::size_t> Basis::index_of(const Configuration& config) const noexcept {
  if (config.site_count() != site_count_) return std::nullopt;
  const auto key = config.words();
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const int c = compare_words(state_words(mid), key);
    if (c == 0) return mid;
    if (c < 0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return std::nullopt;
}

std::optional<double> estimate_sector_size(const Lattice& lattice, int particles) {
  const int L = lattice.linear_size();
  if (L > 12 || particles < 0) return std::nullopt;
  std::vector<unsigned> rows;
  for (unsigned m = 0; m < (1U << L); ++m) {
    if ((m & (m >> 1)) == 0) rows.push_back(m);
  }
  const int cap = particles + 1;
  // count[row][k]: configurations of the rows so far ending in `row` with k particles
  std::vector<double> count(rows.size() * cap, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int k = std::popcount(rows[i]);
    if (k < cap) count[i * cap + k] = 1.0;
  }
  for (int r = 1; r < L; ++r) {
    std::vector<double> next(count.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[i] & rows[j]) continue;
        const int add = std::popcount(rows[j]);
        for (int k = 0; k + add < cap; ++k) next[j * cap + k + add] += count[i * cap + k];
      }
    }
    count.swap(next);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) total += count[i * cap + particles];
  return total;
}

Basis enumerate_sector(const Lattice& lattice, int particles, std::size_t cap) {
  if (particles < 0) throw InvalidParameter("particle count must be >= 0");
  if (auto est = estimate_sector_size(lattice, particles); est && *est > static_cast<double>(cap)) {
    throw CapacityError(capacity_message("sector", lattice, particles, *est, cap, false), *est);
  }

  const int n = lattice.site_count();
  const int L = lattice.linear_size();
  const int words = words_for(n);
  std::vector<std::uint64_t> data;
  Configuration current(n);
  std::size_t count = 0;

  // Sites are decided from the top index down, empty before occupied, which
  // emits configurations in ascending numeric order. Only the right and upper
  // neighbors are decided when site s is visited.
  auto recurse = [&](auto&& self, int s, int placed) -> void {
    if (placed == particles) {
      if (++count > cap) {
        throw CapacityError(capacity_message("sector", lattice, particles,
                                             static_cast<double>(cap), cap, true),
                            static_cast<double>(count));
      }
      auto w = current.words();
      data.insert(data.end(), w.begin(), w.begin() + words);
      return;
    }
    if (s < 0) return;
    // sites 0..s admit at most ceil((s+1)/2) disks (they carry a Hamiltonian path)
    if ((s + 2) / 2 < particles - placed) return;
    self(self, s - 1, placed);
    const int c = s % L;
    if ((c + 1 < L && current.occupied(s + 1)) || (s + L < n && current.occupied(s + L))) return;
    current.set(s);
    self(self, s - 1, placed + 1);
    current.clear(s);
  };
  recurse(recurse, n - 1, 0);
  return Basis::from_flat(n, particles, std::move(data));
}

Basis fragment_of(const Lattice& lattice, const Configuration& config, std::size_t cap) {
  if (!is_valid(config, lattice)) {
    throw ConstraintViolation("configuration " + config.to_bits() +
                              " violates the hard-disk constraint");
  }
  std::unordered_set<Configuration, ConfigurationHash> seen;
  std::vector<Configuration> order;
  seen.insert(config);
  order.push_back(config);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Configuration current = order[head];
    for_each_hop(current, lattice, [&](int from, int to) {
      Configuration next = current.moved(from, to);
      if (seen.insert(next).second) {
        order.push_back(next);
        if (order.size() > cap) {
          throw CapacityError(capacity_message("fragment", lattice, config.particle_count(),
                                               static_cast<double>(cap), cap, true),
                              static_cast<double>(order.size()));
        }
      }
    });
  }
  seen.clear();
  std::sort(order.begin(), order.end());
  return Basis(lattice.site_count(), config.particle_count(), order);
}

std::vector<std::size_t> FragmentDecomposition::members(int id) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fragment_id.size(); ++i) {
    if (fragment_id[i] == id) out.push_back(i);
  }
  return out;
}

FragmentDecomposition decompose_sector(const Lattice& lattice, const Basis& sector) {
  const std::size_t n = sector.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Configuration c = sector[i];
    for_each_hop(c, lattice, [&](int from, int to) {
      const auto j = sector.index_of(c.moved(from, to));
      if (j && *j > i) uf.unite(i, *j);
    });
  }

  FragmentDecomposition d;
  d.total = n;
  d.fragment_id.assign(n, -1);
  std::vector<int> label_of_root(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.find(i);
    if (label_of_root[root] < 0) {
      label_of_root[root] = static_cast<int>(d.fragment_sizes.size());
      d.fragment_sizes.push_back(0);
    }
    d.fragment_id[i] = label_of_root[root];
    ++d.fragment_sizes[d.fragment_id[i]];
  }
  for (int id = 0; id < d.fragment_count(); ++id) {
    if (d.fragment_sizes[id] > d.largest_size) {
      d.largest_size = d.fragment_sizes[id];
      d.largest_id = id;
    }
  }
  d.ratio = n == 0 ? 0.0 : static_cast<double>(d.largest_size) / static_cast<double>(n);
  return d;
}

Basis fragment_basis(const Basis& sector, const FragmentDecomposition& decomposition, int id) {
  std::vector<std::uint64_t> data;
  for (std::size_t i = 0; i < sector.size(); ++i) {
    if (decomposition.fragment_id[i] == id) {
      auto w = sector.state_words(i);
      data.insert(data.end(), w.begin(), w.end());
    }
  }
  return Basis::from_flat(sector.site_count(), sector.particle_count(), std::move(data));
}

FragmentationThresholds fragmentation_thresholds(int L) {
  if (L < 1) throw InvalidParameter("L must be positive");
  const double l = L;
  FragmentationThresholds t;
  t.eta1 = 1.0 / l;
  t.eta2 = 0.5 - static_cast<double>((L + 1) / 2) / (l * l);
  t.eta_max = 0.5 - static_cast<double>(L % 2) / (2.0 * l * l);
  return t;
}

FragmentationScan scan_fragmentation(const Lattice& lattice, int m_first, int m_last,
                                     std::size_t cap) {
  if (m_first < 0 || m_last < m_first) throw InvalidParameter("invalid particle-count range");
  FragmentationScan scan;
  scan.L = lattice.linear_size();
  scan.thresholds = fragmentation_thresholds(scan.L);
  const double sites = lattice.site_count();
  for (int m = m_first; m <= m_last; ++m) {
    Basis sector;
    try {
      sector = enumerate_sector(lattice, m, cap);
    } catch (const CapacityError&) {
      scan.skipped.push_back(m);
      continue;
    }
    if (sector.empty()) continue;
    const auto d = decompose_sector(lattice, sector);
    scan.rows.push_back({m, m / sites, d.total, d.largest_size, d.ratio});
  }
  for (const auto& row : scan.rows) {
    if (row.ratio < 0.5) {
      scan.thresholds.eta_star = row.eta;
      break;
    }
  }
  return scan;
}

int max_particle_count(const Lattice& lattice, std::size_t cap) {
  int m = 0;
  while (!enumerate_sector(lattice, m + 1, cap).empty()) ++m;
  return m;
}

}  // namespace qhd
