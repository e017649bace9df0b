// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file lattice.hpp
 * @brief Open square lattice, hard-disk configurations and constrained moves.
 *
 * Sites are indexed row-major, s = r * L + c, with row 0 at the bottom.
 * A configuration is a bit-set over the L*L sites (bit s <-> site s); it is
 * valid when no nearest-neighbor pair is doubly occupied.
 */

#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace qhd {

inline constexpr int kMaxWords = 7;
inline constexpr int kMaxSites = 64 * kMaxWords;  // L <= 21

struct SitePair {
  int a = 0;  // a < b
  int b = 0;
  friend bool operator==(const SitePair&, const SitePair&) = default;
};

class Lattice {
 public:
  /// Throws InvalidParameter unless 2 <= L and L*L <= kMaxSites.
  explicit Lattice(int linear_size);

  int linear_size() const noexcept { return size_; }
  int site_count() const noexcept { return size_ * size_; }
  int site(int row, int col) const noexcept { return row * size_ + col; }
  int row(int site) const noexcept { return site / size_; }
  int col(int site) const noexcept { return site % size_; }

  const std::vector<SitePair>& nn_pairs() const noexcept { return nn_pairs_; }
  const std::vector<SitePair>& nnn_pairs() const noexcept { return nnn_pairs_; }

  /// Nearest neighbors of a site, ascending.
  std::span<const int> neighbors(int site) const noexcept {
    return {nbr_.data() + nbr_begin_[site], nbr_.data() + nbr_begin_[site + 1]};
  }

 private:
  int size_;
  std::vector<SitePair> nn_pairs_;
  std::vector<SitePair> nnn_pairs_;
  std::vector<int> nbr_;
  std::vector<int> nbr_begin_;
};

/// Convenience spelling of the Lattice constructor.
Lattice build_lattice(int linear_size);

class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(int site_count);

  static Configuration from_sites(int site_count, std::span<const int> sites);
  /// Parses a length-site_count string of '0'/'1' in site-index order.
  static Configuration from_bits(std::string_view bits);
  static Configuration from_words(int site_count, std::span<const std::uint64_t> words);

  int site_count() const noexcept { return site_count_; }
  int word_count() const noexcept { return (site_count_ + 63) / 64; }

  bool occupied(int s) const noexcept { return (words_[s >> 6] >> (s & 63)) & 1U; }
  void set(int s) noexcept { words_[s >> 6] |= std::uint64_t{1} << (s & 63); }
  void clear(int s) noexcept { words_[s >> 6] &= ~(std::uint64_t{1} << (s & 63)); }

  int particle_count() const noexcept {
    int n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
  }

  std::vector<int> occupied_sites() const;
  std::string to_bits() const;

  /// Copy with the particle at `from` moved to `to` (no validity check).
  Configuration moved(int from, int to) const noexcept {
    Configuration c = *this;
    c.clear(from);
    c.set(to);
    return c;
  }

  std::span<const std::uint64_t> words() const noexcept {
    return {words_.data(), static_cast<std::size_t>(word_count())};
  }

  std::size_t hash() const noexcept;

  friend bool operator==(const Configuration&, const Configuration&) = default;
  /// Numeric order of the bit-set (highest word most significant).
  friend std::strong_ordering operator<=>(const Configuration& x, const Configuration& y) noexcept {
    if (auto c = x.site_count_ <=> y.site_count_; c != 0) return c;
    for (int w = kMaxWords - 1; w >= 0; --w) {
      if (auto c = x.words_[w] <=> y.words_[w]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  std::array<std::uint64_t, kMaxWords> words_{};
  int site_count_ = 0;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept { return c.hash(); }
};

struct Hop {
  int from = 0;
  int to = 0;
  friend bool operator==(const Hop&, const Hop&) = default;
};

/// True iff no nearest-neighbor pair is doubly occupied.
bool is_valid(const Configuration& config, const Lattice& lattice);

/// Calls fn(from, to) for every constraint-respecting hop, ordered by
/// from-site then to-site. Assumes `config` is valid and sized for `lattice`.
template <typename Fn>
void for_each_hop(const Configuration& config, const Lattice& lattice, Fn&& fn) {
  const int n = lattice.site_count();
  for (int w = 0; w < config.word_count(); ++w) {
    std::uint64_t bits = config.words()[w];
    while (bits) {
      const int from = w * 64 + std::countr_zero(bits);
      bits &= bits - 1;
      if (from >= n) return;
      for (int to : lattice.neighbors(from)) {
        if (config.occupied(to)) continue;
        bool free = true;
        for (int k : lattice.neighbors(to)) {
          if (k != from && config.occupied(k)) {
            free = false;
            break;
          }
        }
        if (free) fn(from, to);
      }
    }
  }
}

/// Throws ConstraintViolation if `config` is not valid.
std::vector<Hop> allowed_hops(const Configuration& config, const Lattice& lattice);

/// Number of occupied next-to-nearest-neighbor (diagonal) pairs.
int occupied_nnn_pairs(const Configuration& config, const Lattice& lattice);

enum class DiagonalOrientation {
  kMain,  // r - c = offset
  kAnti,  // r + c = offset
};

struct DiagonalLine {
  DiagonalOrientation orientation = DiagonalOrientation::kMain;
  int offset = 0;
  int length = 0;
  bool snake = false;  // length == L
};

struct FrozenReport {
  bool frozen = false;
  /// Fully occupied diagonals of length >= 2, main orientation first.
  std::vector<DiagonalLine> occupied_diagonals;

  bool has_snake() const noexcept;
};

FrozenReport frozen_and_snakes(const Configuration& config, const Lattice& lattice);

/// {"L", "M", "occupancy"} with occupancy as a '0'/'1' string.
nlohmann::json to_json(const Configuration& config, const Lattice& lattice);
Configuration configuration_from_json(const nlohmann::json& j);

}  // namespace qhd
