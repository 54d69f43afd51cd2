// Copyright 2026 The percq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Vertex arithmetic and neighborhood combinatorics of the distance-k
// augmented hypercube Q_{n,k}: vertex set {0,1}^n, edges between labels at
// Hamming distance 1..k.
//
// Coordinate convention: bit i of a label is coordinate i, and coordinate 0
// is written first in text form ("110000" has bits 0 and 1 set).

#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <ranges>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace percq {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr int kDefaultMaxDenseDimension = 28;

/// Largest n for which a 2^n-bit vertex set may be materialized.
inline int& max_dense_dimension() {
  static int limit = kDefaultMaxDenseDimension;
  return limit;
}

struct GraphParams {
  int n = 0;
  int k = 1;
  int r = 1;

  void validate() const {
    if (n < 1) throw ParameterError("n must be at least 1");
    if (k < 1 || k > n) throw ParameterError("k must satisfy 1 <= k <= n");
    if (r < 1) throw ParameterError("r must be at least 1");
  }

  void require_dense() const {
    validate();
    if (n > max_dense_dimension()) {
      throw CapacityError("n = " + std::to_string(n) + " exceeds the dense limit of " +
                          std::to_string(max_dense_dimension()));
    }
  }
};

inline void require_dense_dimension(int n) {
  if (n < 0) throw ParameterError("n must be non-negative");
  if (n > max_dense_dimension()) {
    throw CapacityError("n = " + std::to_string(n) + " exceeds the dense limit of " +
                        std::to_string(max_dense_dimension()));
  }
}

struct Vertex {
  std::uint64_t label = 0;

  constexpr Vertex() = default;
  constexpr explicit Vertex(std::uint64_t bits) : label(bits) {}

  constexpr int weight() const { return std::popcount(label); }
  constexpr bool coordinate(int i) const { return (label >> i) & 1u; }

  friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
  friend constexpr Vertex operator^(Vertex a, Vertex b) { return Vertex{a.label ^ b.label}; }
};

constexpr int hamming_distance(Vertex u, Vertex v) { return std::popcount(u.label ^ v.label); }

/// Exact C(n, j); throws on overflow of 64 bits.
inline std::uint64_t binomial(int n, int j) {
  if (j < 0 || n < 0 || j > n) return 0;
  j = std::min(j, n - j);
  unsigned __int128 acc = 1;
  for (int i = 0; i < j; ++i) {
    acc = acc * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
    if (acc > std::numeric_limits<std::uint64_t>::max()) throw ParameterError("binomial overflow");
  }
  return static_cast<std::uint64_t>(acc);
}

/// Degree of every vertex of Q_{n,k}: sum of C(n,i) for i = 1..k.
inline std::uint64_t ball_size(int n, int k) {
  if (k < 1 || k > n) throw ParameterError("ball_size requires 1 <= k <= n");
  std::uint64_t total = 0;
  for (int i = 1; i <= k; ++i) total += binomial(n, i);
  return total;
}

/// Dense membership vector over all 2^n labels with a cached population count.
class VertexSet {
 public:
  VertexSet() = default;

  explicit VertexSet(int n) : n_(n) {
    require_dense_dimension(n);
    words_.assign(word_count(n), 0);
  }

  static VertexSet full(int n) {
    VertexSet s(n);
    std::fill(s.words_.begin(), s.words_.end(), ~std::uint64_t{0});
    s.trim();
    s.count_ = s.universe_size();
    return s;
  }

  static VertexSet of(int n, std::span<const Vertex> members) {
    VertexSet s(n);
    for (Vertex v : members) s.insert(v);
    return s;
  }

  static VertexSet of(int n, std::initializer_list<std::uint64_t> labels) {
    VertexSet s(n);
    for (auto l : labels) s.insert(Vertex{l});
    return s;
  }

  int dimension() const { return n_; }
  std::uint64_t universe_size() const { return std::uint64_t{1} << n_; }
  std::uint64_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool is_full() const { return count_ == universe_size(); }

  bool contains(Vertex v) const { return test(v.label); }
  bool test(std::uint64_t label) const { return (words_[label >> 6] >> (label & 63)) & 1u; }

  bool insert(Vertex v) {
    check(v);
    auto& w = words_[v.label >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (v.label & 63);
    if (w & bit) return false;
    w |= bit;
    ++count_;
    return true;
  }

  bool erase(Vertex v) {
    check(v);
    auto& w = words_[v.label >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (v.label & 63);
    if (!(w & bit)) return false;
    w &= ~bit;
    --count_;
    return true;
  }

  // Unchecked insert for hot loops; label must be < 2^n.
  void set_unchecked(std::uint64_t label) {
    auto& w = words_[label >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (label & 63);
    count_ += (w & bit) ? 0 : 1;
    w |= bit;
  }

  void clear() {
    std::fill(words_.begin(), words_.end(), 0);
    count_ = 0;
  }

  VertexSet complement() const {
    VertexSet out = *this;
    for (auto& w : out.words_) w = ~w;
    out.trim();
    out.count_ = universe_size() - count_;
    return out;
  }

  VertexSet& operator|=(const VertexSet& other) {
    same_dimension(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    recount();
    return *this;
  }

  VertexSet& operator&=(const VertexSet& other) {
    same_dimension(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    recount();
    return *this;
  }

  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }

  bool is_subset_of(const VertexSet& other) const {
    same_dimension(other);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        const int b = std::countr_zero(w);
        f(Vertex{(static_cast<std::uint64_t>(i) << 6) | static_cast<std::uint64_t>(b)});
        w &= w - 1;
      }
    }
  }

  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    out.reserve(count_);
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
  }

  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.n_ == b.n_ && a.count_ == b.count_ && a.words_ == b.words_;
  }

 private:
  static std::size_t word_count(int n) { return n >= 6 ? (std::size_t{1} << (n - 6)) : 1; }

  void check(Vertex v) const {
    if (v.label >= universe_size()) throw ParameterError("vertex label outside {0,1}^n");
  }

  void same_dimension(const VertexSet& other) const {
    if (other.n_ != n_) throw ParameterError("vertex sets of different dimension");
  }

  void trim() {
    if (n_ < 6) words_[0] &= (std::uint64_t{1} << (std::uint64_t{1} << n_)) - 1;
  }

  void recount() {
    count_ = 0;
    for (auto w : words_) count_ += static_cast<std::uint64_t>(std::popcount(w));
  }

  int n_ = 0;
  std::uint64_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

/// All XOR masks of weight 1..k over n bits, by increasing weight then value.
class NeighborMasks {
 public:
  static constexpr std::uint64_t kMaxMasks = std::uint64_t{1} << 24;

  NeighborMasks(int n, int k) : n_(n), k_(k) {
    if (n > 32) throw CapacityError("neighbor masks are limited to n <= 32");
    const std::uint64_t total = ball_size(n, k);
    if (total > kMaxMasks) throw CapacityError("neighbor mask table too large for (n, k)");
    masks_.reserve(total);
    for (int w = 1; w <= k; ++w) {
      // Gosper's hack over all n-bit words of weight w.
      std::uint64_t m = (std::uint64_t{1} << w) - 1;
      const std::uint64_t limit = std::uint64_t{1} << n;
      while (m < limit) {
        masks_.push_back(static_cast<std::uint32_t>(m));
        const std::uint64_t c = m & (~m + 1);
        const std::uint64_t rr = m + c;
        m = (((rr ^ m) >> 2) / c) | rr;
      }
    }
  }

  int n() const { return n_; }
  int k() const { return k_; }
  std::span<const std::uint32_t> masks() const { return masks_; }
  std::size_t size() const { return masks_.size(); }

 private:
  int n_;
  int k_;
  std::vector<std::uint32_t> masks_;
};

/// Shared, lazily built mask table for (n, k).
inline std::shared_ptr<const NeighborMasks> neighbor_masks(int n, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const NeighborMasks>> cache;
  if (k < 1 || k > n) throw ParameterError("neighbor masks require 1 <= k <= n");
  std::lock_guard lock(mu);
  auto& slot = cache[{n, k}];
  if (!slot) slot = std::make_shared<const NeighborMasks>(n, k);
  return slot;
}

/// Lazily yields every u with 1 <= d(u, v) <= k.
inline auto neighbors(Vertex v, const GraphParams& params) {
  params.require_dense();
  auto table = neighbor_masks(params.n, params.k);
  std::span<const std::uint32_t> masks = table->masks();
  return masks | std::views::transform([v, keep = std::move(table)](std::uint32_t m) {
           return Vertex{v.label ^ m};
         });
}

inline VertexSet weight_layer(int n, int j) {
  if (j < 0 || j > n) throw ParameterError("weight layer index out of range");
  VertexSet out(n);
  const std::uint64_t total = std::uint64_t{1} << n;
  if (j == 0) {
    out.insert(Vertex{0});
    return out;
  }
  std::uint64_t m = (std::uint64_t{1} << j) - 1;
  while (m < total) {
    out.set_unchecked(m);
    const std::uint64_t c = m & (~m + 1);
    const std::uint64_t rr = m + c;
    m = (((rr ^ m) >> 2) / c) | rr;
  }
  return out;
}

/// {base ^ s : s subset of free_dims}.
inline VertexSet subcube_vertices(Vertex free_dims, Vertex base, int n) {
  require_dense_dimension(n);
  const std::uint64_t universe = std::uint64_t{1} << n;
  if (free_dims.label >= universe || base.label >= universe) {
    throw ParameterError("subcube masks exceed n bits");
  }
  if (free_dims.label & base.label) throw ParameterError("subcube base overlaps its free dimensions");
  VertexSet out(n);
  // Enumerate submasks of free_dims.
  std::uint64_t s = free_dims.label;
  while (true) {
    out.set_unchecked(base.label | s);
    if (s == 0) break;
    s = (s - 1) & free_dims.label;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text encoding

inline std::string format_vertex(Vertex v, int n) {
  std::string out(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if (v.coordinate(i)) out[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

/// Parses a binary string of length n (coordinate 0 first) or a "0x" hex label.
inline Vertex parse_vertex(std::string_view text, int n) {
  if (n < 1 || n > 64) throw ParameterError("vertex text encoding supports 1 <= n <= 64");
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    std::uint64_t value = 0;
    for (char ch : text.substr(2)) {
      int d;
      if (ch >= '0' && ch <= '9') d = ch - '0';
      else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
      else if (ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
      else throw ParameterError("bad hex digit in vertex '" + std::string(text) + "'");
      if (value >> 60) throw ParameterError("hex vertex too wide");
      value = (value << 4) | static_cast<std::uint64_t>(d);
    }
    if (n < 64 && (value >> n)) throw ParameterError("hex vertex exceeds n bits");
    return Vertex{value};
  }
  if (text.size() != static_cast<std::size_t>(n)) {
    throw ParameterError("vertex '" + std::string(text) + "' must have exactly " +
                         std::to_string(n) + " binary digits");
  }
  std::uint64_t value = 0;
  for (int i = 0; i < n; ++i) {
    const char ch = text[static_cast<std::size_t>(i)];
    if (ch == '1') value |= std::uint64_t{1} << i;
    else if (ch != '0') throw ParameterError("bad binary digit in vertex '" + std::string(text) + "'");
  }
  return Vertex{value};
}

}  // namespace percq
