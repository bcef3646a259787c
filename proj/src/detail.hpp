#pragma once

#include <functional>

// Internal helpers shared by the channel sources.

#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "uvkv/channel.hpp"

namespace uvkv::detail {

constexpr double kMergeTol = 1e-10;

struct QKey {
  std::vector<std::int64_t> v;
  bool operator==(const QKey& o) const { return v == o.v; }
};

struct QKeyHash {
  std::size_t operator()(const QKey& k) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto x : k.v) {
      h ^= static_cast<std::uint64_t>(x);
      h *= 0x100000001b3ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

// Relative tolerance: coordinates are keyed by log value, so outputs whose
// small posteriors differ by orders of magnitude are never conflated.
inline QKey quantize(const double* pi, std::size_t n) {
  QKey k;
  k.v.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    k.v[i] = pi[i] > 0 ? std::llround(std::log(pi[i]) / kMergeTol) : INT64_MIN;
  return k;
}

// Lookup of probability vectors up to the merge tolerance.
class VecIndex {
 public:
  void insert(const std::vector<double>& pi, std::size_t id) { m_.emplace(quantize(pi.data(), pi.size()), id); }
  std::optional<std::size_t> find(const std::vector<double>& pi) const {
    auto it = m_.find(quantize(pi.data(), pi.size()));
    if (it == m_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::unordered_map<QKey, std::size_t, QKeyHash> m_;
};

// Accumulates output columns, merging those with equal APP vectors.
class Merger {
 public:
  explicit Merger(std::size_t q) : q_(q), pi_(q) {}

  void add(const double* col) {
    double s = 0;
    for (std::size_t x = 0; x < q_; ++x) s += col[x];
    if (s <= 0) return;
    for (std::size_t x = 0; x < q_; ++x) pi_[x] = col[x] / s;
    auto [it, fresh] = idx_.emplace(quantize(pi_.data(), q_), cols_.size() / q_);
    if (fresh) cols_.resize(cols_.size() + q_, 0.0);
    double* c = cols_.data() + it->second * q_;
    for (std::size_t x = 0; x < q_; ++x) c[x] += col[x];
  }

  std::size_t size() const { return cols_.size() / q_; }

  Channel channel(const FieldRef& f) const {
    const std::size_t n = size();
    Matrix<double> w(q_, n);
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < q_; ++x) w(x, y) = cols_[y * q_ + x];
    for (std::size_t x = 0; x < q_; ++x) {
      double s = 0;
      for (std::size_t y = 0; y < n; ++y) s += w(x, y);
      for (std::size_t y = 0; y < n; ++y) w(x, y) /= s;
    }
    return Channel(f, std::move(w), 1e-9);
  }

 private:
  std::size_t q_;
  std::vector<double> pi_;
  std::vector<double> cols_;
  std::unordered_map<QKey, std::size_t, QKeyHash> idx_;
};

constexpr std::uint64_t kBlock = 256;

// Runs fn(block) for all blocks on `workers` threads; blocks are fixed-size
// trial ranges, so aggregation in block order is worker independent.
void run_blocks(std::uint64_t nblocks, unsigned workers, const std::function<void(std::uint64_t)>& fn);

}  // namespace uvkv::detail
