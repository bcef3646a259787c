#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "uvkv/channel.hpp"
#include "uvkv/uuv.hpp"

namespace uvkv {

struct SimConfig {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double L = 16;
  bool genie = false;
};

struct SimResult {
  std::uint64_t trials = 0;
  std::uint64_t frame_errors = 0;
  double fer = 0;
  double lo = 0, hi = 0;                   // Wilson 95%
  std::vector<std::uint64_t> leaf_errors;  // by leaf index
  std::uint64_t fallbacks = 0;             // leaves decoded without a KV list
  double seconds = 0;                      // wall time, not deterministic
};

// Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

// Uniform random messages, transmission over ch, uuv_decode. Trial t uses
// Rng(seed, t), so results do not depend on the worker count.
SimResult simulate(const CodeTree& tree, const Channel& ch, const SimConfig& cfg);

}  // namespace uvkv
