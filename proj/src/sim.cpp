#include "uvkv/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "detail.hpp"
#include "uvkv/rng.hpp"

namespace uvkv {

std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0, 1};
  const double N = static_cast<double>(n), ph = static_cast<double>(k) / N, z2 = z * z;
  const double c = (ph + z2 / (2 * N)) / (1 + z2 / N);
  const double h = z * std::sqrt(ph * (1 - ph) / N + z2 / (4 * N * N)) / (1 + z2 / N);
  return {std::max(0.0, std::min(c - h, ph)), std::min(1.0, std::max(c + h, ph))};
}

SimResult simulate(const CodeTree& tree, const Channel& ch, const SimConfig& cfg) {
  if (!tree.field()->same(*ch.field())) throw std::invalid_argument("channel and tree use different fields");
  if (cfg.trials < 1) throw std::invalid_argument("need at least one trial");
  const auto t0 = std::chrono::steady_clock::now();
  const Symbol q = ch.q();
  const std::size_t outs = ch.outputs(), N = tree.length(), P = tree.leaf_count();

  Matrix<double> cdf(q, outs), apps(q, outs);
  for (Symbol x = 0; x < q; ++x) {
    double s = 0;
    for (std::size_t y = 0; y < outs; ++y) cdf(x, y) = s += ch(x, y);
  }
  for (std::size_t y = 0; y < outs; ++y) {
    if (output_probability(ch, y) > 0) apps.set_column(y, app(ch, y));
  }

  const std::uint64_t nblocks = (cfg.trials + detail::kBlock - 1) / detail::kBlock;
  struct Acc {
    std::uint64_t frames = 0, fallbacks = 0;
    std::vector<std::uint64_t> leaves;
  };
  std::vector<Acc> acc(nblocks);
  DecodeOptions opt;
  opt.L = cfg.L;
  opt.genie = cfg.genie;

  detail::run_blocks(nblocks, cfg.workers, [&](std::uint64_t b) {
    Acc& a = acc[b];
    a.leaves.assign(P, 0);
    for (std::uint64_t t = b * detail::kBlock; t < std::min(cfg.trials, (b + 1) * detail::kBlock); ++t) {
      Rng rng(cfg.seed, t);
      std::vector<UniPoly> msg;
      for (std::size_t i = 0; i < P; ++i) {
        std::vector<Symbol> c(tree.leaves()[i].k);
        for (auto& v : c) v = static_cast<Symbol>(rng.below(q));
        msg.emplace_back(tree.field(), std::move(c));
      }
      const Word cw = uuv_encode(tree, msg);
      ReliabilityMatrix pi(q, N);
      for (std::size_t j = 0; j < N; ++j) {
        const double u = rng.uniform() * cdf(cw[j], outs - 1);
        const double* row = &cdf(cw[j], 0);
        std::size_t y = static_cast<std::size_t>(std::upper_bound(row, row + outs, u) - row);
        if (y >= outs) y = outs - 1;
        while (ch(cw[j], y) == 0 && y > 0) --y;
        for (Symbol s = 0; s < q; ++s) pi(s, j) = apps(s, y);
      }
      DecodeResult r = uuv_decode(tree, pi, opt, &cw);
      bool leaf_err = false;
      for (auto& v : r.trace.visits) {
        if (!v.ok) ++a.leaves[v.leaf], leaf_err = true;
        a.fallbacks += v.fallback;
      }
      if (cfg.genie ? leaf_err : r.codeword != cw) ++a.frames;
    }
  });

  SimResult res;
  res.trials = cfg.trials;
  res.leaf_errors.assign(P, 0);
  for (auto& a : acc) {
    res.frame_errors += a.frames;
    res.fallbacks += a.fallbacks;
    for (std::size_t i = 0; i < P; ++i) res.leaf_errors[i] += a.leaves[i];
  }
  res.fer = static_cast<double>(res.frame_errors) / static_cast<double>(res.trials);
  std::tie(res.lo, res.hi) = wilson_interval(res.frame_errors, res.trials);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace uvkv
