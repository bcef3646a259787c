// Rigorous Z brackets for binary-input channels at depths where exact
// evolution is out of reach. Each step is followed by a degrading merge
// (outputs binned by LLR and summed) or an upgrading split (each output
// written as a nonnegative mix of the two bin-edge outputs). The transforms
// preserve the degradation order and Z is monotone under it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "uvkv/channel.hpp"

namespace uvkv {

namespace {

struct Out {
  double a, b;  // W(y|0), W(y|1)
};
using Bin = std::vector<Out>;

class Grid {
 public:
  explicit Grid(unsigned m, double span = 40.0) {
    // edges: -inf, llr_0..llr_{m-1}, +inf
    for (unsigned i = 0; i < m; ++i) llr_.push_back(-span + 2 * span * i / (m - 1));
  }
  std::size_t edges() const { return llr_.size() + 2; }

  // Edge index e in [0, edges()); edge 0 is LLR -inf.
  double llr(std::size_t e) const {
    if (e == 0) return -std::numeric_limits<double>::infinity();
    if (e == edges() - 1) return std::numeric_limits<double>::infinity();
    return llr_[e - 1];
  }
  // Interval [e, e+1] containing the LLR.
  std::size_t interval(double l) const {
    if (l == -std::numeric_limits<double>::infinity()) return 0;
    if (l == std::numeric_limits<double>::infinity()) return edges() - 2;
    std::size_t k = std::upper_bound(llr_.begin(), llr_.end(), l) - llr_.begin();
    return std::min(k, edges() - 2);
  }

 private:
  std::vector<double> llr_;
};

double llr_of(const Out& o) {
  if (o.b == 0) return std::numeric_limits<double>::infinity();
  if (o.a == 0) return -std::numeric_limits<double>::infinity();
  return std::log(o.a) - std::log(o.b);
}

// Fraction of mass going to the upper edge when (a,b) at LLR l is written as
// a mix of the edge outputs at LLRs lo < hi. Uses the smaller posterior for
// accuracy far from zero.
double upper_share(double l, double lo, double hi) {
  auto small = [](double x) { return 1 / (1 + std::exp(std::abs(x))); };
  if (l >= 0 && lo >= 0) {
    // fractions of b: u = 1/(1+e^l), decreasing in l
    const double u = small(l), ulo = small(lo), uhi = std::isinf(hi) ? 0.0 : small(hi);
    return (ulo - u) / (ulo - uhi);
  }
  if (l <= 0 && hi <= 0) {
    // fractions of a: t = 1/(1+e^-l), increasing in l
    const double t = small(l), tlo = std::isinf(lo) ? 0.0 : small(lo), thi = small(hi);
    return (t - tlo) / (thi - tlo);
  }
  const double t = 1 / (1 + std::exp(-l)), tlo = 1 / (1 + std::exp(-lo)), thi = 1 / (1 + std::exp(-hi));
  return (t - tlo) / (thi - tlo);
}

Bin quantize(const Bin& in, const Grid& g, bool upgrade) {
  const std::size_t E = g.edges();
  Bin out(upgrade ? E : E - 1, Out{0, 0});
  for (const Out& o : in) {
    if (o.a + o.b <= 0) continue;
    const double l = llr_of(o);
    const std::size_t k = g.interval(l);
    if (!upgrade) {
      out[k].a += o.a, out[k].b += o.b;
      continue;
    }
    const double lo = g.llr(k), hi = g.llr(k + 1);
    double w;
    if (l == lo)
      w = 0;
    else if (l == hi)
      w = 1;
    else
      w = std::clamp(upper_share(l, lo, hi), 0.0, 1.0);
    const double s = o.a + o.b;
    auto put = [&](std::size_t e, double mass) {
      if (mass <= 0) return;
      const double L = g.llr(e);
      if (L == std::numeric_limits<double>::infinity()) {
        out[e].a += mass;
      } else if (L == -std::numeric_limits<double>::infinity()) {
        out[e].b += mass;
      } else {
        out[e].a += mass / (1 + std::exp(-L)), out[e].b += mass / (1 + std::exp(L));
      }
    };
    put(k, s * (1 - w));
    put(k + 1, s * w);
  }
  Bin packed;
  for (const Out& o : out)
    if (o.a + o.b > 0) packed.push_back(o);
  return packed;
}

Bin step(const Bin& w, int bit) {
  Bin r;
  r.reserve(w.size() * w.size() * (bit ? 1 : 2));
  for (const Out& p : w)
    for (const Out& s : w) {
      if (bit) {
        r.push_back({0.5 * (p.a * s.a + p.b * s.b), 0.5 * (p.a * s.b + p.b * s.a)});
      } else {
        r.push_back({0.5 * p.a * s.a, 0.5 * p.b * s.b});
        r.push_back({0.5 * p.a * s.b, 0.5 * p.b * s.a});
      }
    }
  return r;
}

double z_of(const Bin& w) {
  double z = 0;
  for (const Out& o : w) z += std::sqrt(o.a * o.b);
  return std::min(1.0, z);
}

void dfs(const Bin& w, unsigned depth, unsigned ell, std::uint64_t prefix, const Grid& g, bool upgrade,
         std::vector<double>& out) {
  if (depth == ell) {
    out[prefix] = z_of(w);
    return;
  }
  for (int bit = 0; bit < 2; ++bit) dfs(quantize(step(w, bit), g, upgrade), depth + 1, ell, 2 * prefix + bit, g, upgrade, out);
}

}  // namespace

std::vector<ZBounds> binary_z_bounds(const Channel& ch, unsigned ell, unsigned bins) {
  if (ch.q() != 2) throw std::invalid_argument("Z bracketing needs a binary-input channel");
  if (bins < 4) throw std::invalid_argument("need at least 4 bins");
  if (ell > 20) throw std::invalid_argument("depth too large");
  Grid g(bins);
  Bin w0;
  for (std::size_t y = 0; y < ch.outputs(); ++y) w0.push_back({ch(0, y), ch(1, y)});
  const std::size_t P = std::size_t(1) << ell;
  std::vector<double> lo(P), hi(P);
  dfs(quantize(w0, g, true), 0, ell, 0, g, true, lo);
  dfs(quantize(w0, g, false), 0, ell, 0, g, false, hi);
  std::vector<ZBounds> r(P);
  for (std::size_t i = 0; i < P; ++i) r[i] = {lo[i], hi[i]};
  return r;
}

}  // namespace uvkv
