// APP laws of evolved channels: exact q-SC configuration enumeration,
// evolution-based laws, and Monte-Carlo sampling.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <thread>
#include <unordered_map>

#include "detail.hpp"
#include "uvkv/channel.hpp"
#include "uvkv/rng.hpp"

namespace uvkv {

AppVector sigma_canonical(const AppVector& pi) {
  AppVector c(pi);
  if (c.size() > 1) std::sort(c.begin() + 1, c.end(), std::greater<double>());
  return c;
}

double ChannelLaw::total() const {
  double s = 0;
  for (const auto& e : entries) s += e.prob;
  return s;
}

InfoSummary ChannelLaw::summary() const {
  InfoSummary s;
  double h = 0;
  for (const auto& e : entries) {
    s.kv_capacity += e.prob * app_sqnorm(e.pi);
    s.bhattacharyya += e.prob * app_bhattacharyya(e.pi);
    h += e.prob * app_entropy(e.pi);
  }
  s.capacity = std::clamp(1 - h, 0.0, 1.0);
  return s;
}

namespace {

// ---- sparse APP vectors: constant background plus listed points

struct Sparse {
  double bg = 0;
  std::vector<std::pair<Symbol, double>> pts;  // sorted by key, full values
};

Sparse normalized(Sparse s, double q, bool& degenerate) {
  double sum = (q - static_cast<double>(s.pts.size())) * s.bg;
  for (auto& [k, v] : s.pts) sum += v;
  if (!(sum > 0)) {
    degenerate = true;
    return Sparse{1 / q, {}};
  }
  s.bg /= sum;
  for (auto& [k, v] : s.pts) v /= sum;
  return s;
}

// u-side update with known v = 0
Sparse sp_times(const Sparse& f, const Sparse& g, double q, bool& degenerate) {
  Sparse r;
  r.bg = f.bg * g.bg;
  std::size_t i = 0, j = 0;
  while (i < f.pts.size() || j < g.pts.size()) {
    if (j == g.pts.size() || (i < f.pts.size() && f.pts[i].first < g.pts[j].first)) {
      r.pts.emplace_back(f.pts[i].first, f.pts[i].second * g.bg);
      ++i;
    } else if (i == f.pts.size() || g.pts[j].first < f.pts[i].first) {
      r.pts.emplace_back(g.pts[j].first, g.pts[j].second * f.bg);
      ++j;
    } else {
      r.pts.emplace_back(f.pts[i].first, f.pts[i].second * g.pts[j].second);
      ++i, ++j;
    }
  }
  return normalized(std::move(r), q, degenerate);
}

// v-side update: h(a) = sum_b f(b) g(a+b)
Sparse sp_oplus(const Sparse& f, const Sparse& g, const Field& F, double q, bool& degenerate) {
  double sf = 0, sg = 0;
  for (auto& [k, v] : f.pts) sf += v - f.bg;
  for (auto& [k, v] : g.pts) sg += v - g.bg;
  Sparse r;
  r.bg = q * f.bg * g.bg + f.bg * sg + g.bg * sf;
  std::vector<std::pair<Symbol, double>> acc;
  acc.reserve(f.pts.size() * g.pts.size());
  for (auto& [s, vf] : f.pts) {
    const double df = vf - f.bg;
    if (df == 0) continue;
    for (auto& [t, vg] : g.pts) {
      const double dg = vg - g.bg;
      if (dg != 0) acc.emplace_back(F.sub(t, s), df * dg);
    }
  }
  std::sort(acc.begin(), acc.end(), [](auto& a, auto& b) { return a.first < b.first; });
  for (auto& [k, v] : acc) {
    if (!r.pts.empty() && r.pts.back().first == k)
      r.pts.back().second += v;
    else
      r.pts.emplace_back(k, r.bg + v);
  }
  for (auto& [k, v] : r.pts) v = std::max(v, 0.0);
  return normalized(std::move(r), q, degenerate);
}

struct Stats {
  double kv = 0, z = 0, h = 0;
};

Stats sp_stats(const Sparse& s, double q) {
  const double rest = q - static_cast<double>(s.pts.size());
  Stats st;
  double root = rest * std::sqrt(s.bg), ent = s.bg > 0 ? -rest * s.bg * std::log(s.bg) : 0;
  st.kv = rest * s.bg * s.bg;
  for (auto& [k, v] : s.pts) {
    st.kv += v * v;
    root += std::sqrt(v);
    if (v > 0) ent -= v * std::log(v);
  }
  st.z = std::clamp((root * root - 1) / (q - 1), 0.0, 1.0);
  st.h = ent / std::log(q);
  return st;
}

AppVector sp_canonical(const Sparse& s, Symbol q) {
  AppVector c;
  c.reserve(q);
  double v0 = s.bg;
  std::vector<double> rest;
  for (auto& [k, v] : s.pts) {
    if (k == 0)
      v0 = v;
    else
      rest.push_back(v);
  }
  const bool zero_listed = !s.pts.empty() && s.pts.front().first == 0;
  std::size_t nbg = q - s.pts.size() - (zero_listed ? 0 : 1);
  rest.insert(rest.end(), nbg, s.bg);
  std::sort(rest.begin(), rest.end(), std::greater<double>());
  c.push_back(v0);
  c.insert(c.end(), rest.begin(), rest.end());
  return c;
}

// Applies the path transforms level by level: level t combines adjacent pairs
// with the op of bit t. Returns all 2^ell leaf vectors, x_1 most significant.
template <class V, class Times, class Oplus>
std::vector<V> all_paths(std::vector<V> leaves, unsigned ell, Times&& times, Oplus&& oplus) {
  std::vector<std::vector<V>> cur{std::move(leaves)};
  for (unsigned t = 0; t < ell; ++t) {
    std::vector<std::vector<V>> next;
    next.reserve(cur.size() * 2);
    for (auto& grp : cur)
      for (int bit = 0; bit < 2; ++bit) {
        std::vector<V> out;
        out.reserve(grp.size() / 2);
        for (std::size_t i = 0; i + 1 < grp.size(); i += 2)
          out.push_back(bit ? oplus(grp[i], grp[i + 1]) : times(grp[i], grp[i + 1]));
        next.push_back(std::move(out));
      }
    cur = std::move(next);
  }
  std::vector<V> res;
  res.reserve(cur.size());
  for (auto& grp : cur) res.push_back(std::move(grp.front()));
  return res;
}

// Gaussian binomial sum: number of d x N RREF matrices over F_p, d <= dmax.
double config_count(unsigned p, unsigned N, unsigned dmax) {
  // [N choose d]_p via recurrence on N.
  std::vector<double> row(dmax + 1, 0.0);
  row[0] = 1;
  for (unsigned n = 1; n <= N; ++n) {
    for (unsigned d = std::min(n, dmax); d >= 1; --d) row[d] = row[d - 1] + std::pow(p, d) * row[d];
  }
  double s = 0;
  for (double v : row) s += v;
  return s;
}

// Exact law of the q-SC leaf APPs under all-zero transmission. The received
// error tuple is classified by the RREF of its coordinates over F_p; all
// tuples of a class give the same APPs up to a linear relabelling of F_q that
// fixes 0, and the class has prod_{i<d}(q - p^i) members.
void enumerate_qsc(const Field& F, double perr, unsigned ell,
                   const std::function<void(double, const std::vector<Sparse>&)>& visit, bool& degenerate) {
  const unsigned p = F.characteristic(), e = F.degree();
  const double q = F.order();
  const unsigned N = 1u << ell;
  const double r = perr / (q - 1);
  const unsigned dmax = std::min(N, e);
  std::vector<Symbol> ppow(dmax + 1, 1);
  for (unsigned i = 1; i <= dmax; ++i) ppow[i] = ppow[i - 1] * p;

  auto times = [&](const Sparse& a, const Sparse& b) { return sp_times(a, b, q, degenerate); };
  auto oplus = [&](const Sparse& a, const Sparse& b) { return sp_oplus(a, b, F, q, degenerate); };

  std::vector<Symbol> keys(N);
  std::vector<Sparse> leaves(N);
  for (unsigned d = 0; d <= dmax; ++d) {
    double count = 1;
    for (unsigned i = 0; i < d; ++i) count *= q - ppow[i];
    // pivot sets as bitmasks with popcount d
    for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
      if (static_cast<unsigned>(__builtin_popcount(mask)) != d) continue;
      std::vector<unsigned> piv;
      for (unsigned j = 0; j < N; ++j)
        if (mask >> j & 1) piv.push_back(j);
      // free slots (row, column)
      std::vector<std::pair<unsigned, unsigned>> slots;
      for (unsigned i = 0; i < d; ++i)
        for (unsigned j = piv[i] + 1; j < N; ++j)
          if (!(mask >> j & 1)) slots.emplace_back(i, j);
      std::vector<unsigned> val(slots.size(), 0);
      while (true) {
        std::fill(keys.begin(), keys.end(), 0);
        for (unsigned i = 0; i < d; ++i) keys[piv[i]] = ppow[i];
        for (std::size_t s = 0; s < slots.size(); ++s) keys[slots[s].second] += val[s] * ppow[slots[s].first];
        unsigned zeros = 0;
        for (unsigned j = 0; j < N; ++j) {
          zeros += keys[j] == 0;
          leaves[j].bg = r;
          leaves[j].pts.assign(1, {keys[j], 1 - perr});
        }
        const double w = count * std::pow(1 - perr, zeros) * std::pow(r, N - zeros);
        if (w > 0) visit(w, all_paths(leaves, ell, times, oplus));
        std::size_t s = 0;
        while (s < val.size() && ++val[s] == p) val[s++] = 0;
        if (s == val.size()) break;
      }
    }
  }
}

bool qsc_config_feasible(const Channel& ch, unsigned ell, const LawMode& mode) {
  if (ell > 4 || !qsc_parameter(ch)) return false;
  const Field& F = *ch.field();
  return config_count(F.characteristic(), 1u << ell, std::min(1u << ell, F.degree())) <=
         static_cast<double>(mode.max_configs);
}

// ---- dense Monte-Carlo machinery

struct DenseOps {
  const Field& F;
  Symbol q;
  bool walsh;

  AppVector times(const AppVector& a, const AppVector& b) const {
    AppVector r(q);
    double s = 0;
    for (Symbol i = 0; i < q; ++i) s += r[i] = a[i] * b[i];
    if (!(s > 0)) return AppVector(q, 1.0 / q);
    for (auto& v : r) v /= s;
    return r;
  }

  static void fwht(AppVector& v) {
    for (std::size_t h = 1; h < v.size(); h <<= 1)
      for (std::size_t i = 0; i < v.size(); i += 2 * h)
        for (std::size_t j = i; j < i + h; ++j) {
          double x = v[j], y = v[j + h];
          v[j] = x + y, v[j + h] = x - y;
        }
  }

  AppVector oplus(const AppVector& a, const AppVector& b) const {
    AppVector r(q, 0.0);
    if (walsh) {
      AppVector x(a), y(b);
      fwht(x), fwht(y);
      for (Symbol i = 0; i < q; ++i) r[i] = x[i] * y[i];
      fwht(r);
      for (auto& v : r) v = std::max(v / q, 0.0);
    } else {
      for (Symbol be = 0; be < q; ++be) {
        if (a[be] == 0) continue;
        for (Symbol al = 0; al < q; ++al) r[al] += a[be] * b[F.add(al, be)];
      }
    }
    double s = 0;
    for (double v : r) s += v;
    for (auto& v : r) v /= s;
    return r;
  }
};


// Samples the leaf APP vectors for one trial and calls visit with the
// 2^ell path results (dense or sparse depending on the channel).
class Sampler {
 public:
  Sampler(const Channel& ch, unsigned ell) : ch_(ch), ell_(ell), F_(*ch.field()), q_(ch.q()) {
    auto p = qsc_parameter(ch);
    sparse_ = p.has_value();
    perr_ = p.value_or(0);
    cdf_.resize(ch.outputs());
    double s = 0;
    for (std::size_t y = 0; y < ch.outputs(); ++y) cdf_[y] = s += ch(0, y);
    if (!sparse_) {
      apps_.resize(ch.outputs());
      for (std::size_t y = 0; y < ch.outputs(); ++y)
        if (output_probability(ch, y) > 0) apps_[y] = app(ch, y);
    }
  }

  // Returns per-path (stats, canonical vector if wanted).
  std::vector<Stats> trial(std::uint64_t index, std::uint64_t seed, std::vector<AppVector>* canon) const {
    Rng rng(seed, index);
    const unsigned N = 1u << ell_;
    std::vector<Stats> out;
    bool degenerate = false;
    if (sparse_) {
      const double q = q_, r = perr_ / (q - 1);
      std::vector<Sparse> leaves(N);
      for (auto& l : leaves) {
        Symbol err = 0;
        if (rng.uniform() < perr_) err = 1 + static_cast<Symbol>(rng.below(q_ - 1));
        l.bg = r;
        l.pts.assign(1, {err, 1 - perr_});
      }
      auto res = all_paths(
          std::move(leaves), ell_, [&](const Sparse& a, const Sparse& b) { return sp_times(a, b, q, degenerate); },
          [&](const Sparse& a, const Sparse& b) { return sp_oplus(a, b, F_, q, degenerate); });
      for (auto& s : res) {
        out.push_back(sp_stats(s, q));
        if (canon) canon->push_back(sp_canonical(s, q_));
      }
    } else {
      std::vector<AppVector> leaves(N);
      for (auto& l : leaves) {
        const double u = rng.uniform() * cdf_.back();
        std::size_t y = std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin();
        if (y >= cdf_.size()) y = cdf_.size() - 1;
        while (apps_[y].empty()) --y;
        l = apps_[y];
      }
      DenseOps ops{F_, q_, F_.characteristic() == 2};
      auto res = all_paths(
          std::move(leaves), ell_, [&](const AppVector& a, const AppVector& b) { return ops.times(a, b); },
          [&](const AppVector& a, const AppVector& b) { return ops.oplus(a, b); });
      for (auto& v : res) {
        Stats st{app_sqnorm(v), app_bhattacharyya(v), app_entropy(v)};
        out.push_back(st);
        if (canon) canon->push_back(sigma_canonical(v));
      }
    }
    return out;
  }

 private:
  const Channel& ch_;
  unsigned ell_;
  const Field& F_;
  Symbol q_;
  bool sparse_ = false;
  double perr_ = 0;
  std::vector<double> cdf_;
  std::vector<AppVector> apps_;
};

std::vector<PathInfo> mc_path_info(const Channel& ch, unsigned ell, const LawMode& mode) {
  const std::size_t P = std::size_t(1) << ell;
  Sampler smp(ch, ell);
  const std::uint64_t nblocks = (mode.trials + detail::kBlock - 1) / detail::kBlock;
  std::vector<std::vector<double>> sums(nblocks, std::vector<double>(4 * P, 0.0));
  detail::run_blocks(nblocks, mode.workers, [&](std::uint64_t b) {
    auto& acc = sums[b];
    for (std::uint64_t t = b * detail::kBlock; t < std::min(mode.trials, (b + 1) * detail::kBlock); ++t) {
      auto st = smp.trial(t, mode.seed, nullptr);
      for (std::size_t i = 0; i < P; ++i) {
        acc[4 * i] += st[i].kv;
        acc[4 * i + 1] += st[i].kv * st[i].kv;
        acc[4 * i + 2] += st[i].z;
        acc[4 * i + 3] += st[i].h;
      }
    }
  });
  std::vector<double> tot(4 * P, 0.0);
  for (auto& s : sums)
    for (std::size_t i = 0; i < tot.size(); ++i) tot[i] += s[i];
  std::vector<PathInfo> out(P);
  const double T = static_cast<double>(mode.trials);
  for (std::size_t i = 0; i < P; ++i) {
    const double m = tot[4 * i] / T;
    out[i].info = {std::clamp(1 - tot[4 * i + 3] / T, 0.0, 1.0), tot[4 * i + 2] / T, m};
    out[i].kv_stderr = std::sqrt(std::max(0.0, tot[4 * i + 1] / T - m * m) / T);
    out[i].method = "monte-carlo";
  }
  return out;
}

ChannelLaw finish_law(Symbol q, std::unordered_map<detail::QKey, LawEntry, detail::QKeyHash>& acc) {
  ChannelLaw law;
  law.q = q;
  for (auto& [k, e] : acc) law.entries.push_back(std::move(e));
  std::sort(law.entries.begin(), law.entries.end(), [](const LawEntry& a, const LawEntry& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.pi < b.pi;
  });
  return law;
}

void add_entry(std::unordered_map<detail::QKey, LawEntry, detail::QKeyHash>& acc, AppVector pi, double w) {
  auto key = detail::quantize(pi.data(), pi.size());
  auto it = acc.find(key);
  if (it == acc.end())
    acc.emplace(std::move(key), LawEntry{std::move(pi), w});
  else
    it->second.prob += w;
}

std::uint64_t path_index(const std::string& path) {
  std::uint64_t x = 0;
  for (char c : path) {
    if (c != '0' && c != '1') throw std::invalid_argument("path must be a bit string");
    x = 2 * x + (c - '0');
  }
  return x;
}

}  // namespace

ChannelLaw channel_law(const Channel& ch, const std::string& path, const LawMode& mode) {
  const unsigned ell = static_cast<unsigned>(path.size());
  const std::uint64_t target = path_index(path);
  std::unordered_map<detail::QKey, LawEntry, detail::QKeyHash> acc;

  if (mode.kind == LawMode::monte_carlo) {
    if (ell > 16) throw std::invalid_argument("path too long for Monte-Carlo sampling");
    Sampler smp(ch, ell);
    const std::uint64_t nblocks = (mode.trials + detail::kBlock - 1) / detail::kBlock;
    std::vector<std::vector<AppVector>> got(nblocks);
    detail::run_blocks(nblocks, mode.workers, [&](std::uint64_t b) {
      for (std::uint64_t t = b * detail::kBlock; t < std::min(mode.trials, (b + 1) * detail::kBlock); ++t) {
        std::vector<AppVector> canon;
        smp.trial(t, mode.seed, &canon);
        got[b].push_back(std::move(canon[target]));
      }
    });
    const double w = 1.0 / static_cast<double>(mode.trials);
    for (auto& blk : got)
      for (auto& v : blk) add_entry(acc, std::move(v), w);
    return finish_law(ch.q(), acc);
  }

  if (!is_cyclic_symmetric(ch))
    throw std::invalid_argument("exact sigma-law requires a cyclic-symmetric channel");

  if (qsc_config_feasible(ch, ell, mode)) {
    const Field& F = *ch.field();
    bool degenerate = false;
    enumerate_qsc(F, *qsc_parameter(ch), ell, [&](double w, const std::vector<Sparse>& res) {
      add_entry(acc, sp_canonical(res[target], F.order()), w);
    }, degenerate);
    return finish_law(ch.q(), acc);
  }

  const Channel w = evolve(ch, path, mode.limits);
  for (std::size_t y = 0; y < w.outputs(); ++y) {
    const double p0 = w(0, y);
    if (p0 > 0) add_entry(acc, sigma_canonical(app(w, y)), p0);
  }
  return finish_law(ch.q(), acc);
}

namespace {

void evolve_dfs(const Channel& w, unsigned depth, unsigned ell, std::uint64_t prefix, const EvolveLimits& lim,
                std::vector<PathInfo>& out) {
  if (depth == ell) {
    out[prefix] = {info(w), "exact-evolve", 0};
    return;
  }
  for (int bit = 0; bit < 2; ++bit) evolve_dfs(transform(w, bit, lim), depth + 1, ell, 2 * prefix + bit, lim, out);
}

}  // namespace

std::vector<PathInfo> all_path_info(const Channel& ch, unsigned ell, const LawMode& mode) {
  if (ell > 16) throw std::invalid_argument("depth too large");
  const std::size_t P = std::size_t(1) << ell;
  if (mode.kind == LawMode::monte_carlo) return mc_path_info(ch, ell, mode);

  if (qsc_config_feasible(ch, ell, mode)) {
    const Field& F = *ch.field();
    const double q = F.order();
    std::vector<double> kv(P, 0), z(P, 0), h(P, 0);
    bool degenerate = false;
    enumerate_qsc(F, *qsc_parameter(ch), ell, [&](double w, const std::vector<Sparse>& res) {
      for (std::size_t i = 0; i < P; ++i) {
        Stats st = sp_stats(res[i], q);
        kv[i] += w * st.kv, z[i] += w * st.z, h[i] += w * st.h;
      }
    }, degenerate);
    std::vector<PathInfo> out(P);
    for (std::size_t i = 0; i < P; ++i)
      out[i] = {{std::clamp(1 - h[i], 0.0, 1.0), std::clamp(z[i], 0.0, 1.0), kv[i]}, "exact-config", 0};
    return out;
  }

  std::vector<PathInfo> out(P);
  try {
    evolve_dfs(ch, 0, ell, 0, mode.limits, out);
    return out;
  } catch (const BlowupError&) {
    if (!mode.allow_monte_carlo) throw;
    return mc_path_info(ch, ell, mode);
  }
}

void detail::run_blocks(std::uint64_t nblocks, unsigned workers, const std::function<void(std::uint64_t)>& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(nblocks, 256))));
  if (workers == 1) {
    for (std::uint64_t b = 0; b < nblocks; ++b) fn(b);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::uint64_t b = w; b < nblocks; b += workers) fn(b);
    });
  for (auto& t : pool) t.join();
}

}  // namespace uvkv
