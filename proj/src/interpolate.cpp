// Bivariate interpolation and Y-root extraction for the KV decoder.

#include <algorithm>
#include <stdexcept>

#include "uvkv/kv.hpp"

namespace uvkv {

unsigned binom_mod(std::uint64_t a, std::uint64_t r, unsigned p) {
  if (r > a) return 0;
  // Lucas: product of digit binomials.
  std::uint64_t res = 1;
  while (a || r) {
    const unsigned ad = static_cast<unsigned>(a % p), rd = static_cast<unsigned>(r % p);
    if (rd > ad) return 0;
    std::uint64_t num = 1, den = 1;
    for (unsigned i = 0; i < rd; ++i) {
      num = num * ((ad - i) % p) % p;
      den = den * ((i + 1) % p) % p;
    }
    // den^(p-2) mod p
    std::uint64_t inv = 1, b = den, e = p - 2;
    while (e) {
      if (e & 1) inv = inv * b % p;
      b = b * b % p;
      e >>= 1;
    }
    res = res * num % p * inv % p;
    a /= p, r /= p;
  }
  return static_cast<unsigned>(res);
}

// ---- BivariatePoly

void BivariatePoly::set(std::size_t i, std::size_t j, Symbol v) {
  if (rows_.size() <= j) rows_.resize(j + 1);
  if (rows_[j].size() <= i) rows_[j].resize(i + 1, 0);
  rows_[j][i] = v;
}

void BivariatePoly::trim() {
  for (auto& r : rows_)
    while (!r.empty() && r.back() == 0) r.pop_back();
  while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
}

bool BivariatePoly::is_zero() const {
  for (auto& r : rows_)
    for (Symbol c : r)
      if (c) return false;
  return true;
}

int BivariatePoly::y_degree() const {
  for (std::size_t j = rows_.size(); j-- > 0;)
    for (Symbol c : rows_[j])
      if (c) return static_cast<int>(j);
  return -1;
}

long BivariatePoly::weighted_degree() const {
  long w = -1;
  for (std::size_t j = 0; j < rows_.size(); ++j)
    for (std::size_t i = rows_[j].size(); i-- > 0;)
      if (rows_[j][i]) {
        w = std::max(w, static_cast<long>(i + wy_ * j));
        break;
      }
  return w;
}

void BivariatePoly::normalize() {
  const long w = weighted_degree();
  if (w < 0) return;
  Symbol lead = 0;
  for (std::size_t j = rows_.size(); j-- > 0 && !lead;) {
    const long i = w - static_cast<long>(wy_ * j);
    if (i >= 0) lead = coeff(static_cast<std::size_t>(i), j);
  }
  const Symbol inv = f_->inv(lead);
  for (auto& r : rows_)
    for (auto& c : r) c = f_->mul(c, inv);
}

bool BivariatePoly::operator==(const BivariatePoly& o) const {
  BivariatePoly a(*this), b(o);
  a.trim(), b.trim();
  return a.rows_ == b.rows_;
}

Symbol BivariatePoly::hasse(std::size_t r, std::size_t s, Symbol x, Symbol a) const {
  const Field& F = *f_;
  const unsigned p = F.characteristic();
  Symbol acc = 0;
  for (std::size_t j = s; j < rows_.size(); ++j) {
    const unsigned cj = binom_mod(j, s, p);
    if (!cj) continue;
    Symbol row = 0;
    for (std::size_t i = r; i < rows_[j].size(); ++i) {
      if (!rows_[j][i]) continue;
      const unsigned ci = binom_mod(i, r, p);
      if (!ci) continue;
      row = F.add(row, F.mul(F.mul(rows_[j][i], ci), F.pow(x, static_cast<long long>(i - r))));
    }
    acc = F.add(acc, F.mul(F.mul(row, cj), F.pow(a, static_cast<long long>(j - s))));
  }
  return acc;
}

UniPoly BivariatePoly::substitute(const UniPoly& f) const {
  UniPoly acc(f_), pw(f_, {1});
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    acc = acc + UniPoly(f_, rows_[j]) * pw;
    pw = pw * f;
  }
  return acc;
}

namespace {

// C(a, r) mod p for r <= R, rows grown on demand.
class Pascal {
 public:
  Pascal(unsigned p, unsigned R) : p_(p), R_(R) { t_.assign(R + 1, 0), t_[0] = 1; }
  const std::uint32_t* row(std::size_t a) {
    while (rows_ <= a) {
      t_.resize((rows_ + 1) * (R_ + 1), 0);
      std::uint32_t* cur = t_.data() + rows_ * (R_ + 1);
      const std::uint32_t* prev = cur - (R_ + 1);
      cur[0] = 1;
      for (unsigned r = 1; r <= R_; ++r) cur[r] = (prev[r - 1] + prev[r]) % p_;
      ++rows_;
    }
    return t_.data() + a * (R_ + 1);
  }
  unsigned get(std::size_t a, std::size_t r) { return r > a ? 0 : row(a)[r]; }

 private:
  unsigned p_, R_;
  std::size_t rows_ = 1;
  std::vector<std::uint32_t> t_;
};

// Monomial count with (1, w)-weighted degree <= D.
std::uint64_t monomials_upto(std::uint64_t D, std::uint64_t w) {
  std::uint64_t n = 0;
  for (std::uint64_t j = 0; j * w <= D; ++j) n += D - j * w + 1;
  return n;
}

}  // namespace

namespace {

// Field operations for the hot loops: dense tables when available.
template <bool Char2>
struct TableOps {
  const std::uint16_t* mt;
  Symbol q;
  const Field* F;
  Symbol mul(Symbol a, Symbol b) const { return mt[a * q + b]; }
  Symbol add(Symbol a, Symbol b) const {
    if constexpr (Char2)
      return a ^ b;
    else
      return F->add(a, b);
  }
};

struct SlowOps {
  const Field* F;
  Symbol mul(Symbol a, Symbol b) const { return F->mul(a, b); }
  Symbol add(Symbol a, Symbol b) const { return F->add(a, b); }
};

struct KPoly {
  std::vector<Symbol> c;  // flat, row b at off[b]
  long wdeg;
  std::size_t y;
  bool live = true;
};

bool lm_less(const KPoly& a, const KPoly& b) { return a.wdeg != b.wdeg ? a.wdeg < b.wdeg : a.y < b.y; }

template <class Ops>
BivariatePoly koetter(const RSCode& code, const MultiplicityMatrix& M, const Ops& ops) {
  const Field& F = *code.field();
  const std::size_t k = code.dimension(), n = code.length();
  const long w = static_cast<long>(k - 1);
  const std::uint64_t C = cost(M);
  std::uint64_t D64 = 0;
  while (monomials_upto(D64, w) <= C) ++D64;
  // A nonzero solution of weighted degree <= D exists. Candidates whose
  // leading monomial passes D can never become minimal and never modify a
  // candidate below D, so they are dropped.
  const long D = static_cast<long>(D64);
  const std::size_t rho = static_cast<std::size_t>(D / w);
  std::vector<std::size_t> off(rho + 2, 0);
  for (std::size_t b = 0; b <= rho; ++b) off[b + 1] = off[b] + static_cast<std::size_t>(D - w * static_cast<long>(b) + 1);

  unsigned mmax = 1;
  for (unsigned v : M.data()) mmax = std::max(mmax, v);
  Pascal pas(F.characteristic(), mmax);

  std::vector<KPoly> g(rho + 1);
  for (std::size_t j = 0; j <= rho; ++j) {
    g[j].c.assign(off[rho + 1], 0);
    g[j].c[off[j]] = 1;
    g[j].wdeg = w * static_cast<long>(j);
    g[j].y = j;
  }
  auto amax = [&](const KPoly& p, std::size_t b) { return p.wdeg - w * static_cast<long>(b); };

  std::vector<Symbol> wr(static_cast<std::size_t>(mmax) * (D + 1)), ws(rho + 1), apow(rho + 1);
  std::vector<Symbol> delta(rho + 1);
  for (std::size_t col = 0; col < n; ++col) {
    unsigned mc = 0;
    for (Symbol a = 0; a < F.order(); ++a) mc = std::max(mc, M(a, col));
    if (!mc) continue;
    const Symbol x = code.points()[col];
    // wr[r][a] = C(a, r) x^(a-r)
    for (unsigned r = 0; r < mc; ++r) {
      Symbol* row = &wr[static_cast<std::size_t>(r) * (D + 1)];
      Symbol xp = 1;
      for (long a = 0; a <= D; ++a) {
        if (a < static_cast<long>(r)) {
          row[a] = 0;
          continue;
        }
        const unsigned b = pas.get(static_cast<std::size_t>(a), r);
        row[a] = b ? ops.mul(xp, b % F.order()) : 0;
        xp = ops.mul(xp, x);
      }
    }
    for (Symbol alpha = 0; alpha < F.order(); ++alpha) {
      const unsigned m = M(alpha, col);
      if (!m) continue;
      apow[0] = 1;
      for (std::size_t b = 1; b <= rho; ++b) apow[b] = ops.mul(apow[b - 1], alpha);
      for (unsigned s = 0; s < m; ++s) {
        for (std::size_t b = 0; b <= rho; ++b)
          ws[b] = b < s ? 0 : (pas.get(b, s) ? ops.mul(apow[b - s], pas.get(b, s)) : 0);
        for (unsigned r = 0; r + s < m; ++r) {
          const Symbol* wrr = &wr[static_cast<std::size_t>(r) * (D + 1)];
          std::size_t piv = rho + 1;
          for (std::size_t t = 0; t <= rho; ++t) {
            KPoly& p = g[t];
            delta[t] = 0;
            if (!p.live) continue;
            Symbol acc = 0;
            for (std::size_t b = s; b <= rho; ++b) {
              const long am = amax(p, b);
              if (am < static_cast<long>(r)) break;
              if (!ws[b]) continue;
              const Symbol* cb = &p.c[off[b]];
              Symbol sum = 0;
              for (long a = r; a <= am; ++a) sum = ops.add(sum, ops.mul(wrr[a], cb[a]));
              if (sum) acc = ops.add(acc, ops.mul(ws[b], sum));
            }
            delta[t] = acc;
            if (acc && (piv > rho || lm_less(p, g[piv]))) piv = t;
          }
          if (piv > rho) continue;
          KPoly& gp = g[piv];
          const Symbol dinv = F.inv(delta[piv]);
          for (std::size_t t = 0; t <= rho; ++t) {
            if (t == piv || !delta[t]) continue;
            const Symbol cf = F.neg(ops.mul(delta[t], dinv));
            KPoly& p = g[t];
            for (std::size_t b = 0; b <= rho; ++b) {
              const long am = amax(gp, b);
              if (am < 0) break;
              const Symbol* src = &gp.c[off[b]];
              Symbol* dst = &p.c[off[b]];
              for (long a = 0; a <= am; ++a)
                if (src[a]) dst[a] = ops.add(dst[a], ops.mul(cf, src[a]));
            }
          }
          // g_piv *= (X - x)
          if (gp.wdeg + 1 > D) {
            gp.live = false;
            continue;
          }
          const Symbol nx = F.neg(x);
          for (std::size_t b = 0; b <= rho; ++b) {
            const long am = amax(gp, b);
            if (am < 0) break;
            Symbol* cb = &gp.c[off[b]];
            for (long a = am + 1; a > 0; --a) cb[a] = ops.add(cb[a - 1], ops.mul(nx, cb[a]));
            cb[0] = ops.mul(nx, cb[0]);
          }
          ++gp.wdeg;
        }
      }
    }
  }
  std::size_t best = rho + 1;
  for (std::size_t t = 0; t <= rho; ++t)
    if (g[t].live && (best > rho || lm_less(g[t], g[best]))) best = t;
  if (best > rho) throw std::logic_error("interpolation lost every candidate");
  BivariatePoly out(code.field(), static_cast<unsigned>(w));
  for (std::size_t b = 0; b <= rho; ++b)
    for (long a = 0; a <= D - w * static_cast<long>(b); ++a)
      if (Symbol v = g[best].c[off[b] + a]) out.set(static_cast<std::size_t>(a), b, v);
  out.trim();
  out.normalize();
  return out;
}

}  // namespace

BivariatePoly interpolate(const RSCode& code, const MultiplicityMatrix& M) {
  const Field& F = *code.field();
  if (code.dimension() < 2) throw std::invalid_argument("interpolation needs k >= 2");
  if (M.rows() != F.order() || M.cols() != code.length())
    throw std::invalid_argument("multiplicity matrix shape mismatch");
  if (cost(M) == 0) {
    BivariatePoly out(code.field(), static_cast<unsigned>(code.dimension() - 1));
    out.set(0, 0, 1);
    return out;
  }
  if (!F.mul_table().empty()) {
    if (F.characteristic() == 2) return koetter(code, M, TableOps<true>{F.mul_table().data(), F.order(), &F});
    return koetter(code, M, TableOps<false>{F.mul_table().data(), F.order(), &F});
  }
  return koetter(code, M, SlowOps{&F});
}

BivariatePoly interpolate_reference(const RSCode& code, const MultiplicityMatrix& M) {
  const Field& F = *code.field();
  const std::size_t k = code.dimension(), n = code.length();
  if (k < 2) throw std::invalid_argument("interpolation needs k >= 2");
  const unsigned w = static_cast<unsigned>(k - 1);
  const unsigned p = F.characteristic();

  struct Con {
    Symbol x, a;
    unsigned r, s;
  };
  std::vector<Con> cons;
  for (std::size_t col = 0; col < n; ++col)
    for (Symbol a = 0; a < F.order(); ++a)
      for (unsigned s = 0; s < M(a, col); ++s)
        for (unsigned r = 0; r + s < M(a, col); ++r) cons.push_back({code.points()[col], a, r, s});
  const std::size_t C = cons.size();

  std::vector<std::pair<std::size_t, std::size_t>> mono;  // (i, j) in order
  struct Basis {
    std::vector<Symbol> v, combo;
    std::size_t pivot;
  };
  std::vector<Basis> basis;
  for (std::size_t D = 0;; ++D) {
    for (std::size_t j = 0; j * w <= D; ++j) {
      const std::size_t i = D - j * w;
      mono.emplace_back(i, j);
      const std::size_t t = mono.size() - 1;
      std::vector<Symbol> v(C), combo(t + 1, 0);
      combo[t] = 1;
      for (std::size_t c = 0; c < C; ++c) {
        const Con& q = cons[c];
        if (i < q.r || j < q.s) continue;
        const unsigned b = binom_mod(i, q.r, p) * binom_mod(j, q.s, p) % p;
        if (!b) continue;
        v[c] = F.mul(F.mul(F.pow(q.x, static_cast<long long>(i - q.r)), F.pow(q.a, static_cast<long long>(j - q.s))), b);
      }
      for (const Basis& bs : basis) {
        if (!v[bs.pivot]) continue;
        const Symbol f = F.div(v[bs.pivot], bs.v[bs.pivot]);
        for (std::size_t c = 0; c < C; ++c) v[c] = F.sub(v[c], F.mul(f, bs.v[c]));
        for (std::size_t u = 0; u < bs.combo.size(); ++u) combo[u] = F.sub(combo[u], F.mul(f, bs.combo[u]));
      }
      std::size_t piv = C;
      for (std::size_t c = 0; c < C && piv == C; ++c)
        if (v[c]) piv = c;
      if (piv == C) {
        BivariatePoly out(code.field(), w);
        for (std::size_t u = 0; u <= t; ++u)
          if (combo[u]) out.set(mono[u].first, mono[u].second, combo[u]);
        out.trim();
        out.normalize();
        return out;
      }
      basis.push_back({std::move(v), std::move(combo), piv});
    }
  }
}

bool check_multiplicities(const BivariatePoly& q, const RSCode& code, const MultiplicityMatrix& M) {
  if (q.is_zero()) return false;
  const Field& F = *code.field();
  const unsigned p = F.characteristic();
  const auto& rows = q.rows();
  std::vector<std::vector<Symbol>> t(rows.size());
  for (std::size_t col = 0; col < code.length(); ++col) {
    unsigned mc = 0;
    for (Symbol a = 0; a < F.order(); ++a) mc = std::max(mc, M(a, col));
    if (!mc) continue;
    const Symbol x = code.points()[col];
    // t[b][r]: coefficient of X^r in row b shifted to X + x
    for (std::size_t b = 0; b < rows.size(); ++b) {
      t[b].assign(mc, 0);
      Symbol xp = 1;
      std::vector<Symbol> xpow(rows[b].size());
      for (auto& v : xpow) v = xp, xp = F.mul(xp, x);
      for (unsigned r = 0; r < mc; ++r)
        for (std::size_t a = r; a < rows[b].size(); ++a)
          if (rows[b][a])
            if (unsigned c = binom_mod(a, r, p))
              t[b][r] = F.add(t[b][r], F.mul(F.mul(rows[b][a], c), xpow[a - r]));
    }
    for (Symbol alpha = 0; alpha < F.order(); ++alpha) {
      const unsigned m = M(alpha, col);
      for (unsigned s = 0; s < m; ++s)
        for (unsigned r = 0; r + s < m; ++r) {
          Symbol acc = 0;
          for (std::size_t b = s; b < rows.size(); ++b)
            if (t[b][r])
              if (unsigned c = binom_mod(b, s, p))
                acc = F.add(acc, F.mul(F.mul(t[b][r], c), F.pow(alpha, static_cast<long long>(b - s))));
          if (acc) return false;
        }
    }
  }
  return true;
}

// ---- Roth-Ruckenstein

namespace {

using Rows = std::vector<std::vector<Symbol>>;

void strip_x(Rows& q) {
  std::size_t t = SIZE_MAX;
  for (auto& r : q) {
    while (!r.empty() && r.back() == 0) r.pop_back();
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i]) {
        t = std::min(t, i);
        break;
      }
  }
  while (!q.empty() && q.back().empty()) q.pop_back();
  if (t == SIZE_MAX || t == 0) return;
  for (auto& r : q)
    if (r.size() > t)
      r.erase(r.begin(), r.begin() + static_cast<long>(t));
    else
      r.clear();
}

// Q(X, XY + g) with the X-power stripped.
Rows shift(const Rows& q, Symbol g, const Field& F, Pascal& pas) {
  const std::size_t ny = q.size();
  Rows out(ny);
  std::vector<Symbol> gp(ny, 1);
  for (std::size_t j = 1; j < ny; ++j) gp[j] = F.mul(gp[j - 1], g);
  for (std::size_t s = 0; s < ny; ++s) {
    std::vector<Symbol> acc;
    for (std::size_t j = s; j < ny; ++j) {
      if (q[j].empty()) continue;
      const unsigned b = pas.get(j, s);
      if (!b) continue;
      const Symbol c = F.mul(gp[j - s], b);
      if (!c) continue;
      if (acc.size() < q[j].size()) acc.resize(q[j].size(), 0);
      for (std::size_t i = 0; i < q[j].size(); ++i)
        if (q[j][i]) acc[i] = F.add(acc[i], F.mul(c, q[j][i]));
    }
    while (!acc.empty() && acc.back() == 0) acc.pop_back();
    if (!acc.empty()) acc.insert(acc.begin(), s, 0);  // times X^s
    out[s] = std::move(acc);
  }
  strip_x(out);
  return out;
}

void rr(const Rows& q, std::size_t depth, std::size_t k, std::vector<Symbol>& f, const Field& F, Pascal& pas,
        std::vector<std::vector<Symbol>>& found) {
  if (depth == k) {
    found.push_back(f);
    return;
  }
  // roots of Q(0, Y)
  std::vector<Symbol> q0(q.size(), 0);
  for (std::size_t j = 0; j < q.size(); ++j) q0[j] = q[j].empty() ? 0 : q[j][0];
  while (!q0.empty() && q0.back() == 0) q0.pop_back();
  if (q0.empty()) return;
  for (Symbol g = 0; g < F.order(); ++g) {
    Symbol v = 0;
    for (std::size_t j = q0.size(); j-- > 0;) v = F.add(F.mul(v, g), q0[j]);
    if (v) continue;
    f[depth] = g;
    rr(shift(q, g, F, pas), depth + 1, k, f, F, pas, found);
  }
}

}  // namespace

std::vector<UniPoly> factor_y_roots(const BivariatePoly& q, std::size_t k) {
  if (q.is_zero()) throw std::invalid_argument("cannot factor the zero polynomial");
  if (k < 1) throw std::invalid_argument("need k >= 1");
  const Field& F = *q.field();
  Rows rows = q.rows();
  strip_x(rows);
  Pascal pas(F.characteristic(), static_cast<unsigned>(rows.size()));
  std::vector<Symbol> f(k, 0);
  std::vector<std::vector<Symbol>> found;
  rr(rows, 0, k, f, F, pas, found);
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  std::vector<UniPoly> out;
  for (auto& c : found) {
    UniPoly p(q.field(), c);
    if (q.substitute(p).is_zero()) out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const UniPoly& a, const UniPoly& b) { return a.lex_less(b); });
  return out;
}

}  // namespace uvkv
