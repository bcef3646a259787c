#include "uvkv/codes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace uvkv {

RSCode::RSCode(FieldRef f, std::size_t n, std::size_t k, std::optional<std::vector<Symbol>> points)
    : f_(std::move(f)), n_(n), k_(k) {
  if (n == 0 || n > f_->order()) throw std::invalid_argument("RS length must satisfy 1 <= n <= q");
  if (k == 0 || k > n) throw std::invalid_argument("RS dimension must satisfy 1 <= k <= n");
  if (points) {
    if (points->size() != n) throw std::invalid_argument("need exactly n evaluation points");
    std::vector<char> seen(f_->order(), 0);
    for (Symbol p : *points) {
      if (p >= f_->order()) throw std::invalid_argument("evaluation point out of range");
      if (seen[p]++) throw std::invalid_argument("duplicate evaluation point");
    }
    pts_ = *points;
  } else {
    for (std::size_t i = 0; i < n; ++i) pts_.push_back(static_cast<Symbol>(i));
  }
}

RSCode rs_new(FieldRef f, std::size_t n, std::size_t k, std::optional<std::vector<Symbol>> points) {
  return RSCode(std::move(f), n, k, std::move(points));
}

Word RSCode::encode(const UniPoly& message) const {
  if (message.degree() >= static_cast<int>(k_)) throw std::invalid_argument("message degree must be < k");
  Word c(n_);
  for (std::size_t j = 0; j < n_; ++j) c[j] = message.eval(pts_[j]);
  return c;
}

UniPoly lagrange(const FieldRef& f, const std::vector<Symbol>& xs, const std::vector<Symbol>& ys) {
  const Field& F = *f;
  const std::size_t k = xs.size();
  std::vector<Symbol> acc(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (ys[i] == 0) continue;
    // basis numerator prod_{j != i} (X - x_j), denominator prod (x_i - x_j)
    std::vector<Symbol> num{1};
    Symbol den = 1;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      std::vector<Symbol> nx(num.size() + 1, 0);
      for (std::size_t t = 0; t < num.size(); ++t) {
        nx[t + 1] = F.add(nx[t + 1], num[t]);
        nx[t] = F.sub(nx[t], F.mul(num[t], xs[j]));
      }
      num.swap(nx);
      den = F.mul(den, F.sub(xs[i], xs[j]));
    }
    const Symbol s = F.div(ys[i], den);
    for (std::size_t t = 0; t < k; ++t) acc[t] = F.add(acc[t], F.mul(num[t], s));
  }
  return UniPoly(f, std::move(acc));
}

std::optional<UniPoly> RSCode::message_of(const Word& w) const {
  if (w.size() != n_) return std::nullopt;
  std::vector<Symbol> xs(pts_.begin(), pts_.begin() + k_), ys(w.begin(), w.begin() + k_);
  UniPoly f = lagrange(f_, xs, ys);
  if (encode(f) != w) return std::nullopt;
  return f;
}

double log_likelihood(const ReliabilityMatrix& pi, const Word& c) {
  double s = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double v = pi(c[j], j);
    if (v <= 0) return -std::numeric_limits<double>::infinity();
    s += std::log(v);
  }
  return s;
}

MlResult oracle_ml_decode(const RSCode& code, const ReliabilityMatrix& pi) {
  const Field& F = *code.field();
  const std::size_t n = code.length(), k = code.dimension();
  const Symbol q = F.order();
  if (pi.rows() != q || pi.cols() != n) throw std::invalid_argument("reliability matrix shape mismatch");
  double total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= q;
  if (total > 1048576) throw std::invalid_argument("q^k exceeds 2^20 for the ML oracle");

  Matrix<double> lp(q, n);
  for (Symbol a = 0; a < q; ++a)
    for (std::size_t j = 0; j < n; ++j)
      lp(a, j) = pi(a, j) > 0 ? std::log(pi(a, j)) : -std::numeric_limits<double>::infinity();
  // pw(i, j) = P_j^i
  Matrix<Symbol> pw(k, n);
  for (std::size_t j = 0; j < n; ++j) {
    Symbol x = 1;
    for (std::size_t i = 0; i < k; ++i) pw(i, j) = x, x = F.mul(x, code.points()[j]);
  }

  // Odometer with c_{k-1} fastest, so the first maximum found is the
  // lexicographically smallest.
  std::vector<Symbol> m(k, 0), best_m(k, 0);
  Word c(n, 0);
  double best = -std::numeric_limits<double>::infinity();
  bool have = false;
  while (true) {
    for (std::size_t j = 0; j < n; ++j) {
      Symbol v = 0;
      for (std::size_t i = 0; i < k; ++i) v = F.add(v, F.mul(m[i], pw(i, j)));
      c[j] = v;
    }
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += lp(c[j], j);
    if (!have || s > best) {
      best = s;
      best_m = m;
      have = true;
    }
    std::size_t i = k;
    while (i > 0) {
      if (++m[i - 1] < q) break;
      m[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  UniPoly f(code.field(), best_m);
  return {f, code.encode(f), best};
}

}  // namespace uvkv
