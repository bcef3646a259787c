#include "uvkv/kv.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace uvkv {

ReliabilityMatrix reliability(const Channel& ch, const std::vector<std::size_t>& received) {
  ReliabilityMatrix pi(ch.q(), received.size());
  for (std::size_t j = 0; j < received.size(); ++j) pi.set_column(j, app(ch, received[j]));
  return pi;
}

namespace {

// Greedy increments of the entry maximizing pi/(m+1); ties to the smallest
// (row, column).
class Greedy {
 public:
  explicit Greedy(const ReliabilityMatrix& pi) : pi_(pi), m_(pi.rows(), pi.cols(), 0) {
    for (std::size_t i = 0; i < pi.rows(); ++i)
      for (std::size_t j = 0; j < pi.cols(); ++j) heap_.push({pi(i, j), i, j});
  }

  // Returns the new multiplicity of the incremented entry.
  unsigned step() {
    Item it = heap_.top();
    heap_.pop();
    unsigned& m = m_(it.row, it.col);
    ++m;
    heap_.push({pi_(it.row, it.col) / (m + 1), it.row, it.col});
    return m;
  }

  MultiplicityMatrix& m() { return m_; }

 private:
  struct Item {
    double v;
    std::size_t row, col;
    bool operator<(const Item& o) const {
      if (v != o.v) return v < o.v;
      return std::tie(row, col) > std::tie(o.row, o.col);
    }
  };
  const ReliabilityMatrix& pi_;
  MultiplicityMatrix m_;
  std::priority_queue<Item> heap_;
};

}  // namespace

MultiplicityMatrix multiplicity_assign(const ReliabilityMatrix& pi, std::uint64_t s) {
  if (s < 1) throw std::invalid_argument("need s >= 1");
  Greedy g(pi);
  for (std::uint64_t t = 0; t < s; ++t) g.step();
  return g.m();
}

std::uint64_t cost(const MultiplicityMatrix& m) {
  std::uint64_t c = 0;
  for (unsigned v : m.data()) c += std::uint64_t(v) * (v + 1) / 2;
  return c;
}

double list_bound(const MultiplicityMatrix& m, std::size_t k) {
  if (k < 2) throw std::invalid_argument("list bound needs k >= 2");
  return std::sqrt(2.0 * static_cast<double>(cost(m)) / static_cast<double>(k - 1));
}

MultiplicityChoice choose_multiplicities_for_list(const ReliabilityMatrix& pi, double L, std::size_t k) {
  if (L < 1) throw std::invalid_argument("need L >= 1");
  if (k < 2) throw std::invalid_argument("need k >= 2");
  Greedy g(pi);
  std::uint64_t c = 0, s = 0;
  const double need = L * L * static_cast<double>(k - 1) / 2;
  while (static_cast<double>(c) < need) {
    c += g.step();
    ++s;
  }
  MultiplicityChoice r;
  r.m = g.m();
  r.s = s;
  r.list_bound = std::sqrt(2.0 * static_cast<double>(c) / static_cast<double>(k - 1));
  r.overshoot = r.list_bound >= L + 1;
  return r;
}

double inner_pi_pi(const ReliabilityMatrix& pi) {
  double s = 0;
  for (double v : pi.data()) s += v * v;
  return s;
}

double success_score(const ReliabilityMatrix& pi, const Word& c) {
  if (c.size() != pi.cols()) throw std::invalid_argument("codeword length mismatch");
  double num = 0;
  for (std::size_t j = 0; j < c.size(); ++j) num += pi(c[j], j);
  return num / std::sqrt(inner_pi_pi(pi));
}

double rhs_bound(std::size_t k, double L, Symbol q, std::size_t n) {
  if (k < 2) throw std::invalid_argument("rhs bound needs k >= 2");
  const double R = static_cast<double>(k - 1) / n;
  const double den = 1 - (1 / L) * (1 / R + std::sqrt(static_cast<double>(q)) / (2 * std::sqrt(R)));
  if (!(den > 0)) throw std::domain_error("list size too small for this (q, R*)");
  return std::sqrt(static_cast<double>(k - 1)) / den;
}

double rhs_bound_variant(std::size_t k, double L, std::size_t n, double pi_pi) {
  if (k < 2) throw std::invalid_argument("rhs bound needs k >= 2");
  const double R = static_cast<double>(k - 1) / n;
  const double den = 1 - (1 / L) * (1 / R + std::sqrt(static_cast<double>(n)) / (2 * std::sqrt(R * pi_pi)));
  if (!(den > 0)) throw std::domain_error("list size too small for this (n, R*)");
  return std::sqrt(static_cast<double>(k - 1)) / den;
}

KvResult kv_decode(const RSCode& code, const ReliabilityMatrix& pi, double L, bool verify) {
  const std::size_t k = code.dimension();
  if (k < 2) throw std::invalid_argument("kv_decode needs k >= 2");
  if (pi.rows() != code.field()->order() || pi.cols() != code.length())
    throw std::invalid_argument("reliability matrix shape mismatch");
  KvResult res;
  MultiplicityChoice mc = choose_multiplicities_for_list(pi, L, k);
  res.diag.s = mc.s;
  res.diag.cost = cost(mc.m);
  res.diag.list_bound = mc.list_bound;
  res.diag.overshoot = mc.overshoot;
  BivariatePoly q = interpolate(code, mc.m);
  res.diag.weighted_degree = q.weighted_degree();
  if (verify) {
    res.diag.constraints_checked = true;
    res.diag.constraints_ok = check_multiplicities(q, code, mc.m);
  }
  for (UniPoly& f : factor_y_roots(q, k)) {
    Word c = code.encode(f);
    const double ll = log_likelihood(pi, c);
    res.list.push_back({std::move(f), std::move(c), ll});
  }
  std::sort(res.list.begin(), res.list.end(), [](const Candidate& a, const Candidate& b) {
    if (a.log_likelihood != b.log_likelihood) return a.log_likelihood > b.log_likelihood;
    return a.message.lex_less(b.message);
  });
  return res;
}

}  // namespace uvkv
