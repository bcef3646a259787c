#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "oracles.hpp"
#include "uvkv/codes.hpp"

using namespace uvkv;

namespace {

UniPoly random_poly(Rng& rng, const FieldRef& f, std::size_t k) {
  std::vector<Symbol> c(k);
  for (auto& v : c) v = static_cast<Symbol>(rng.below(f->order()));
  return UniPoly(f, c);
}

// Horner with the oracle arithmetic.
Symbol eval_oracle(const Field& F, const UniPoly& p, Symbol x) {
  Symbol acc = 0;
  for (std::size_t i = p.coeffs().size(); i-- > 0;) acc = oracle::add(F, oracle::mul(F, acc, x), p.coeffs()[i]);
  return acc;
}

ReliabilityMatrix hard(const Field& F, const Word& y) {
  ReliabilityMatrix pi(F.order(), y.size(), 0.0);
  for (std::size_t j = 0; j < y.size(); ++j) pi(y[j], j) = 1;
  return pi;
}

// Hard decisions smoothed so every entry is positive.
ReliabilityMatrix soft_hard(const Field& F, const Word& y, double p) {
  ReliabilityMatrix pi(F.order(), y.size(), p / (F.order() - 1));
  for (std::size_t j = 0; j < y.size(); ++j) pi(y[j], j) = 1 - p;
  return pi;
}

}  // namespace

TEST_CASE("rs_new examples") {
  auto f5 = make_field(5);
  auto c = rs_new(f5, 4, 2);
  CHECK(c.points() == std::vector<Symbol>{0, 1, 2, 3});
  CHECK(c.length() == 4);
  CHECK(c.dimension() == 2);
  CHECK_THROWS(rs_new(make_field(2, 2), 5, 2));
  CHECK_THROWS(rs_new(f5, 3, 2, std::vector<Symbol>{1, 2, 1}));
  CHECK_THROWS(rs_new(f5, 3, 4));

  // rate 1: encode is a bijection of GF(5)^4
  auto full = rs_new(f5, 4, 4);
  std::set<Word> seen;
  for (Symbol m = 0; m < 625; ++m) {
    std::vector<Symbol> coef{m % 5, m / 5 % 5, m / 25 % 5, m / 125};
    seen.insert(full.encode(UniPoly(f5, coef)));
  }
  CHECK(seen.size() == 625);
}

TEST_CASE("encode examples") {
  auto f5 = make_field(5);
  auto c = rs_new(f5, 4, 2);
  CHECK(c.encode(UniPoly(f5)) == Word{0, 0, 0, 0});
  CHECK(c.encode(UniPoly(f5, {3})) == Word{3, 3, 3, 3});
  CHECK(c.encode(UniPoly(f5, {0, 1})) == Word{0, 1, 2, 3});
  CHECK_THROWS(c.encode(UniPoly(f5, {0, 0, 1})));
}

TEST_CASE("encode agrees with oracle evaluation and is linear") {
  Rng rng(11);
  for (auto [p, e] : {std::pair{7u, 1u}, {2u, 4u}, {3u, 2u}, {2u, 8u}}) {
    auto f = make_field(p, e);
    const Field& F = *f;
    for (int it = 0; it < 30; ++it) {
      const std::size_t n = 1 + rng.below(std::min<Symbol>(F.order(), 20));
      const std::size_t k = 1 + rng.below(n);
      auto code = rs_new(f, n, k);
      auto a = random_poly(rng, f, k), b = random_poly(rng, f, k);
      auto ca = code.encode(a), cb = code.encode(b), cab = code.encode(a + b);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(ca[j] == eval_oracle(F, a, code.points()[j]));
        CHECK(cab[j] == oracle::add(F, ca[j], cb[j]));
      }
      auto back = code.message_of(ca);
      REQUIRE(back.has_value());
      CHECK(*back == a);
    }
  }
}

TEST_CASE("message_of rejects non-codewords") {
  auto f = make_field(7);
  auto code = rs_new(f, 6, 2);
  auto w = code.encode(UniPoly(f, {1, 2}));
  w[5] = f->add(w[5], 1);
  CHECK_FALSE(code.contains(w));
}

TEST_CASE("MDS: minimum distance n-k+1 by exhaustive check") {
  Rng rng(3);
  for (int it = 0; it < 12; ++it) {
    auto f = it % 2 ? make_field(2, 3) : make_field(5);
    const std::size_t n = 2 + rng.below(f->order() - 1);
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(n, 3));
    // random distinct points
    std::vector<Symbol> all(f->order());
    for (Symbol i = 0; i < f->order(); ++i) all[i] = i;
    for (std::size_t i = all.size(); i > 1; --i) std::swap(all[i - 1], all[rng.below(i)]);
    all.resize(n);
    auto code = rs_new(f, n, k, all);
    std::vector<Word> words;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= f->order();
    for (std::uint64_t m = 0; m < total; ++m) {
      std::vector<Symbol> c(k);
      std::uint64_t r = m;
      for (auto& v : c) v = static_cast<Symbol>(r % f->order()), r /= f->order();
      words.push_back(code.encode(UniPoly(f, c)));
    }
    std::size_t dmin = n + 1;
    for (std::size_t a = 0; a < words.size(); ++a)
      for (std::size_t b = a + 1; b < words.size(); ++b) {
        std::size_t d = 0;
        for (std::size_t j = 0; j < n; ++j) d += words[a][j] != words[b][j];
        dmin = std::min(dmin, d);
      }
    if (words.size() > 1) CHECK(dmin == n - k + 1);
  }
}

TEST_CASE("lagrange interpolates") {
  Rng rng(5);
  auto f = make_field(3, 3);
  for (int it = 0; it < 20; ++it) {
    auto p = random_poly(rng, f, 1 + rng.below(6));
    std::vector<Symbol> xs, ys;
    for (Symbol x = 2; xs.size() < 6; x += 3) xs.push_back(x), ys.push_back(p.eval(x));
    CHECK(lagrange(f, xs, ys) == p);
  }
}

TEST_CASE("oracle_ml_decode examples") {
  // constant codes need n <= q, so length 3 over GF(3) and length 4 over GF(5)
  auto f3 = make_field(3);
  auto r = oracle_ml_decode(rs_new(f3, 3, 1), soft_hard(*f3, {2, 0, 2}, 0.1));
  CHECK(r.codeword == Word{2, 2, 2});
  auto f5r = make_field(5);
  r = oracle_ml_decode(rs_new(f5r, 4, 1), soft_hard(*f5r, {2, 2, 0, 2}, 0.1));
  CHECK(r.codeword == Word{2, 2, 2, 2});

  auto f5 = make_field(5);
  auto code = rs_new(f5, 4, 2);
  auto c = code.encode(UniPoly(f5, {4, 1}));
  CHECK(oracle_ml_decode(code, hard(*f5, c)).codeword == c);

  ReliabilityMatrix uni(5, 4, 0.2);
  auto u = oracle_ml_decode(code, uni);
  CHECK(u.message.is_zero());
  CHECK(u.codeword == Word{0, 0, 0, 0});

  auto f16 = make_field(2, 4);
  CHECK_THROWS(oracle_ml_decode(rs_new(f16, 16, 6), ReliabilityMatrix(16, 16, 1.0 / 16)));
}

TEST_CASE("oracle_ml_decode corrects up to half the distance, exhaustively") {
  // [5,2] over GF(5): every message, every error pattern of weight <= 1 and
  // every nonzero error value.
  auto f = make_field(5);
  auto code = rs_new(f, 5, 2);
  std::size_t checked = 0;
  for (Symbol m = 0; m < 25; ++m) {
    auto c = code.encode(UniPoly(f, {m % 5, m / 5}));
    CHECK(oracle_ml_decode(code, soft_hard(*f, c, 0.2)).codeword == c);
    for (std::size_t j = 0; j < 5; ++j)
      for (Symbol d = 1; d < 5; ++d) {
        auto y = c;
        y[j] = f->add(y[j], d);
        CHECK(oracle_ml_decode(code, soft_hard(*f, y, 0.2)).codeword == c);
        ++checked;
      }
  }
  CHECK(checked == 500);
}

TEST_CASE("log_likelihood") {
  auto f = make_field(2);
  ReliabilityMatrix pi(2, 2);
  pi(0, 0) = 0.9, pi(1, 0) = 0.1, pi(0, 1) = 0.25, pi(1, 1) = 0.75;
  CHECK(log_likelihood(pi, {0, 1}) == doctest::Approx(std::log(0.9 * 0.75)));
  pi(1, 1) = 0;
  CHECK(std::isinf(log_likelihood(pi, {0, 1})));
}
