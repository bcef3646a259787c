#pragma once

// Independent reference implementations used only by the tests.

#include <cstdint>
#include <vector>

#include "uvkv/gf.hpp"
#include "uvkv/rng.hpp"

namespace oracle {

// Field element as base-p digit vector; multiplication is schoolbook
// polynomial product reduced by the field modulus.
inline std::vector<unsigned> digits(uvkv::Symbol a, unsigned p, unsigned e) {
  std::vector<unsigned> d(e);
  for (unsigned i = 0; i < e; ++i) d[i] = a % p, a /= p;
  return d;
}

inline uvkv::Symbol undigits(const std::vector<unsigned>& d, unsigned p) {
  uvkv::Symbol a = 0;
  for (std::size_t i = d.size(); i-- > 0;) a = a * p + d[i];
  return a;
}

inline uvkv::Symbol mul(const uvkv::Field& F, uvkv::Symbol a, uvkv::Symbol b) {
  const unsigned p = F.characteristic(), e = F.degree();
  if (e == 1) return static_cast<uvkv::Symbol>((std::uint64_t(a) * b) % p);
  auto x = digits(a, p, e), y = digits(b, p, e);
  std::vector<unsigned> prod(2 * e - 1, 0);
  for (unsigned i = 0; i < e; ++i)
    for (unsigned j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
  const auto& mod = F.modulus();  // monic, length e+1
  for (std::size_t d = prod.size(); d-- > e;) {
    const unsigned c = prod[d];
    if (!c) continue;
    for (unsigned i = 0; i <= e; ++i) prod[d - e + i] = (prod[d - e + i] + p * p - c * mod[i] % p) % p;
  }
  prod.resize(e);
  return undigits(prod, p);
}

inline uvkv::Symbol add(const uvkv::Field& F, uvkv::Symbol a, uvkv::Symbol b) {
  const unsigned p = F.characteristic(), e = F.degree();
  auto x = digits(a, p, e), y = digits(b, p, e);
  for (unsigned i = 0; i < e; ++i) x[i] = (x[i] + y[i]) % p;
  return undigits(x, p);
}

// Exact binomial for small arguments.
inline std::uint64_t binom(unsigned a, unsigned r) {
  if (r > a) return 0;
  std::uint64_t v = 1;
  for (unsigned i = 1; i <= r; ++i) v = v * (a - r + i) / i;
  return v;
}

}  // namespace oracle
