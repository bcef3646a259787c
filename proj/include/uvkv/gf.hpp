#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace uvkv {

using Symbol = std::uint32_t;

class Field;
using FieldRef = std::shared_ptr<const Field>;

// GF(p^e), elements are indices in [0, q). Index digits in base p are the
// coefficients of the polynomial representation, lowest degree first, so
// addition is digit-wise mod p.
class Field {
 public:
  static FieldRef make(unsigned p, unsigned e);

  unsigned characteristic() const { return p_; }
  unsigned degree() const { return e_; }
  Symbol order() const { return q_; }
  // Monic, lowest degree first, length e+1. Empty for prime fields.
  const std::vector<unsigned>& modulus() const { return modulus_; }
  Symbol primitive() const { return exp_[1]; }

  bool same(const Field& o) const {
    return p_ == o.p_ && e_ == o.e_ && modulus_ == o.modulus_;
  }

  Symbol add(Symbol a, Symbol b) const {
    if (p_ == 2) return a ^ b;
    if (!add_.empty()) return add_[a * q_ + b];
    return add_slow(a, b);
  }
  Symbol neg(Symbol a) const {
    if (p_ == 2) return a;
    return neg_[a];
  }
  Symbol sub(Symbol a, Symbol b) const { return add(a, neg(b)); }
  Symbol mul(Symbol a, Symbol b) const {
    if (!mul_.empty()) return mul_[a * q_ + b];
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Symbol inv(Symbol a) const;
  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }
  Symbol pow(Symbol a, long long n) const;
  unsigned log(Symbol a) const;  // a != 0
  Symbol exp(unsigned i) const { return exp_[i % (q_ - 1)]; }

  // Dense q*q tables, present only when q <= 256.
  const std::vector<std::uint16_t>& mul_table() const { return mul_; }

  std::string name() const;

 private:
  Field() = default;
  Symbol add_slow(Symbol a, Symbol b) const;

  unsigned p_ = 0, e_ = 0;
  Symbol q_ = 0;
  std::vector<unsigned> modulus_;
  std::vector<Symbol> exp_;  // length 2(q-1)
  std::vector<unsigned> log_;
  std::vector<Symbol> neg_;
  std::vector<std::uint16_t> add_, mul_;
};

FieldRef make_field(unsigned p, unsigned e = 1);
bool is_prime(unsigned n);

// Splits q = p^e; throws if q is not a prime power.
std::pair<unsigned, unsigned> prime_power(unsigned q);

class FieldElement {
 public:
  FieldElement(FieldRef f, Symbol v);

  const FieldRef& field() const { return f_; }
  Symbol value() const { return v_; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement inv() const;
  FieldElement pow(long long n) const;
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

 private:
  const FieldElement& check(const FieldElement& o) const;
  FieldRef f_;
  Symbol v_;
};

class UniPoly {
 public:
  explicit UniPoly(FieldRef f, std::vector<Symbol> coeffs = {});

  const FieldRef& field() const { return f_; }
  const std::vector<Symbol>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  Symbol operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }

  Symbol eval(Symbol x) const;
  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scale(Symbol a) const;
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const;
  // Distinct roots, increasing index order.
  std::vector<Symbol> roots() const;

  bool operator==(const UniPoly& o) const;
  bool operator!=(const UniPoly& o) const { return !(*this == o); }
  // Lexicographic on (c_0, c_1, ...) after padding with zeros.
  bool lex_less(const UniPoly& o) const;

  static UniPoly monomial(FieldRef f, unsigned deg, Symbol c = 1);

 private:
  void trim();
  void check(const UniPoly& o) const;
  FieldRef f_;
  std::vector<Symbol> c_;
};

}  // namespace uvkv
