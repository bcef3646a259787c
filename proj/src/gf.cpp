#include "uvkv/gf.hpp"

#include <algorithm>
#include <stdexcept>

namespace uvkv {

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::pair<unsigned, unsigned> prime_power(unsigned q) {
  if (q < 2) throw std::invalid_argument("not a prime power: " + std::to_string(q));
  unsigned p = 2;
  while (q % p) ++p;
  unsigned e = 0, r = q;
  while (r % p == 0) r /= p, ++e;
  if (r != 1) throw std::invalid_argument("not a prime power: " + std::to_string(q));
  return {p, e};
}

namespace {

using Digits = std::vector<unsigned>;

Digits to_digits(Symbol a, unsigned p, unsigned e) {
  Digits d(e);
  for (unsigned i = 0; i < e; ++i) d[i] = a % p, a /= p;
  return d;
}

Symbol from_digits(const Digits& d, unsigned p) {
  Symbol a = 0;
  for (std::size_t i = d.size(); i-- > 0;) a = a * p + d[i];
  return a;
}

// r = a mod m over GF(p); m monic. Degrees implied by vector sizes.
Digits poly_mod(Digits a, const Digits& m, unsigned p) {
  const std::size_t dm = m.size() - 1;
  for (std::size_t i = a.size(); i-- > dm;) {
    unsigned c = a[i];
    if (!c) continue;
    for (std::size_t j = 0; j <= dm; ++j)
      a[i - dm + j] = (a[i - dm + j] + (p - c) * m[j]) % p;
  }
  a.resize(std::min(a.size(), dm));
  return a;
}

bool divides(const Digits& f, const Digits& g, unsigned p) {
  for (unsigned c : poly_mod(g, f, p))
    if (c) return false;
  return true;
}

bool irreducible(const Digits& g, unsigned p) {
  const unsigned e = static_cast<unsigned>(g.size()) - 1;
  for (unsigned d = 1; 2 * d <= e; ++d) {
    unsigned count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (unsigned t = 0; t < count; ++t) {
      Digits f = to_digits(t, p, d);
      f.push_back(1);
      if (divides(f, g, p)) return false;
    }
  }
  return true;
}

}  // namespace

FieldRef Field::make(unsigned p, unsigned e) {
  if (!is_prime(p)) throw std::invalid_argument("characteristic " + std::to_string(p) + " is not prime");
  if (e == 0) throw std::invalid_argument("extension degree must be positive");
  unsigned long long q = 1;
  for (unsigned i = 0; i < e; ++i) {
    q *= p;
    if (q > 65536) throw std::invalid_argument("field order exceeds 2^16");
  }
  std::shared_ptr<Field> f(new Field());
  f->p_ = p;
  f->e_ = e;
  f->q_ = static_cast<Symbol>(q);
  const Symbol Q = f->q_;

  if (e > 1) {
    for (Symbol t = 0; t < Q; ++t) {
      Digits g = to_digits(t, p, e);
      g.push_back(1);
      if (irreducible(g, p)) {
        f->modulus_ = g;
        break;
      }
    }
  }

  auto slow_mul = [&](Symbol a, Symbol b) -> Symbol {
    if (e == 1) return static_cast<Symbol>((1ull * a * b) % p);
    Digits x = to_digits(a, p, e), y = to_digits(b, p, e), z(2 * e - 1, 0);
    for (unsigned i = 0; i < e; ++i)
      for (unsigned j = 0; j < e; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % p;
    return from_digits(poly_mod(z, f->modulus_, p), p);
  };

  f->neg_.resize(Q);
  for (Symbol a = 0; a < Q; ++a) {
    Digits d = to_digits(a, p, e);
    for (auto& c : d) c = (p - c) % p;
    f->neg_[a] = from_digits(d, p);
  }

  // Smallest generator of the multiplicative group.
  f->exp_.assign(2 * (Q - 1), 0);
  f->log_.assign(Q, 0);
  if (Q == 2) {
    f->exp_ = {1, 1};
  } else {
    for (Symbol g = 2; g < Q; ++g) {
      Symbol x = 1;
      unsigned ord = 0;
      do {
        x = slow_mul(x, g);
        ++ord;
      } while (x != 1);
      if (ord != Q - 1) continue;
      x = 1;
      for (unsigned i = 0; i < Q - 1; ++i) {
        f->exp_[i] = f->exp_[i + Q - 1] = x;
        f->log_[x] = i;
        x = slow_mul(x, g);
      }
      break;
    }
  }

  if (Q <= 256) {
    f->add_.resize(Q * Q);
    f->mul_.resize(Q * Q);
    for (Symbol a = 0; a < Q; ++a)
      for (Symbol b = 0; b < Q; ++b) {
        f->add_[a * Q + b] = static_cast<std::uint16_t>(f->add_slow(a, b));
        f->mul_[a * Q + b] =
            static_cast<std::uint16_t>((a && b) ? f->exp_[f->log_[a] + f->log_[b]] : 0);
      }
  }
  return f;
}

FieldRef make_field(unsigned p, unsigned e) { return Field::make(p, e); }

Symbol Field::add_slow(Symbol a, Symbol b) const {
  if (p_ == 2) return a ^ b;
  Symbol r = 0, place = 1;
  while (a || b) {
    r += ((a % p_ + b % p_) % p_) * place;
    a /= p_, b /= p_, place *= p_;
  }
  return r;
}

Symbol Field::inv(Symbol a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

unsigned Field::log(Symbol a) const {
  if (a == 0) throw std::domain_error("log of zero");
  return log_[a];
}

Symbol Field::pow(Symbol a, long long n) const {
  if (a == 0) {
    if (n < 0) throw std::domain_error("inverse of zero");
    return n == 0 ? 1 : 0;
  }
  long long m = static_cast<long long>(q_) - 1;
  long long r = (static_cast<long long>(log_[a]) * (n % m)) % m;
  if (r < 0) r += m;
  return exp_[r];
}

std::string Field::name() const {
  return "GF(" + std::to_string(q_) + ")";
}

// ---- FieldElement

FieldElement::FieldElement(FieldRef f, Symbol v) : f_(std::move(f)), v_(v) {
  if (!f_) throw std::invalid_argument("null field");
  if (v_ >= f_->order()) throw std::invalid_argument("element index out of range");
}

const FieldElement& FieldElement::check(const FieldElement& o) const {
  if (f_ != o.f_ && !f_->same(*o.f_)) throw std::invalid_argument("elements from different fields");
  return o;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  return {f_, f_->add(v_, check(o).v_)};
}
FieldElement FieldElement::operator-(const FieldElement& o) const {
  return {f_, f_->sub(v_, check(o).v_)};
}
FieldElement FieldElement::operator*(const FieldElement& o) const {
  return {f_, f_->mul(v_, check(o).v_)};
}
FieldElement FieldElement::operator/(const FieldElement& o) const {
  return {f_, f_->div(v_, check(o).v_)};
}
FieldElement FieldElement::operator-() const { return {f_, f_->neg(v_)}; }
FieldElement FieldElement::inv() const { return {f_, f_->inv(v_)}; }
FieldElement FieldElement::pow(long long n) const { return {f_, f_->pow(v_, n)}; }
bool FieldElement::operator==(const FieldElement& o) const {
  return v_ == check(o).v_;
}

// ---- UniPoly

UniPoly::UniPoly(FieldRef f, std::vector<Symbol> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {
  for (Symbol c : c_)
    if (c >= f_->order()) throw std::invalid_argument("coefficient out of range");
  trim();
}

UniPoly UniPoly::monomial(FieldRef f, unsigned deg, Symbol c) {
  std::vector<Symbol> v(deg + 1, 0);
  v[deg] = c;
  return UniPoly(std::move(f), std::move(v));
}

void UniPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void UniPoly::check(const UniPoly& o) const {
  if (f_ != o.f_ && !f_->same(*o.f_)) throw std::invalid_argument("polynomials over different fields");
}

Symbol UniPoly::eval(Symbol x) const {
  Symbol r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = f_->add(f_->mul(r, x), c_[i]);
  return r;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  check(o);
  std::vector<Symbol> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f_->add((*this)[i], o[i]);
  return UniPoly(f_, std::move(r));
}

UniPoly UniPoly::operator-(const UniPoly& o) const {
  check(o);
  std::vector<Symbol> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f_->sub((*this)[i], o[i]);
  return UniPoly(f_, std::move(r));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
  check(o);
  if (is_zero() || o.is_zero()) return UniPoly(f_);
  std::vector<Symbol> r(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j)
      r[i + j] = f_->add(r[i + j], f_->mul(c_[i], o.c_[j]));
  }
  return UniPoly(f_, std::move(r));
}

UniPoly UniPoly::scale(Symbol a) const {
  std::vector<Symbol> r(c_);
  for (auto& c : r) c = f_->mul(c, a);
  return UniPoly(f_, std::move(r));
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& d) const {
  check(d);
  if (d.is_zero()) throw std::domain_error("division by zero polynomial");
  if (degree() < d.degree()) return {UniPoly(f_), *this};
  std::vector<Symbol> rem(c_), quo(c_.size() - d.c_.size() + 1, 0);
  const Symbol lead_inv = f_->inv(d.c_.back());
  const std::size_t dd = d.c_.size() - 1;
  for (std::size_t i = rem.size(); i-- > dd;) {
    Symbol t = f_->mul(rem[i], lead_inv);
    quo[i - dd] = t;
    if (!t) continue;
    for (std::size_t j = 0; j <= dd; ++j) rem[i - dd + j] = f_->sub(rem[i - dd + j], f_->mul(t, d.c_[j]));
  }
  rem.resize(dd);
  return {UniPoly(f_, std::move(quo)), UniPoly(f_, std::move(rem))};
}

std::vector<Symbol> UniPoly::roots() const {
  std::vector<Symbol> r;
  if (is_zero()) {
    for (Symbol a = 0; a < f_->order(); ++a) r.push_back(a);
    return r;
  }
  for (Symbol a = 0; a < f_->order(); ++a)
    if (eval(a) == 0) r.push_back(a);
  return r;
}

bool UniPoly::operator==(const UniPoly& o) const {
  check(o);
  return c_ == o.c_;
}

bool UniPoly::lex_less(const UniPoly& o) const {
  const std::size_t n = std::max(c_.size(), o.c_.size());
  for (std::size_t i = 0; i < n; ++i)
    if ((*this)[i] != o[i]) return (*this)[i] < o[i];
  return false;
}

}  // namespace uvkv
