#pragma once

#include <cstdint>
#include <vector>

#include "uvkv/channel.hpp"
#include "uvkv/codes.hpp"

namespace uvkv {

using MultiplicityMatrix = Matrix<unsigned>;

// Q(X,Y) = sum a_{ij} X^i Y^j with (1, wy)-weighted degree.
class BivariatePoly {
 public:
  BivariatePoly(FieldRef f, unsigned wy) : f_(std::move(f)), wy_(wy) {}

  const FieldRef& field() const { return f_; }
  unsigned y_weight() const { return wy_; }
  // rows()[j][i] is the coefficient of X^i Y^j.
  std::vector<std::vector<Symbol>>& rows() { return rows_; }
  const std::vector<std::vector<Symbol>>& rows() const { return rows_; }

  Symbol coeff(std::size_t i, std::size_t j) const {
    return j < rows_.size() && i < rows_[j].size() ? rows_[j][i] : 0;
  }
  void set(std::size_t i, std::size_t j, Symbol v);
  void trim();
  bool is_zero() const;
  int y_degree() const;            // -1 for zero
  long weighted_degree() const;    // -1 for zero
  // Coefficient of X^r Y^s in Q(X+x, Y+a).
  Symbol hasse(std::size_t r, std::size_t s, Symbol x, Symbol a) const;
  // Q(X, f(X))
  UniPoly substitute(const UniPoly& f) const;
  // Makes the coefficient of the leading monomial 1.
  void normalize();
  bool operator==(const BivariatePoly& o) const;

 private:
  FieldRef f_;
  unsigned wy_;
  std::vector<std::vector<Symbol>> rows_;
};

// C(a, r) mod p, p prime.
unsigned binom_mod(std::uint64_t a, std::uint64_t r, unsigned p);

ReliabilityMatrix reliability(const Channel& ch, const std::vector<std::size_t>& received);

MultiplicityMatrix multiplicity_assign(const ReliabilityMatrix& pi, std::uint64_t s);
std::uint64_t cost(const MultiplicityMatrix& m);
double list_bound(const MultiplicityMatrix& m, std::size_t k);

struct MultiplicityChoice {
  MultiplicityMatrix m;
  std::uint64_t s = 0;
  double list_bound = 0;
  bool overshoot = false;  // list bound reached L + 1 in the final step
};
MultiplicityChoice choose_multiplicities_for_list(const ReliabilityMatrix& pi, double L, std::size_t k);

// Minimal (1, k-1)-weighted degree polynomial with the prescribed zeros,
// leading coefficient 1. Monomials with equal weighted degree are ordered by
// Y-degree.
BivariatePoly interpolate(const RSCode& code, const MultiplicityMatrix& m);
// Same contract, by incremental Gaussian elimination. Cubic in the cost.
BivariatePoly interpolate_reference(const RSCode& code, const MultiplicityMatrix& m);
bool check_multiplicities(const BivariatePoly& q, const RSCode& code, const MultiplicityMatrix& m);

// All f with deg f < k and (Y - f(X)) | Q, by Roth-Ruckenstein.
std::vector<UniPoly> factor_y_roots(const BivariatePoly& q, std::size_t k);

struct Candidate {
  UniPoly message;
  Word codeword;
  double log_likelihood;
};

struct KvDiagnostics {
  std::uint64_t s = 0;
  std::uint64_t cost = 0;
  double list_bound = 0;
  long weighted_degree = 0;
  bool overshoot = false;
  bool constraints_checked = false;
  bool constraints_ok = true;
};

struct KvResult {
  std::vector<Candidate> list;  // ranked
  KvDiagnostics diag;
};

KvResult kv_decode(const RSCode& code, const ReliabilityMatrix& pi, double L, bool verify = false);

double success_score(const ReliabilityMatrix& pi, const Word& c);
double rhs_bound(std::size_t k, double L, Symbol q, std::size_t n);
// Alternative sufficient condition with sqrt(n / <Pi,Pi>) in place of sqrt(q).
double rhs_bound_variant(std::size_t k, double L, std::size_t n, double pi_pi);
double inner_pi_pi(const ReliabilityMatrix& pi);

}  // namespace uvkv
