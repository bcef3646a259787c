#pragma once

#include <optional>
#include <vector>

#include "uvkv/gf.hpp"
#include "uvkv/matrix.hpp"

namespace uvkv {

using Word = std::vector<Symbol>;
// q x n, column j is the APP vector of symbol j.
using ReliabilityMatrix = Matrix<double>;

class RSCode {
 public:
  // Points default to field indices 0..n-1.
  RSCode(FieldRef f, std::size_t n, std::size_t k, std::optional<std::vector<Symbol>> points = std::nullopt);

  const FieldRef& field() const { return f_; }
  std::size_t length() const { return n_; }
  std::size_t dimension() const { return k_; }
  double rate() const { return static_cast<double>(k_) / n_; }
  const std::vector<Symbol>& points() const { return pts_; }

  Word encode(const UniPoly& message) const;
  // Message polynomial through the first k symbols; nullopt if w is not a codeword.
  std::optional<UniPoly> message_of(const Word& w) const;
  bool contains(const Word& w) const { return message_of(w).has_value(); }

 private:
  FieldRef f_;
  std::size_t n_, k_;
  std::vector<Symbol> pts_;
};

RSCode rs_new(FieldRef f, std::size_t n, std::size_t k, std::optional<std::vector<Symbol>> points = std::nullopt);

struct ZeroCode {
  FieldRef field;
  std::size_t n;
  Word codeword() const { return Word(n, 0); }
};

// Polynomial of degree < xs.size() through the given points.
UniPoly lagrange(const FieldRef& f, const std::vector<Symbol>& xs, const std::vector<Symbol>& ys);

double log_likelihood(const ReliabilityMatrix& pi, const Word& c);

struct MlResult {
  UniPoly message;
  Word codeword;
  double score;
};

// Exhaustive ML over all q^k messages; ties go to the lexicographically
// smallest message (c_0 first).
MlResult oracle_ml_decode(const RSCode& code, const ReliabilityMatrix& pi);

}  // namespace uvkv
