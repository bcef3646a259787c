#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uvkv/channel.hpp"
#include "uvkv/codes.hpp"
#include "uvkv/kv.hpp"

namespace uvkv {

enum class LeafKind { rs, zero };

struct LeafSpec {
  LeafKind kind = LeafKind::zero;
  std::size_t k = 0;  // 0 for zero codes
};

// Iterated (U|U+V) code: U_x = (U_{x0} | U_{x0} + U_{x1}). Leaf i is the
// path with x_1 as the most significant bit of i.
class CodeTree {
 public:
  CodeTree(FieldRef f, unsigned depth, std::size_t n0, std::vector<LeafSpec> leaves);

  const FieldRef& field() const { return f_; }
  unsigned depth() const { return depth_; }
  std::size_t leaf_length() const { return n0_; }
  std::size_t length() const { return n0_ << depth_; }
  std::size_t leaf_count() const { return specs_.size(); }
  std::size_t dimension() const;
  double rate() const { return static_cast<double>(dimension()) / static_cast<double>(length()); }
  const std::vector<LeafSpec>& leaves() const { return specs_; }
  // nullptr for zero leaves
  const RSCode* code(std::size_t leaf) const { return codes_[leaf] ? &*codes_[leaf] : nullptr; }

 private:
  FieldRef f_;
  unsigned depth_;
  std::size_t n0_;
  std::vector<LeafSpec> specs_;
  std::vector<std::optional<RSCode>> codes_;
};

CodeTree tree_new(FieldRef f, unsigned depth, std::size_t n0, std::vector<LeafSpec> leaves);

// Zero leaves take the zero polynomial.
Word uuv_encode(const CodeTree& t, const std::vector<UniPoly>& messages);
// Per-leaf codewords of a tree codeword (inverse of the recursive concatenation).
std::vector<Word> uuv_leaf_words(const CodeTree& t, const Word& c);

// Column-wise sum_b P1(b) P2(a - b), renormalized.
ReliabilityMatrix pi_oplus(const ReliabilityMatrix& p1, const ReliabilityMatrix& p2, const Field& f);
// Column-wise P1(a) P2(a + v_i), normalized. Columns with a zero normalizer
// become uniform and are counted in *flagged.
ReliabilityMatrix pi_times(const ReliabilityMatrix& p1, const ReliabilityMatrix& p2, const Word& v, const Field& f,
                           std::size_t* flagged = nullptr);
// P(a) -> P(-a)
ReliabilityMatrix reflect(const ReliabilityMatrix& p, const Field& f);

struct LeafTrace {
  std::size_t leaf = 0;
  Word codeword;
  UniPoly message{nullptr};
  bool ok = true;          // against the true leaf word, when known
  bool fallback = false;   // empty KV list, hard-decision interpolation used
  std::size_t list_size = 0;
  std::size_t flagged_columns = 0;
  KvDiagnostics diag;
};

struct DecodeTrace {
  std::vector<LeafTrace> visits;  // successive-cancellation order
};

struct DecodeResult {
  Word codeword;
  std::vector<UniPoly> messages;  // by leaf index
  DecodeTrace trace;
};

struct DecodeOptions {
  double L = 16;
  bool genie = false;       // propagate the true leaf words (needs truth)
  bool verify = false;      // check interpolation constraints at each leaf
  // Called with the reliability matrix handed to each leaf decoder.
  std::function<void(std::size_t leaf, const ReliabilityMatrix&)> on_leaf;
};

DecodeResult uuv_decode(const CodeTree& t, const ReliabilityMatrix& pi, const DecodeOptions& opt = {},
                        const Word* truth = nullptr);

// ---- rate design

struct DesignPolicy {
  enum Kind { kv_margin, capacity_recipe } kind = kv_margin;
  double epsilon = 0.05;
  double beta = 0.25;  // capacity_recipe
  unsigned m = 1;      // capacity_recipe tensor parameter
};

struct Design {
  FieldRef field;  // leaf code field (GF(q^m) for capacity_recipe)
  unsigned depth = 0;
  std::size_t n0 = 0;
  std::vector<LeafSpec> leaves;
  std::vector<PathInfo> leaf_info;
  double rate = 0;
  double fer_proxy = 0;
  bool monte_carlo = false;  // some leaf information was estimated
};

// kv_margin: k_x = floor(n0 (C_KV(W^x) - eps)), a zero code when that is not
// positive, n0 for noiseless leaves. capacity_recipe: leaves of length q^m
// over GF(q^m); leaves with Z(W^x) <= 2^{-n^beta}, n = 2^depth, get
// k = floor(q^m (1 - m(q-1) 2^{-n^beta} - eps/4)), the rest are zero codes.
Design design_rates(const Channel& ch, unsigned depth, const DesignPolicy& policy, std::size_t n0,
                    const LawMode& mode = {});

CodeTree tree_from_design(const Design& d);

// Header `q n0 depth`, then one `path kind k` line per leaf (path `-` at
// depth 0). Lines starting with # are comments.
void write_tree_spec(std::ostream& os, const CodeTree& t);
CodeTree read_tree_spec(std::istream& is);

}  // namespace uvkv
