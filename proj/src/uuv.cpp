#include "uvkv/uuv.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace uvkv {

CodeTree::CodeTree(FieldRef f, unsigned depth, std::size_t n0, std::vector<LeafSpec> leaves)
    : f_(std::move(f)), depth_(depth), n0_(n0), specs_(std::move(leaves)) {
  if (depth > 20) throw std::invalid_argument("tree depth too large");
  if (specs_.size() != (std::size_t(1) << depth))
    throw std::invalid_argument("need exactly 2^depth leaf specs, got " + std::to_string(specs_.size()));
  if (n0 == 0 || n0 > f_->order()) throw std::invalid_argument("leaf length must satisfy 1 <= n0 <= q");
  for (auto& s : specs_) {
    if (s.kind == LeafKind::zero) {
      s.k = 0;
      codes_.emplace_back(std::nullopt);
    } else {
      codes_.emplace_back(RSCode(f_, n0, s.k));
    }
  }
}

std::size_t CodeTree::dimension() const {
  std::size_t d = 0;
  for (auto& s : specs_) d += s.k;
  return d;
}

CodeTree tree_new(FieldRef f, unsigned depth, std::size_t n0, std::vector<LeafSpec> leaves) {
  return CodeTree(std::move(f), depth, n0, std::move(leaves));
}

namespace {

Word concat(const Field& F, const Word& u, const Word& v) {
  Word c(u);
  c.reserve(2 * u.size());
  for (std::size_t i = 0; i < u.size(); ++i) c.push_back(F.add(u[i], v[i]));
  return c;
}

Word encode_rec(const CodeTree& t, const std::vector<UniPoly>& msg, std::size_t idx, unsigned d) {
  if (d == t.depth()) {
    const RSCode* c = t.code(idx);
    if (!c) {
      if (!msg[idx].is_zero()) throw std::invalid_argument("zero-code leaf takes the empty message");
      return Word(t.leaf_length(), 0);
    }
    return c->encode(msg[idx]);
  }
  return concat(*t.field(), encode_rec(t, msg, 2 * idx, d + 1), encode_rec(t, msg, 2 * idx + 1, d + 1));
}

}  // namespace

Word uuv_encode(const CodeTree& t, const std::vector<UniPoly>& messages) {
  if (messages.size() != t.leaf_count()) throw std::invalid_argument("need one message per leaf");
  return encode_rec(t, messages, 0, 0);
}

std::vector<Word> uuv_leaf_words(const CodeTree& t, const Word& c) {
  if (c.size() != t.length()) throw std::invalid_argument("word length mismatch");
  const Field& F = *t.field();
  std::vector<Word> cur{c};
  for (unsigned d = 0; d < t.depth(); ++d) {
    std::vector<Word> next;
    for (const Word& w : cur) {
      const std::size_t h = w.size() / 2;
      Word u(w.begin(), w.begin() + h), v(h);
      for (std::size_t i = 0; i < h; ++i) v[i] = F.sub(w[h + i], w[i]);
      next.push_back(std::move(u));
      next.push_back(std::move(v));
    }
    cur.swap(next);
  }
  return cur;
}

ReliabilityMatrix pi_oplus(const ReliabilityMatrix& p1, const ReliabilityMatrix& p2, const Field& F) {
  if (p1.rows() != p2.rows() || p1.cols() != p2.cols() || p1.rows() != F.order())
    throw std::invalid_argument("pi_oplus shape mismatch");
  const Symbol q = F.order();
  ReliabilityMatrix r(q, p1.cols(), 0.0);
  for (std::size_t j = 0; j < p1.cols(); ++j) {
    double s = 0;
    for (Symbol b = 0; b < q; ++b) {
      const double x = p1(b, j);
      if (x == 0) continue;
      for (Symbol c = 0; c < q; ++c) r(F.add(b, c), j) += x * p2(c, j);  // a - b = c
    }
    for (Symbol a = 0; a < q; ++a) s += r(a, j);
    if (s > 0)
      for (Symbol a = 0; a < q; ++a) r(a, j) /= s;
  }
  return r;
}

ReliabilityMatrix pi_times(const ReliabilityMatrix& p1, const ReliabilityMatrix& p2, const Word& v, const Field& F,
                           std::size_t* flagged) {
  if (p1.rows() != p2.rows() || p1.cols() != p2.cols() || p1.rows() != F.order())
    throw std::invalid_argument("pi_times shape mismatch");
  if (v.size() != p1.cols()) throw std::invalid_argument("pi_times: v length mismatch");
  const Symbol q = F.order();
  ReliabilityMatrix r(q, p1.cols(), 0.0);
  for (std::size_t j = 0; j < p1.cols(); ++j) {
    double s = 0;
    for (Symbol a = 0; a < q; ++a) s += r(a, j) = p1(a, j) * p2(F.add(a, v[j]), j);
    if (s > 0) {
      for (Symbol a = 0; a < q; ++a) r(a, j) /= s;
    } else {
      for (Symbol a = 0; a < q; ++a) r(a, j) = 1.0 / q;
      if (flagged) ++*flagged;
    }
  }
  return r;
}

ReliabilityMatrix reflect(const ReliabilityMatrix& p, const Field& F) {
  ReliabilityMatrix r(p.rows(), p.cols());
  for (Symbol a = 0; a < p.rows(); ++a)
    for (std::size_t j = 0; j < p.cols(); ++j) r(F.neg(a), j) = p(a, j);
  return r;
}

namespace {

std::vector<Symbol> hard_decisions(const ReliabilityMatrix& pi) {
  std::vector<Symbol> h(pi.cols(), 0);
  for (std::size_t j = 0; j < pi.cols(); ++j)
    for (Symbol a = 1; a < pi.rows(); ++a)
      if (pi(a, j) > pi(h[j], j)) h[j] = a;
  return h;
}

void decode_leaf(const CodeTree& t, std::size_t idx, const ReliabilityMatrix& pi, const DecodeOptions& opt,
                 LeafTrace& tr) {
  const FieldRef& f = t.field();
  const RSCode* code = t.code(idx);
  const std::size_t n = t.leaf_length();
  if (!code) {
    tr.codeword.assign(n, 0);
    tr.message = UniPoly(f);
    return;
  }
  const std::size_t k = code->dimension();
  if (k == n) {
    // every word is a codeword
    tr.codeword = hard_decisions(pi);
    tr.message = lagrange(f, code->points(), tr.codeword);
    return;
  }
  if (k == 1) {
    Symbol best = 0;
    double bs = -INFINITY;
    for (Symbol a = 0; a < pi.rows(); ++a) {
      double s = 0;
      for (std::size_t j = 0; j < n; ++j) s += std::log(std::max(pi(a, j), 1e-300));
      if (s > bs) bs = s, best = a;
    }
    tr.message = UniPoly(f, {best});
    tr.codeword.assign(n, best);
    return;
  }
  KvResult r = kv_decode(*code, pi, opt.L, opt.verify);
  tr.diag = r.diag;
  tr.list_size = r.list.size();
  if (!r.list.empty()) {
    tr.message = std::move(r.list.front().message);
    tr.codeword = std::move(r.list.front().codeword);
    return;
  }
  tr.fallback = true;
  const std::vector<Symbol> h = hard_decisions(pi);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pi(h[a], a) > pi(h[b], b); });
  std::vector<Symbol> xs, ys;
  for (std::size_t i = 0; i < k; ++i) xs.push_back(code->points()[order[i]]), ys.push_back(h[order[i]]);
  tr.message = lagrange(f, xs, ys);
  tr.codeword = code->encode(tr.message);
}

struct Decoder {
  const CodeTree& t;
  const DecodeOptions& opt;
  DecodeResult& res;

  // truth may be null
  Word run(std::size_t idx, unsigned d, const ReliabilityMatrix& pi, const Word* truth) {
    const Field& F = *t.field();
    if (d == t.depth()) {
      LeafTrace tr;
      tr.leaf = idx;
      if (opt.on_leaf) opt.on_leaf(idx, pi);
      decode_leaf(t, idx, pi, opt, tr);
      if (truth) tr.ok = tr.codeword == *truth;
      res.messages[idx] = tr.message;
      Word out = tr.codeword;
      res.trace.visits.push_back(std::move(tr));
      return out;
    }
    const std::size_t h = pi.cols() / 2;
    ReliabilityMatrix left(pi.rows(), h), right(pi.rows(), h);
    for (Symbol a = 0; a < pi.rows(); ++a)
      for (std::size_t j = 0; j < h; ++j) left(a, j) = pi(a, j), right(a, j) = pi(a, h + j);
    Word tu, tv;
    if (truth) {
      tu.assign(truth->begin(), truth->begin() + h);
      tv.resize(h);
      for (std::size_t i = 0; i < h; ++i) tv[i] = F.sub((*truth)[h + i], (*truth)[i]);
    }
    // V first: P(v = a) = sum_b P_L(b) P_R(a + b)
    Word v = run(2 * idx + 1, d + 1, pi_oplus(reflect(left, F), right, F), truth ? &tv : nullptr);
    const Word& vp = opt.genie ? tv : v;
    std::size_t flagged = 0;
    ReliabilityMatrix pu = pi_times(left, right, vp, F, &flagged);
    const std::size_t before = res.trace.visits.size();
    Word u = run(2 * idx, d + 1, pu, truth ? &tu : nullptr);
    if (flagged && before < res.trace.visits.size()) res.trace.visits[before].flagged_columns += flagged;
    return concat(F, u, v);
  }
};

}  // namespace

DecodeResult uuv_decode(const CodeTree& t, const ReliabilityMatrix& pi, const DecodeOptions& opt, const Word* truth) {
  if (pi.rows() != t.field()->order() || pi.cols() != t.length())
    throw std::invalid_argument("reliability matrix must be q x N");
  if (opt.genie && !truth) throw std::invalid_argument("genie decoding needs the transmitted codeword");
  if (truth && truth->size() != t.length()) throw std::invalid_argument("truth length mismatch");
  DecodeResult res;
  res.messages.assign(t.leaf_count(), UniPoly(t.field()));
  Decoder dec{t, opt, res};
  res.codeword = dec.run(0, 0, pi, truth);
  return res;
}

// ---- design

Design design_rates(const Channel& ch, unsigned depth, const DesignPolicy& policy, std::size_t n0,
                    const LawMode& mode) {
  if (policy.epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
  Design d;
  d.depth = depth;
  d.leaf_info = all_path_info(ch, depth, mode);
  for (auto& pi : d.leaf_info)
    if (pi.method == "monte-carlo") d.monte_carlo = true;
  const std::size_t P = d.leaf_info.size();

  if (policy.kind == DesignPolicy::kv_margin) {
    if (n0 == 0 || n0 > ch.q()) throw std::invalid_argument("leaf length must satisfy 1 <= n0 <= q");
    d.field = ch.field();
    d.n0 = n0;
    for (std::size_t i = 0; i < P; ++i) {
      const double c = d.leaf_info[i].info.kv_capacity;
      LeafSpec s;
      long k;
      if (c >= 1 - 1e-12)
        k = static_cast<long>(n0);
      else
        k = static_cast<long>(std::floor(static_cast<double>(n0) * (c - policy.epsilon) + 1e-9));
      k = std::min<long>(k, static_cast<long>(n0));
      if (k > 0) s = {LeafKind::rs, static_cast<std::size_t>(k)};
      d.leaves.push_back(s);
    }
  } else {
    if (policy.m < 1) throw std::invalid_argument("tensor parameter m must be >= 1");
    const Field& F = *ch.field();
    double qm = 1;
    for (unsigned i = 0; i < policy.m; ++i) qm *= F.order();
    if (qm > 65536) throw std::invalid_argument("q^m exceeds the field size cap 65536");
    d.field = make_field(F.characteristic(), F.degree() * policy.m);
    d.n0 = static_cast<std::size_t>(qm);
    const double n = std::ldexp(1.0, static_cast<int>(depth));
    const double thr = std::exp2(-std::pow(n, policy.beta));
    const double q = F.order();
    for (std::size_t i = 0; i < P; ++i) {
      LeafSpec s;
      if (d.leaf_info[i].info.bhattacharyya <= thr) {
        const double k = std::floor(qm * (1 - policy.m * (q - 1) * thr - policy.epsilon / 4) + 1e-9);
        if (k >= 1) s = {LeafKind::rs, static_cast<std::size_t>(std::min(k, qm))};
      }
      d.leaves.push_back(s);
    }
  }
  std::size_t dim = 0;
  for (std::size_t i = 0; i < P; ++i) {
    dim += d.leaves[i].k;
    if (d.leaves[i].kind == LeafKind::rs) {
      const double margin = d.leaf_info[i].info.kv_capacity - static_cast<double>(d.leaves[i].k) / d.n0;
      d.fer_proxy += std::exp(-2 * static_cast<double>(d.n0) * margin * margin);
    }
  }
  d.rate = static_cast<double>(dim) / static_cast<double>(d.n0 * P);
  return d;
}

CodeTree tree_from_design(const Design& d) { return CodeTree(d.field, d.depth, d.n0, d.leaves); }

void write_tree_spec(std::ostream& os, const CodeTree& t) {
  os << t.field()->order() << ' ' << t.leaf_length() << ' ' << t.depth() << '\n';
  for (std::size_t i = 0; i < t.leaf_count(); ++i) {
    const LeafSpec& s = t.leaves()[i];
    const std::string p = t.depth() ? path_string(i, t.depth()) : "-";
    os << p << ' ' << (s.kind == LeafKind::rs ? "rs" : "zero") << ' ' << s.k << '\n';
  }
}

CodeTree read_tree_spec(std::istream& is) {
  std::string line;
  auto next = [&]() -> bool {
    while (std::getline(is, line)) {
      const auto p = line.find_first_not_of(" \t\r");
      if (p == std::string::npos || line[p] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next()) throw std::invalid_argument("tree spec: missing header");
  unsigned q = 0, depth = 0;
  std::size_t n0 = 0;
  {
    std::istringstream h(line);
    if (!(h >> q >> n0 >> depth)) throw std::invalid_argument("tree spec: header must be `q n0 depth`");
  }
  if (depth > 20) throw std::invalid_argument("tree spec: depth too large");
  const auto [p, e] = prime_power(q);
  const std::size_t P = std::size_t(1) << depth;
  std::vector<LeafSpec> leaves(P);
  std::vector<char> seen(P, 0);
  std::size_t count = 0;
  while (next()) {
    std::istringstream l(line);
    std::string path, kind;
    std::size_t k = 0;
    if (!(l >> path >> kind >> k)) throw std::invalid_argument("tree spec: bad leaf line: " + line);
    std::size_t idx = 0;
    if (depth == 0) {
      if (path != "-") throw std::invalid_argument("tree spec: depth-0 path must be -");
    } else {
      if (path.size() != depth) throw std::invalid_argument("tree spec: path length must equal depth: " + path);
      for (char c : path) {
        if (c != '0' && c != '1') throw std::invalid_argument("tree spec: bad path " + path);
        idx = 2 * idx + (c - '0');
      }
    }
    if (seen[idx]++) throw std::invalid_argument("tree spec: duplicate path " + path);
    if (kind == "rs")
      leaves[idx] = {LeafKind::rs, k};
    else if (kind == "zero")
      leaves[idx] = {LeafKind::zero, 0};
    else
      throw std::invalid_argument("tree spec: kind must be rs or zero");
    ++count;
  }
  if (count != P) throw std::invalid_argument("tree spec: expected " + std::to_string(P) + " leaves");
  return CodeTree(make_field(p, e), depth, n0, std::move(leaves));
}

}  // namespace uvkv
