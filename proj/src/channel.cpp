#include "uvkv/channel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "detail.hpp"

namespace uvkv {

Channel::Channel(FieldRef f, Matrix<double> w, double tol) : f_(std::move(f)), w_(std::move(w)) {
  if (!f_) throw std::invalid_argument("null field");
  if (w_.rows() != f_->order()) throw std::invalid_argument("transition rows must equal q");
  if (w_.cols() == 0) throw std::invalid_argument("channel needs at least one output");
  for (std::size_t x = 0; x < w_.rows(); ++x) {
    double s = 0;
    for (std::size_t y = 0; y < w_.cols(); ++y) {
      double v = w_(x, y);
      if (!(v >= 0 && v <= 1)) throw std::invalid_argument("transition entry outside [0,1]");
      s += v;
    }
    if (std::abs(s - 1) > tol) throw std::invalid_argument("transition row does not sum to 1");
  }
}

Channel qsc(FieldRef f, double p) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("crossover probability outside [0,1]");
  const Symbol q = f->order();
  Matrix<double> w(q, q, q > 1 ? p / (q - 1) : 0);
  for (Symbol x = 0; x < q; ++x) w(x, x) = 1 - p;
  return Channel(std::move(f), std::move(w));
}

std::optional<double> qsc_parameter(const Channel& ch, double tol) {
  const Symbol q = ch.q();
  if (ch.outputs() != q) return std::nullopt;
  const double a = *std::max_element(ch.transition().data().begin(), ch.transition().data().end());
  const double b = (1 - a) / (q - 1);
  std::vector<char> seen(q, 0);
  for (std::size_t y = 0; y < q; ++y) {
    int hits = 0;
    for (Symbol x = 0; x < q; ++x) {
      double v = ch(x, y);
      if (std::abs(v - a) <= tol && a > b + tol) {
        if (seen[x]++) return std::nullopt;
        ++hits;
      } else if (std::abs(v - b) > tol) {
        return std::nullopt;
      }
    }
    if (a > b + tol && hits != 1) return std::nullopt;
  }
  return 1 - a;
}

double output_probability(const Channel& ch, std::size_t y) {
  double s = 0;
  for (Symbol x = 0; x < ch.q(); ++x) s += ch(x, y);
  return s / ch.q();
}

AppVector app(const Channel& ch, std::size_t y) {
  if (y >= ch.outputs()) throw std::invalid_argument("output index out of range");
  AppVector pi(ch.q());
  double s = 0;
  for (Symbol x = 0; x < ch.q(); ++x) s += pi[x] = ch(x, y);
  if (s <= 0) throw std::invalid_argument("output " + std::to_string(y) + " is unreachable");
  for (auto& v : pi) v /= s;
  return pi;
}

double app_sqnorm(const AppVector& pi) {
  double s = 0;
  for (double v : pi) s += v * v;
  return s;
}

double app_bhattacharyya(const AppVector& pi) {
  const std::size_t q = pi.size();
  double s = 0;
  for (double v : pi) s += std::sqrt(v);
  return std::clamp((s * s - 1) / static_cast<double>(q - 1), 0.0, 1.0);
}

double app_entropy(const AppVector& pi) {
  double h = 0;
  for (double v : pi)
    if (v > 0) h -= v * std::log(v);
  return h / std::log(static_cast<double>(pi.size()));
}

double symmetric_capacity(const Channel& ch) {
  const Symbol q = ch.q();
  double c = 0;
  for (std::size_t y = 0; y < ch.outputs(); ++y) {
    const double py = output_probability(ch, y);
    for (Symbol x = 0; x < q; ++x) {
      const double w = ch(x, y);
      if (w > 0) c += w * std::log(w / py);
    }
  }
  return std::clamp(c / q / std::log(static_cast<double>(q)), 0.0, 1.0);
}

double bhattacharyya(const Channel& ch) {
  const Symbol q = ch.q();
  double z = 0;
  for (std::size_t y = 0; y < ch.outputs(); ++y) {
    double s = 0, s2 = 0;
    for (Symbol x = 0; x < q; ++x) {
      const double r = std::sqrt(ch(x, y));
      s += r;
      s2 += r * r;
    }
    z += s * s - s2;  // sum over x != x'
  }
  return std::clamp(z / (static_cast<double>(q) * (q - 1)), 0.0, 1.0);
}

double kv_capacity(const Channel& ch) {
  double c = 0;
  for (std::size_t y = 0; y < ch.outputs(); ++y) {
    double s = 0, s2 = 0;
    for (Symbol x = 0; x < ch.q(); ++x) {
      s += ch(x, y);
      s2 += ch(x, y) * ch(x, y);
    }
    // P(y) * |pi_y|^2 = (s/q) * s2/s^2
    if (s > 0) c += s2 / s;
  }
  return c / ch.q();
}

InfoSummary info(const Channel& ch) {
  return {symmetric_capacity(ch), bhattacharyya(ch), kv_capacity(ch)};
}

// ---- symmetry

SymmetryWitness is_weakly_symmetric(const Channel& ch, double tol) {
  const Symbol q = ch.q();
  const std::size_t n = ch.outputs();
  auto close = [&](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
  };
  std::vector<std::vector<double>> reps;
  SymmetryWitness w;
  for (std::size_t y = 0; y < n; ++y) {
    std::vector<double> c = ch.transition().column(y);
    std::sort(c.begin(), c.end());
    std::size_t b = 0;
    while (b < reps.size() && !close(reps[b], c)) ++b;
    if (b == reps.size()) {
      reps.push_back(c);
      w.blocks.emplace_back();
    }
    w.blocks[b].push_back(y);
  }
  for (const auto& blk : w.blocks) {
    std::vector<double> first;
    for (Symbol x = 0; x < q; ++x) {
      std::vector<double> r;
      for (std::size_t y : blk) r.push_back(ch(x, y));
      std::sort(r.begin(), r.end());
      if (x == 0)
        first = r;
      else if (!close(first, r))
        return {false, w.blocks};
    }
  }
  w.symmetric = true;
  return w;
}

bool is_cyclic_symmetric(const Channel& ch, double tol) {
  const Channel m = merge_outputs(ch);
  const Field& f = *m.field();
  const Symbol q = m.q();
  detail::VecIndex idx;
  std::vector<AppVector> pis(m.outputs());
  std::vector<double> prob(m.outputs());
  for (std::size_t y = 0; y < m.outputs(); ++y) {
    pis[y] = app(m, y);
    prob[y] = output_probability(m, y);
    idx.insert(pis[y], y);
  }
  AppVector s(q);
  for (std::size_t y = 0; y < m.outputs(); ++y) {
    for (Symbol g = 1; g < q; ++g) {
      for (Symbol i = 0; i < q; ++i) s[i] = pis[y][f.add(i, g)];
      auto hit = idx.find(s);
      if (!hit) {
        // Quantization boundary: fall back to a scan.
        for (std::size_t z = 0; z < m.outputs() && !hit; ++z) {
          bool ok = true;
          for (Symbol i = 0; i < q && ok; ++i) ok = std::abs(pis[z][i] - s[i]) <= 1e-10;
          if (ok) hit = z;
        }
      }
      if (!hit || std::abs(prob[*hit] - prob[y]) > tol) return false;
    }
  }
  return true;
}

// ---- merging and splitting

Channel merge_outputs(const Channel& ch) {
  const Symbol q = ch.q();
  detail::Merger mg(q);
  std::vector<double> col(q);
  for (std::size_t y = 0; y < ch.outputs(); ++y) {
    for (Symbol x = 0; x < q; ++x) col[x] = ch(x, y);
    mg.add(col.data());
  }
  return mg.channel(ch.field());
}

namespace {

void check_work(const Channel& ch, const EvolveLimits& lim) {
  const double n = static_cast<double>(ch.outputs()), q = ch.q();
  if (n * n * q * q > lim.max_work)
    throw BlowupError("exact split of a channel with " + std::to_string(ch.outputs()) +
                      " outputs exceeds the work cap");
}

template <class Sink>
void raw_outputs(const Channel& ch, int bit, Sink&& sink) {
  const Field& f = *ch.field();
  const Symbol q = ch.q();
  const std::size_t n = ch.outputs();
  const double invq = 1.0 / q;
  std::vector<double> v(q);
  std::vector<double> c1(q), c2(q);
  for (std::size_t y1 = 0; y1 < n; ++y1) {
    for (Symbol x = 0; x < q; ++x) c1[x] = ch(x, y1);
    for (std::size_t y2 = 0; y2 < n; ++y2) {
      for (Symbol x = 0; x < q; ++x) c2[x] = ch(x, y2);
      if (bit == 1) {
        for (Symbol u2 = 0; u2 < q; ++u2) {
          double s = 0;
          for (Symbol u1 = 0; u1 < q; ++u1) s += c1[u1] * c2[f.add(u1, u2)];
          v[u2] = s * invq;
        }
        sink(v.data());
      } else {
        for (Symbol u2 = 0; u2 < q; ++u2) {
          for (Symbol u1 = 0; u1 < q; ++u1) v[u1] = c1[u1] * c2[f.add(u1, u2)] * invq;
          sink(v.data());
        }
      }
    }
  }
}

}  // namespace

Channel transform(const Channel& ch, int bit, const EvolveLimits& lim) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("path bits must be 0 or 1");
  check_work(ch, lim);
  detail::Merger mg(ch.q());
  raw_outputs(ch, bit, [&](const double* v) {
    mg.add(v);
    if (mg.size() > lim.max_outputs)
      throw BlowupError("exact evolution exceeds " + std::to_string(lim.max_outputs) + " outputs");
  });
  return mg.channel(ch.field());
}

std::pair<Channel, Channel> split(const Channel& ch, const EvolveLimits& lim) {
  return {transform(ch, 0, lim), transform(ch, 1, lim)};
}

std::pair<Channel, Channel> split_raw(const Channel& ch) {
  const Symbol q = ch.q();
  const std::size_t n = ch.outputs();
  std::pair<Matrix<double>, Matrix<double>> m{Matrix<double>(q, n * n * q), Matrix<double>(q, n * n)};
  for (int bit = 0; bit < 2; ++bit) {
    Matrix<double>& w = bit ? m.second : m.first;
    std::size_t y = 0;
    raw_outputs(ch, bit, [&](const double* v) {
      for (Symbol x = 0; x < q; ++x) w(x, y) = v[x];
      ++y;
    });
  }
  return {Channel(ch.field(), std::move(m.first), 1e-9), Channel(ch.field(), std::move(m.second), 1e-9)};
}

Channel evolve(const Channel& ch, const std::string& path, const EvolveLimits& lim) {
  Channel w = ch;
  for (char c : path) {
    if (c != '0' && c != '1') throw std::invalid_argument("path must be a bit string");
    w = transform(w, c - '0', lim);
  }
  return w;
}

Channel tensor_power(const Channel& ch, unsigned m, std::size_t max_outputs) {
  if (m == 0) throw std::invalid_argument("tensor power needs m >= 1");
  if (m == 1) return ch;
  const Symbol q = ch.q();
  const std::size_t n = ch.outputs();
  unsigned long long Q = 1, N = 1;
  for (unsigned i = 0; i < m; ++i) {
    Q *= q;
    N *= n;
    if (Q > 65536) throw std::invalid_argument("q^m exceeds 2^16");
    if (N > max_outputs) throw std::invalid_argument("tensor power output alphabet exceeds cap");
  }
  FieldRef big = make_field(ch.field()->characteristic(), ch.field()->degree() * m);
  Matrix<double> w(Q, N);
  for (std::size_t x = 0; x < Q; ++x)
    for (std::size_t y = 0; y < N; ++y) {
      double v = 1;
      std::size_t xr = x, yr = y;
      for (unsigned i = 0; i < m; ++i) {
        v *= ch(static_cast<Symbol>(xr % q), yr % n);
        xr /= q, yr /= n;
      }
      w(x, y) = v;
    }
  return Channel(big, std::move(w), 1e-9);
}

std::string path_string(std::uint64_t index, unsigned ell) {
  std::string s(ell, '0');
  for (unsigned i = 0; i < ell; ++i)
    if (index >> (ell - 1 - i) & 1) s[i] = '1';
  return s;
}

// ---- text formats

void write_channel_csv(std::ostream& os, const Channel& ch) {
  os << "# q=" << ch.q() << " outputs=" << ch.outputs() << "\n";
  os << std::setprecision(17);
  for (Symbol x = 0; x < ch.q(); ++x) {
    for (std::size_t y = 0; y < ch.outputs(); ++y) os << (y ? "," : "") << ch(x, y);
    os << "\n";
  }
}

Channel read_channel_csv(std::istream& is) {
  std::string line;
  unsigned long q = 0, n = 0;
  while (std::getline(is, line)) {
    if (line.rfind("#", 0) == 0) {
      auto qp = line.find("q="), np = line.find("outputs=");
      if (qp != std::string::npos) q = std::stoul(line.substr(qp + 2));
      if (np != std::string::npos) n = std::stoul(line.substr(np + 8));
      if (q && n) break;
    }
  }
  if (!q || !n) throw std::invalid_argument("channel file lacks '# q=<q> outputs=<n>' header");
  auto [p, e] = prime_power(static_cast<unsigned>(q));
  Matrix<double> w(q, n);
  std::size_t x = 0;
  while (x < q && std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t y = 0;
    while (std::getline(ss, cell, ',')) {
      if (y >= n) throw std::invalid_argument("too many columns in channel row");
      w(x, y++) = std::stod(cell);
    }
    if (y != n) throw std::invalid_argument("too few columns in channel row");
    ++x;
  }
  if (x != q) throw std::invalid_argument("channel file has too few rows");
  return Channel(make_field(p, e), std::move(w));
}

void write_law_csv(std::ostream& os, const ChannelLaw& law) {
  os << "# q=" << law.q << " classes=" << law.entries.size() << "\n";
  os << "prob";
  for (Symbol i = 0; i < law.q; ++i) os << ",pi_" << i;
  os << "\n" << std::setprecision(17);
  for (const auto& e : law.entries) {
    os << e.prob;
    for (double v : e.pi) os << "," << v;
    os << "\n";
  }
}

}  // namespace uvkv
