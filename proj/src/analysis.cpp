#include "uvkv/analysis.hpp"

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace uvkv {

namespace {

// Coefficients highest degree first.
using Coeffs = std::vector<long long>;

const Coeffs kQ = {3, -40, 243, -890, 2192, -3800, 4702, -4148, 2624, -1248, 480, -128};

const Coeffs kS = {6615LL,
                   -269766LL,
                   5348715LL,
                   -68697432LL,
                   642499307LL,
                   -4663447618LL,
                   27338551153LL,
                   -133009675740LL,
                   547673160274LL,
                   -1936548054764LL,
                   5946432348816LL,
                   -15994984917120LL,
                   37947048851166LL,
                   -79831430926900LL,
                   149553041935846LL,
                   -250287141028584LL,
                   375085789739404LL,
                   -504157479736392LL,
                   608316727420536LL,
                   -659027903954592LL,
                   640716590979968LL,
                   -558310438932224LL,
                   435164216863552LL,
                   -302519286136704LL,
                   186871196449024LL,
                   -102093104278528LL,
                   49062052366336LL,
                   -20617356455936LL,
                   7534906109952LL,
                   -2386429566976LL,
                   655237726208LL,
                   -156569829376LL,
                   32471121920LL,
                   -5628755968LL,
                   723517440LL,
                   -50331648LL};

const Coeffs kT1 = {1, -4, 6, -4, 2};
const Coeffs kT2 = {7, -18, 12};
const Coeffs kT3 = {5, -12, 8};
const Coeffs kS010 = {151, -662, 1094, -1624, 4105, -6598, 4252, -272, -96, -384};

template <class T>
T horner(const Coeffs& c, const T& p) {
  T acc(0);
  for (long long v : c) acc = acc * p + T(static_cast<long>(v));
  return acc;
}

template <class T>
T ipow(const T& x, unsigned n) {
  T r(1);
  for (unsigned i = 0; i < n; ++i) r *= x;
  return r;
}

template <class T>
T leaf(const std::string& path, const T& p) {
  const T one(1), q1 = one - p;
  if (path == "0") return (p + 2) * ipow(T(p - 1), 2) / (2 - p);
  if (path == "1") return ipow(q1, 4);
  if (path == "00") return horner<T>({5, -6, -5, -4}, p) * ipow(q1, 2) / (3 * p - 4);
  if (path == "01") return ipow(T(2 + p), 2) * ipow(q1, 4) / ipow(T(2 - p), 2);
  if (path == "10") return ipow(q1, 4) * horner<T>({-1, 2, 2}, p) / horner<T>({1, -2, 2}, p);
  if (path == "11") return ipow(q1, 8);
  if (path == "000") return -horner<T>({41, -14, -13, -12, -11, -10, -9, -8}, p) * ipow(q1, 2) / (8 - 7 * p);
  if (path == "001") return ipow(horner<T>({5, -6, -5, -4}, p), 2) * ipow(q1, 4) / ipow(T(4 - 3 * p), 2);
  if (path == "010")
    return horner<T>(kS010, p) * ipow(q1, 4) / (horner<T>(kT2, p) * horner<T>(kT3, p) * (3 * p - 4));
  if (path == "011") return ipow(T(p + 2), 4) * ipow(T(p - 1), 8) / ipow(T(2 - p), 4);
  if (path == "100")
    return horner<T>({5, -30, 66, -64, 19, 10, 4}, p) * ipow(T(p - 1), 4) / horner<T>({3, -6, 4}, p);
  if (path == "101") return ipow(horner<T>({1, -2, -2}, p), 2) * ipow(T(p - 1), 8) / ipow(horner<T>({1, -2, 2}, p), 2);
  if (path == "110") return -horner<T>({1, -4, 6, -4, -2}, p) * ipow(T(p - 1), 8) / horner<T>(kT1, p);
  if (path == "111") return ipow(q1, 16);
  throw std::invalid_argument("leaf_closed_form: path must be a bit string of length 1..3, got '" + path + "'");
}

template <class T>
T depth(unsigned d, const T& p) {
  const T q1 = T(1) - p;
  switch (d) {
    case 0:
      return T(1) - 2 * p + p * p;  // GS limit, no transform
    case 1:
      return horner<T>({1, -4, 4, -4}, p) * ipow(q1, 2) / (2 * (p - 2));
    case 2:
      return horner<T>(kQ, p) * ipow(q1, 2) /
             (4 * horner<T>({1, -2, 2}, p) * (3 * p - 4) * ipow(T(2 - p), 2));
    case 3:
      // The printed form is 8 times the leaf average; divided out here.
      return horner<T>(kS, p) * ipow(q1, 2) /
             (horner<T>(kT1, p) * horner<T>(kT2, p) * horner<T>(kT3, p) * horner<T>({3, -6, 4}, p) *
              ipow(horner<T>({1, -2, 2}, p), 2) * (7 * p - 8) * ipow(T(3 * p - 4), 2) * ipow(T(2 - p), 4)) /
             8;
  }
  throw std::invalid_argument("depth must be 0..3");
}

template <class T>
T average(unsigned d, const T& p) {
  if (d < 1 || d > 3) throw std::invalid_argument("leaf average needs depth 1..3");
  T s(0);
  for (unsigned i = 0; i < (1u << d); ++i) s += leaf<T>(path_string(i, d), p);
  return s / static_cast<long>(1u << d);
}

}  // namespace

double gs_baseline(double p) { return (1 - p) * (1 - p); }

double kv_qsc_capacity(double p, double q) {
  if (q < 2) throw std::invalid_argument("q must be >= 2");
  return (1 - p) * (1 - p) + p * p / (q - 1);
}

// Depths 2 and 3 cancel heavily in double Horner (about 1e-7 near p = 1 for
// depth 3), so they are evaluated exactly at the given double and rounded once.
double c_uv_depth(unsigned d, double p) {
  if (d < 2) return depth<double>(d, p);
  if (d > 3) throw std::invalid_argument("depth must be 0..3");
  return depth<mpq_class>(d, mpq_class(p)).get_d();
}
double c_uv_depth1(double p) { return c_uv_depth(1, p); }
double c_uv_depth2(double p) { return c_uv_depth(2, p); }
double c_uv_depth3(double p) { return c_uv_depth(3, p); }

double leaf_closed_form(const std::string& path, double p) { return leaf<double>(path, p); }
double leaf_average(unsigned d, double p) { return average<double>(d, p); }

double curve_identity_residual_exact(unsigned d, long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  mpq_class p(num, den);
  p.canonicalize();
  mpq_class r = depth<mpq_class>(d, p) - average<mpq_class>(d, p);
  return std::fabs(r.get_d());
}

std::optional<Crossing> gs_crossing(unsigned d) {
  auto g = [d](double p) { return c_uv_depth(d, p) - gs_baseline(p); };
  const int steps = 10000;
  double prev = g(1e-6);
  for (int i = 1; i < steps; ++i) {
    const double x = static_cast<double>(i) / steps;
    const double v = g(x);
    if (prev <= 0 && v > 0) {
      double lo = static_cast<double>(i - 1) / steps, hi = x;
      for (int it = 0; it < 100; ++it) {
        const double mid = (lo + hi) / 2;
        (g(mid) > 0 ? hi : lo) = mid;
      }
      return Crossing{hi, gs_baseline(hi)};
    }
    prev = v;
  }
  return std::nullopt;
}

FiniteCapacity finite_length_capacity(const Channel& ch, unsigned ell, const LawMode& mode) {
  auto info = all_path_info(ch, ell, mode);
  double s = 0;
  bool mc = false;
  for (auto& pi : info) {
    s += pi.info.kv_capacity;
    mc = mc || pi.method == "monte-carlo";
  }
  return {s / static_cast<double>(info.size()), mc};
}

PolarizationResult polarization_fraction(const Channel& ch, unsigned ell, double threshold, const LawMode& mode,
                                         unsigned bins) {
  const double P = std::ldexp(1.0, static_cast<int>(ell));
  LawMode m = mode;
  m.allow_monte_carlo = ch.q() != 2 && mode.allow_monte_carlo;
  try {
    auto info = all_path_info(ch, ell, m);
    std::size_t good = 0;
    bool mc = false;
    for (auto& pi : info) {
      good += pi.info.bhattacharyya <= threshold;
      mc = mc || pi.method == "monte-carlo";
    }
    const double f = static_cast<double>(good) / P;
    return {f, f, f, mc ? "monte-carlo" : "exact"};
  } catch (const BlowupError&) {
    if (ch.q() != 2) throw;
  }
  auto zb = binary_z_bounds(ch, ell, bins);
  std::size_t sure = 0, maybe = 0;
  for (auto& b : zb) {
    sure += b.upper <= threshold;
    maybe += b.lower <= threshold;
  }
  return {static_cast<double>(sure) / P, static_cast<double>(sure) / P, static_cast<double>(maybe) / P, "bracket"};
}

// ---- AG bounds

double ag_delta_bound(double C, double m, double g) {
  if (C < 1 || m < 1 || g < 0) throw std::invalid_argument("need C >= 1, m >= 1, g >= 0");
  return g + std::sqrt(2 * m * (C + g) + g * g);
}

double ag_list_bound(double C, double m, double g) { return ag_delta_bound(C, m, g) / m; }

double ag_soft_factor(double L, double rtilde, double gtilde, double q) {
  if (!(L > 0) || !(rtilde > 0) || gtilde < 0 || q < 2) throw std::invalid_argument("bad soft-factor parameters");
  const double inner = 1 - (2 * gtilde / L) * (1 + 2 / L);
  if (!(inner > 0)) throw std::domain_error("L too small: negative square root");
  const double s = std::sqrt(inner);
  const double den = 1 - (1 / (L * s)) * (std::sqrt(q) / (2 * std::sqrt(rtilde)) + 1 / rtilde);
  if (!(den > 0)) throw std::domain_error("L too small: nonpositive denominator");
  return (1 + (gtilde + std::sqrt(2 * gtilde)) / (L * s)) / den;
}

unsigned long ag_required_list(double delta, double rtilde, double gtilde, double q) {
  if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
  const double target = 1 + delta / 3;
  double prev = std::numeric_limits<double>::infinity();
  for (unsigned long L = 1; L <= 100'000'000; ++L) {
    double f;
    try {
      f = ag_soft_factor(static_cast<double>(L), rtilde, gtilde, q);
    } catch (const std::domain_error&) {
      continue;
    }
    if (f > prev * (1 + 1e-12)) throw std::logic_error("soft factor not monotone on its feasible range");
    prev = f;
    if (f <= target) return L;
  }
  throw std::domain_error("no list size up to 1e8 reaches the target factor");
}

unsigned long rs_required_list(double delta, double rstar, double q) {
  if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
  if (!(rstar > 0) || rstar > 1) throw std::invalid_argument("R* must be in (0, 1]");
  const double v = 3 * (1 / rstar + std::sqrt(q) / (2 * std::sqrt(rstar))) * (1 + delta / 3) / delta;
  return static_cast<unsigned long>(std::ceil(v - 1e-12));
}

TvzReport tvz_planner(unsigned q, double R, double eps, double beta, std::optional<unsigned long> n0,
                      const Channel* ch, unsigned max_ell) {
  if (!(eps > 0)) throw std::invalid_argument("epsilon must be positive");
  if (!(beta > 0 && beta < 0.5)) throw std::invalid_argument("beta must be in (0, 1/2)");
  const auto [p, e] = prime_power(q);
  (void)p;
  TvzReport r;
  r.q = q;
  r.q_square = e % 2 == 0;
  r.gamma_bound_q = r.q_square ? 1 / (std::sqrt(static_cast<double>(q)) - 1) : std::nan("");
  for (unsigned m = 2;; m += 2) {
    const double root = std::pow(static_cast<double>(q), m / 2.0);
    if (1 / (root - 1) <= eps / 4) {
      r.m = m;
      r.qm = root * root;
      r.gamma_bound_qm = 1 / (root - 1);
      break;
    }
    if (m > 200) throw std::domain_error("no admissible m");
  }
  r.distance_bound = 1 - R - r.gamma_bound_qm;
  auto mne = [&](unsigned ell) {
    const double n = std::ldexp(1.0, static_cast<int>(ell));
    return r.m * (q - 1.0) * std::exp2(-std::pow(n, beta));
  };
  unsigned ell = 0;
  while (mne(ell) > eps / 4) {
    if (++ell > 62) throw std::domain_error("no admissible depth");
  }
  r.ell_mne = ell;
  if (ch) {
    const double C = symmetric_capacity(*ch);
    for (unsigned l = ell; l <= max_ell; ++l) {
      const double thr = std::exp2(-std::pow(std::ldexp(1.0, static_cast<int>(l)), beta));
      const auto pf = polarization_fraction(*ch, l, thr);
      if (pf.fraction >= C - eps / 4) {
        r.ell = l;
        r.good_fraction = pf.fraction;
        break;
      }
    }
  }
  const unsigned used = r.ell.value_or(r.ell_mne);
  r.leaf_rate = 1 - mne(used) - r.gamma_bound_qm - eps / 4;
  if (n0) {
    const double k = std::floor(static_cast<double>(*n0) * r.leaf_rate + 1e-9);
    r.leaf_k = k > 0 ? static_cast<unsigned long>(k) : 0;
  }
  return r;
}

std::vector<CurvePoint> curve(const std::string& name, unsigned q, unsigned grid, const LawMode& mode) {
  if (grid < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<CurvePoint> out;
  std::optional<unsigned> ell;
  if (name.rfind("finite:", 0) == 0) {
    const std::string s = name.substr(7);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("finite curve needs finite:<ell>");
    ell = static_cast<unsigned>(std::stoul(s));
  } else if (name != "gs" && name != "kv" && name != "uv1" && name != "uv2" && name != "uv3") {
    throw std::invalid_argument("unknown curve '" + name + "'");
  }
  FieldRef f;
  if (name == "kv" || ell) {
    const auto [pc, e] = prime_power(q);
    f = make_field(pc, e);
  }
  for (unsigned i = 0; i < grid; ++i) {
    const double p = static_cast<double>(i) / (grid - 1);
    double v;
    if (name == "gs")
      v = gs_baseline(p);
    else if (name == "kv")
      v = kv_qsc_capacity(p, q);
    else if (name == "uv1")
      v = c_uv_depth1(p);
    else if (name == "uv2")
      v = c_uv_depth2(p);
    else if (name == "uv3")
      v = c_uv_depth3(p);
    else
      v = finite_length_capacity(qsc(f, p), *ell, mode).value;
    out.push_back({p, v});
  }
  return out;
}

}  // namespace uvkv
