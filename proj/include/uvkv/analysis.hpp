#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uvkv/channel.hpp"

namespace uvkv {

// (1-p)^2, the q -> infinity limit of the KV threshold on the q-SC.
double gs_baseline(double p);
// (1-p)^2 + p^2/(q-1)
double kv_qsc_capacity(double p, double q);

// Average KV capacity of the 2^d leaf channels of the q-SC as q -> infinity.
double c_uv_depth1(double p);
double c_uv_depth2(double p);
double c_uv_depth3(double p);
double c_uv_depth(unsigned d, double p);  // d in 0..3

// Limit of E||pi||^2 for the leaf channel W^path of the q-SC, |path| in 1..3.
double leaf_closed_form(const std::string& path, double p);
// 2^-d sum of leaf_closed_form over all paths of length d
double leaf_average(unsigned d, double p);
// |c_uv_depth(d, p) - leaf_average(d, p)| in exact rational arithmetic at
// p = num/den, rounded to double at the end (0 when the identity holds).
double curve_identity_residual_exact(unsigned d, long num, long den);

struct Crossing {
  double p;     // first p where c_uv_depth(d, p) rises above (1-p)^2
  double rate;  // (1-p)^2 there
};
std::optional<Crossing> gs_crossing(unsigned d);

struct FiniteCapacity {
  double value;
  bool monte_carlo;
};
// (1/2^ell) sum_i C_KV(W^i)
FiniteCapacity finite_length_capacity(const Channel& ch, unsigned ell, const LawMode& mode = {});

struct PolarizationResult {
  double fraction;  // certified count for "bracket"
  double lower, upper;
  std::string method;  // "exact", "bracket", "monte-carlo"
};
// Fraction of leaves with Z(W^i) <= threshold. Exact evolution when it fits
// the limits, otherwise degrade/upgrade bracketing (q = 2) or Monte Carlo.
PolarizationResult polarization_fraction(const Channel& ch, unsigned ell, double threshold, const LawMode& mode = {},
                                         unsigned bins = 1024);

// ---- list-size bounds for AG codes (genus g, m = designed degree)

double ag_delta_bound(double C, double m, double g);
double ag_list_bound(double C, double m, double g);
// Factor multiplying sqrt(m) in the sufficient condition; throws
// std::domain_error when L is outside the feasible range.
double ag_soft_factor(double L, double rtilde, double gtilde, double q);
// Smallest integer L with ag_soft_factor(L) <= 1 + delta/3.
unsigned long ag_required_list(double delta, double rtilde, double gtilde, double q);
unsigned long rs_required_list(double delta, double rstar, double q);

struct TvzReport {
  unsigned q = 0;
  bool q_square = false;
  double gamma_bound_q = 0;  // 1/(sqrt q - 1), NaN unless q is a square
  unsigned m = 0;            // smallest even m with 1/(sqrt(q^m)-1) <= eps/4
  double qm = 0;
  double gamma_bound_qm = 0;
  double distance_bound = 0;  // 1 - R - 1/(sqrt(q^m)-1)
  unsigned ell_mne = 0;       // smallest ell with m(q-1)2^{-n^beta} <= eps/4
  std::optional<unsigned> ell;  // also meeting the good-fraction condition (needs a channel)
  double good_fraction = 0;
  double leaf_rate = 0;  // k/N0 for N0 -> infinity
  std::optional<unsigned long> leaf_k;  // for a given N0
};
TvzReport tvz_planner(unsigned q, double R, double eps, double beta = 0.25, std::optional<unsigned long> n0 = {},
                      const Channel* ch = nullptr, unsigned max_ell = 8);

// ---- curves

struct CurvePoint {
  double p, value;
};
// name: gs, kv, uv1, uv2, uv3, finite:<ell>. grid points p = i/(grid-1).
std::vector<CurvePoint> curve(const std::string& name, unsigned q, unsigned grid, const LawMode& mode = {});

}  // namespace uvkv
