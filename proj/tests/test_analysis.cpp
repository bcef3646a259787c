#include <cmath>

#include "doctest.h"
#include "uvkv/analysis.hpp"
#include "uvkv/kv.hpp"

using namespace uvkv;

TEST_CASE("baseline examples") {
  CHECK(gs_baseline(0) == 1);
  CHECK(gs_baseline(1) == 0);
  CHECK(gs_baseline(0.3) == doctest::Approx(0.49));
  CHECK(kv_qsc_capacity(0.3, 256) == doctest::Approx(0.49 + 0.09 / 255).epsilon(1e-14));
  CHECK(kv_qsc_capacity(0, 16) == 1);
  // q -> infinity at p = 1
  CHECK(kv_qsc_capacity(1, 1e12) < 1e-11);
}

TEST_CASE("kv_qsc_capacity agrees with the channel computation") {
  for (unsigned e : {1u, 2u, 4u})
    for (int i = 0; i <= 10; ++i) {
      const double p = i / 10.0;
      auto f = make_field(2, e);
      CHECK(std::abs(kv_capacity(qsc(f, p)) - kv_qsc_capacity(p, f->order())) < 1e-12);
    }
}

TEST_CASE("depth-1 curve") {
  CHECK(c_uv_depth1(0) == doctest::Approx(1.0));
  CHECK(std::abs(c_uv_depth1(1)) < 1e-15);
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    const double printed = (p * p * p - 4 * p * p + 4 * p - 4) * (1 - p) * (1 - p) / (2 * (p - 2));
    const double avg = 0.5 * ((p + 2) * (1 - p) * (1 - p) / (2 - p) + std::pow(1 - p, 4));
    CHECK(c_uv_depth1(p) == doctest::Approx(printed).epsilon(1e-12));
    CHECK(c_uv_depth1(p) == doctest::Approx(avg).epsilon(1e-12));
  }
}

TEST_CASE("leaf closed form examples") {
  for (double p : {0.0, 0.1, 0.37, 0.5, 1.0}) {
    CHECK(leaf_closed_form("1", p) == doctest::Approx(std::pow(1 - p, 4)));
    CHECK(leaf_closed_form("11", p) == doctest::Approx(std::pow(1 - p, 8)));
    CHECK(leaf_closed_form("111", p) == doctest::Approx(std::pow(1 - p, 16)));
    CHECK(leaf_closed_form("0", p) == doctest::Approx((p + 2) * (1 - p) * (1 - p) / (2 - p)));
  }
  CHECK_THROWS(leaf_closed_form("", 0.1));
  CHECK_THROWS(leaf_closed_form("0101", 0.1));
  CHECK_THROWS(leaf_closed_form("02", 0.1));
}

TEST_CASE("curve identities hold on a 101-point grid") {
  for (unsigned d = 1; d <= 3; ++d)
    for (long i = 0; i <= 100; ++i) {
      CHECK(curve_identity_residual_exact(d, i, 100) < 1e-9);
      CHECK(std::abs(c_uv_depth(d, i / 100.0) - leaf_average(d, i / 100.0)) < 1e-9);
    }
}

TEST_CASE("curves stay in [0, 1] with the right endpoints") {
  for (unsigned d = 0; d <= 3; ++d) {
    CHECK(c_uv_depth(d, 0) == doctest::Approx(1.0));
    CHECK(std::abs(c_uv_depth(d, 1)) < 1e-12);
    for (int i = 0; i <= 200; ++i) {
      const double v = c_uv_depth(d, i / 200.0);
      CHECK(v >= -1e-12);
      CHECK(v <= 1 + 1e-12);
    }
  }
  CHECK_THROWS(c_uv_depth(4, 0.1));
}

TEST_CASE("crossings with the GS baseline") {
  const double want[] = {0.17, 0.325, 0.475};
  for (unsigned d = 1; d <= 3; ++d) {
    auto c = gs_crossing(d);
    REQUIRE(c.has_value());
    INFO("depth " << d << " rate " << c->rate);
    CHECK(std::abs(c->rate - want[d - 1]) <= 0.01);
    CHECK(c->rate == doctest::Approx(gs_baseline(c->p)));
    // below the crossing point in p the (U|U+V) curve is not above GS
    CHECK(c_uv_depth(d, c->p * 0.9) <= gs_baseline(c->p * 0.9) + 1e-12);
    CHECK(c_uv_depth(d, std::min(1.0, c->p * 1.1)) > gs_baseline(std::min(1.0, c->p * 1.1)));
  }
}

TEST_CASE("exact evolution at q = 256 reproduces the leaf forms, depth 1 and 2") {
  auto f = make_field(2, 8);
  for (double p : {0.1, 0.3, 0.5}) {
    auto ch = qsc(f, p);
    for (unsigned d = 1; d <= 2; ++d) {
      auto info = all_path_info(ch, d);
      for (std::size_t i = 0; i < info.size(); ++i) {
        const std::string path = path_string(i, d);
        INFO("p " << p << " path " << path);
        CHECK(info[i].method != "monte-carlo");
        CHECK(std::abs(info[i].info.kv_capacity - leaf_closed_form(path, p)) <= 5.0 / 256);
      }
    }
  }
}

TEST_CASE("finite-length capacity") {
  auto f = make_field(2, 4);
  auto ch = qsc(f, 0.2);
  CHECK(finite_length_capacity(ch, 0).value == doctest::Approx(kv_capacity(ch)).epsilon(1e-12));
  for (unsigned l = 1; l <= 2; ++l) {
    auto fc = finite_length_capacity(ch, l);
    CHECK_FALSE(fc.monte_carlo);
    double s = 0;
    for (std::size_t i = 0; i < (std::size_t(1) << l); ++i) s += kv_capacity(evolve(ch, path_string(i, l)));
    CHECK(fc.value == doctest::Approx(s / (1 << l)).epsilon(1e-9));
  }
  auto f256 = make_field(2, 8);
  for (double p : {0.1, 0.25, 0.4})
    for (unsigned l = 1; l <= 2; ++l)
      CHECK(std::abs(finite_length_capacity(qsc(f256, p), l).value - c_uv_depth(l, p)) <= 5.0 / 256);
}

TEST_CASE("polarization fraction examples") {
  auto f = make_field(2);
  CHECK(polarization_fraction(qsc(f, 0), 4, 1e-3).fraction == 1.0);
  CHECK(polarization_fraction(qsc(make_field(3), 2.0 / 3), 3, 0.9).fraction == 0.0);
  auto a = polarization_fraction(qsc(f, 0.11), 4, 0.1);
  auto b = polarization_fraction(qsc(f, 0.11), 6, 0.1);
  CHECK(a.method == "exact");
  CHECK(b.method == "exact");
  CHECK(a.fraction == doctest::Approx(0.1875));
  CHECK(b.fraction == doctest::Approx(0.28125));
  CHECK(b.fraction >= a.fraction);
  CHECK(b.fraction < symmetric_capacity(qsc(f, 0.11)));
}

TEST_CASE("AG distance and list bounds") {
  CHECK(ag_delta_bound(20, 10, 1) == doctest::Approx(1 + std::sqrt(421.0)).epsilon(1e-14));
  CHECK(ag_delta_bound(20, 10, 1) == doctest::Approx(21.5183).epsilon(1e-5));
  for (double C : {1.0, 7.0, 50.0, 1234.0})
    for (double m : {1.0, 2.0, 9.0}) {
      CHECK(ag_delta_bound(C, m, 0) == doctest::Approx(std::sqrt(2 * m * C)));
      CHECK(ag_list_bound(C, m, 0) == doctest::Approx(std::sqrt(2 * C / m)));
      for (double g : {0.0, 1.0, 3.5, 10.0}) {
        const double L = ag_list_bound(C, m, g);
        CHECK(std::abs(m * L * L - 2 * L * g - 2 * g - 2 * C) <= 1e-9 * std::max(1.0, C));
      }
    }
  MultiplicityMatrix M(4, 5, 1);  // cost 20
  CHECK(ag_list_bound(20, 2, 0) == doctest::Approx(list_bound(M, 3)).epsilon(1e-14));
}

TEST_CASE("AG soft factor reduces to the RS factor") {
  for (double q : {4.0, 16.0, 256.0})
    for (std::size_t n : {12u, 30u, 255u})
      for (std::size_t k : {2u, 3u, 10u}) {
        if (k > n) continue;
        const double rs = (k - 1.0) / n;
        for (double L : {40.0, 200.0, 5000.0}) {
          double want;
          try {
            want = rhs_bound(k, L, static_cast<Symbol>(q), n) / std::sqrt(k - 1.0);
          } catch (const std::domain_error&) {
            CHECK_THROWS_AS(ag_soft_factor(L, rs, 0, q), std::domain_error);
            continue;
          }
          const double direct = 1 / (1 - (1 / L) * (1 / rs + std::sqrt(q) / (2 * std::sqrt(rs))));
          CHECK(std::abs(ag_soft_factor(L, rs, 0, q) - want) <= 1e-12 * want);
          CHECK(std::abs(ag_soft_factor(L, rs, 0, q) - direct) <= 1e-12 * direct);
        }
      }
  CHECK(ag_soft_factor(1e12, 0.5, 0.1, 16) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(ag_soft_factor(1, 0.5, 0.1, 16), std::domain_error);
}

TEST_CASE("required list sizes scale like 1/delta") {
  for (double gt : {0.0, 0.1, 0.3}) {
    double lo = 1e300, hi = 0;
    unsigned long prev = 0;
    for (double delta : {0.1, 0.05, 0.02}) {
      const unsigned long L = ag_required_list(delta, 0.5, gt, 16);
      CHECK(ag_soft_factor(static_cast<double>(L), 0.5, gt, 16) <= 1 + delta / 3);
      if (L > 1) {
        bool below = true;
        try {
          below = ag_soft_factor(L - 1.0, 0.5, gt, 16) > 1 + delta / 3;
        } catch (const std::domain_error&) {
        }
        CHECK(below);
      }
      CHECK(L > prev);
      prev = L;
      lo = std::min(lo, L * delta);
      hi = std::max(hi, L * delta);
    }
    CHECK(hi / lo <= 3);
  }
}

TEST_CASE("rs_required_list") {
  CHECK(rs_required_list(3, 1, 4) == 4);
  unsigned long prev = ~0ul;
  for (double delta : {0.02, 0.05, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    const unsigned long L = rs_required_list(delta, 0.25, 16);
    CHECK(L <= prev);
    prev = L;
  }
  // with this L the denominator of the RS factor keeps a delta/(3+delta) margin
  for (double delta : {0.02, 0.1, 0.7})
    for (double rs : {0.05, 0.3, 0.9})
      for (double q : {4.0, 64.0}) {
        const double L = static_cast<double>(rs_required_list(delta, rs, q));
        const double den = 1 - (1 / L) * (1 / rs + std::sqrt(q) / (2 * std::sqrt(rs)));
        CHECK(den >= delta / (3 + delta) - 1e-12);
      }
  CHECK_THROWS(rs_required_list(0, 0.5, 4));
}

TEST_CASE("tvz planner examples") {
  CHECK(tvz_planner(4, 0.5, 0.1).gamma_bound_q == doctest::Approx(1.0));
  CHECK(tvz_planner(16, 0.5, 0.1).gamma_bound_q == doctest::Approx(1.0 / 3));
  auto r = tvz_planner(2, 0.5, 0.4);
  CHECK_FALSE(r.q_square);
  CHECK(std::isnan(r.gamma_bound_q));
  CHECK(r.m == 8);
  CHECK(r.gamma_bound_qm == doctest::Approx(1.0 / 15));
  CHECK(r.distance_bound == doctest::Approx(0.5 - 1.0 / 15));
  // mne condition at the reported depth and not one below
  auto mne = [&](unsigned l) { return r.m * std::exp2(-std::pow(std::ldexp(1.0, l), 0.25)); };
  CHECK(mne(r.ell_mne) <= 0.1);
  if (r.ell_mne) CHECK(mne(r.ell_mne - 1) > 0.1);
  auto k = tvz_planner(2, 0.5, 0.4, 0.25, 1000ul);
  REQUIRE(k.leaf_k.has_value());
  CHECK(*k.leaf_k == static_cast<unsigned long>(std::floor(1000 * k.leaf_rate + 1e-9)));
}

TEST_CASE("curve tables") {
  auto g = curve("gs", 0, 101);
  REQUIRE(g.size() == 101);
  CHECK(g[0].p == 0);
  CHECK(g[0].value == 1);
  CHECK(g[100].p == 1);
  auto k = curve("kv", 16, 11);
  for (const auto& pt : k) CHECK(pt.value == doctest::Approx(kv_qsc_capacity(pt.p, 16)));
  auto u = curve("uv2", 0, 21);
  for (const auto& pt : u) CHECK(pt.value == doctest::Approx(c_uv_depth2(pt.p)));
  auto fin = curve("finite:1", 8, 5);
  for (const auto& pt : fin)
    CHECK(pt.value == doctest::Approx(finite_length_capacity(qsc(make_field(2, 3), pt.p), 1).value));
  CHECK_THROWS(curve("uv4", 16, 11));
  CHECK_THROWS(curve("finite:x", 16, 11));
  CHECK_THROWS(curve("gs", 16, 1));
}
