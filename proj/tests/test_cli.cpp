#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "uvkv/analysis.hpp"

using namespace uvkv;

namespace {

struct Run {
  int rc;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = cli::run(std::move(args), out, err);
  return {rc, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);)
    if (!l.empty() && l[0] != '#') v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) v.push_back(f);
  return v;
}

double h2(double p) { return p <= 0 || p >= 1 ? 0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

TEST_CASE("every output starts with the config echo") {
  for (auto args : std::vector<std::vector<std::string>>{{"curves", "--curve", "gs", "--grid", "5"},
                                                         {"evolve", "--q", "2", "--p", "0.1", "--depth", "1"},
                                                         {"design", "--q", "16", "--p", "0.1", "--depth", "1"},
                                                         {"agbounds", "--m", "3", "--q", "16", "--L", "50"}}) {
    auto r = run(args);
    REQUIRE(r.rc == 0);
    CHECK(r.out.rfind("# uvkv 0.1.0 " + args[0], 0) == 0);
  }
}

TEST_CASE("curves gs") {
  auto r = run({"curves", "--curve", "gs", "--grid", "101"});
  REQUIRE(r.rc == 0);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 102);
  CHECK(rows[0] == "p,value");
  CHECK(rows[1] == "0,1");
  auto last = fields(rows.back());
  CHECK(std::stod(last[0]) == 1);
  CHECK(std::stod(last[1]) == 0);
}

TEST_CASE("curves uv3 reports the crossing near rate 0.475") {
  auto r = run({"curves", "--curve", "uv3", "--grid", "201"});
  REQUIRE(r.rc == 0);
  auto pos = r.out.find("rate=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 5)) == doctest::Approx(0.475).epsilon(0.01 / 0.475));
  // and the rows themselves cross (1-p)^2 there
  double prev_diff = 0, cross = -1;
  for (auto& l : data_lines(r.out)) {
    if (l == "p,value") continue;
    auto f = fields(l);
    const double p = std::stod(f[0]), d = std::stod(f[1]) - gs_baseline(p);
    if (p > 0.05 && prev_diff <= 0 && d > 0 && cross < 0) cross = gs_baseline(p);
    prev_diff = d;
  }
  CHECK(cross == doctest::Approx(0.475).epsilon(0.02 / 0.475));
}

TEST_CASE("bad flags fail") {
  CHECK(run({"curves"}).rc != 0);
  CHECK(run({"curves", "--curve", "nope"}).rc != 0);
  CHECK(run({"nosuch"}).rc != 0);
  CHECK(run({"evolve", "--q", "6", "--p", "0.1"}).rc != 0);
  CHECK(run({"simulate", "--p", "0.1"}).rc != 0);
  CHECK(run({"agbounds", "--q", "16"}).rc != 0);
}

TEST_CASE("evolve: V channel of the BSC") {
  auto r = run({"evolve", "--q", "2", "--p", "0.1", "--path", "1"});
  REQUIRE(r.rc == 0);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 2);
  auto f = fields(rows[1]);
  // W^1 of BSC(p) is BSC(2p(1-p)) = BSC(0.18)
  CHECK(f[0] == "1");
  CHECK(std::stod(f[3]) == doctest::Approx(1 - h2(0.18)).epsilon(1e-10));
  CHECK(std::stod(f[4]) == doctest::Approx(2 * std::sqrt(0.18 * 0.82)).epsilon(1e-10));
  CHECK(std::stod(f[5]) == doctest::Approx(0.82 * 0.82 + 0.18 * 0.18).epsilon(1e-10));

  auto law = run({"evolve", "--q", "2", "--p", "0.1", "--path", "1", "--law"});
  REQUIRE(law.rc == 0);
  auto lr = data_lines(law.out);
  CHECK(lr.size() == 3);  // header + two classes
}

TEST_CASE("evolve: noiseless depth 3 and q=256 depth 2") {
  auto r = run({"evolve", "--q", "2", "--p", "0", "--depth", "3"});
  REQUIRE(r.rc == 0);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 9);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(fields(rows[i])[3]) == 0);

  r = run({"evolve", "--q", "256", "--p", "0.1", "--depth", "2"});
  REQUIRE(r.rc == 0);
  rows = data_lines(r.out);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto f = fields(rows[i]);
    CHECK(std::abs(std::stod(f[4]) - leaf_closed_form(f[0], 0.1)) <= 5.0 / 256);
  }
}

TEST_CASE("evolve blowup points at --monte-carlo") {
  auto r = run({"evolve", "--q", "256", "--p", "0.1", "--path", "0110"});
  CHECK(r.rc == 3);
  CHECK(r.err.find("--monte-carlo") != std::string::npos);
  r = run({"evolve", "--q", "256", "--p", "0.1", "--path", "0110", "--monte-carlo", "--trials", "300"});
  CHECK(r.rc == 0);
}

TEST_CASE("design: q=256 depth 3 rates follow the leaf forms") {
  auto r = run({"design", "--q", "256", "--p", "0.1", "--depth", "3", "--policy", "kv_margin", "--epsilon", "0.05"});
  REQUIRE(r.rc == 0);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == "256 256 3");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream is(rows[i]);
    std::string path, kind;
    double k;
    is >> path >> kind >> k;
    CHECK(std::abs(k / 256 - (leaf_closed_form(path, 0.1) - 0.05)) <= 5.0 / 256 + 1.0 / 256);
  }
}

TEST_CASE("simulate: zero noise, spec file, config file and determinism") {
  const std::string spec = "cli_test_tree.spec", cfg = "cli_test.cfg";
  {
    std::ofstream(spec) << "16 8 1\n0 rs 3\n1 rs 6\n";
    std::ofstream(cfg) << "# test\ncommand = simulate\ntree_spec = " << spec << "\np = 0 0.05\ntrials = 200\nL = 4\n";
  }
  auto r = run({"--config", cfg});
  REQUIRE(r.rc == 0);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 3);
  auto f0 = fields(rows[1]);
  CHECK(f0[2] == "0");
  CHECK(f0[4] == "0");  // frame errors at p = 0
  CHECK(std::stod(f0[0]) == doctest::Approx(9.0 / 16));

  // command line wins over the file
  auto r2 = run({"--config", cfg, "--trials", "50"});
  REQUIRE(r2.rc == 0);
  CHECK(fields(data_lines(r2.out)[1])[3] == "50");

  auto a = run({"simulate", "--tree-spec", spec, "--p", "0.15", "--trials", "300", "--seed", "3", "--workers", "1"});
  auto b = run({"simulate", "--tree-spec", spec, "--p", "0.15", "--trials", "300", "--seed", "3", "--workers", "4"});
  auto c = run({"simulate", "--tree-spec", spec, "--p", "0.15", "--trials", "300", "--seed", "4"});
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  std::remove(spec.c_str());
  std::remove(cfg.c_str());
}

TEST_CASE("simulate: Wilson interval contains the FER") {
  auto r = run({"simulate", "--design", "--q", "16", "--depth", "1", "--n0", "16", "--epsilon", "0.05", "--p", "0.2",
                "--trials", "200", "--L", "6"});
  REQUIRE(r.rc == 0);
  auto f = fields(data_lines(r.out)[1]);
  const double fer = std::stod(f[5]), lo = std::stod(f[6]), hi = std::stod(f[7]);
  CHECK(fer == doctest::Approx(std::stod(f[4]) / std::stod(f[3])));
  CHECK(lo <= fer);
  CHECK(fer <= hi);
}

TEST_CASE("agbounds examples") {
  auto r = run({"agbounds", "--m", "10", "--g", "0", "--q", "16", "--L", "20"});
  REQUIRE(r.rc == 0);
  auto f = fields(data_lines(r.out)[1]);
  REQUIRE(f.size() == 3);
  CHECK(std::stod(f[1]) == doctest::Approx(std::stod(f[2])).epsilon(1e-11));

  r = run({"agbounds", "--delta", "0.1", "0.05", "0.02", "--rtilde", "0.5", "--gtilde", "0.1", "--q", "16"});
  REQUIRE(r.rc == 0);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 4);
  double lo = 1e300, hi = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    const double Ld = std::stod(fields(rows[i])[2]);
    lo = std::min(lo, Ld), hi = std::max(hi, Ld);
  }
  CHECK(hi / lo <= 3);

  r = run({"agbounds", "--m", "10", "--g", "1", "--cost", "20", "--q", "16", "--L", "100"});
  REQUIRE(r.rc == 0);
  auto pos = r.out.find("delta_bound=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 12)) == doctest::Approx(21.5183).epsilon(1e-5));
}
