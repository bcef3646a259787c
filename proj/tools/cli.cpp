#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "uvkv/analysis.hpp"
#include "uvkv/channel.hpp"
#include "uvkv/kv.hpp"
#include "uvkv/sim.hpp"
#include "uvkv/uuv.hpp"
#include "uvkv/version.hpp"

namespace uvkv::cli {
namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string out;
  std::string config;
};

// `key=value` pairs echoed in the leading comment of every output. Worker
// count and output path are left out since they never change the results.
class Echo {
 public:
  template <class T>
  Echo& operator()(const std::string& k, const T& v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    kv_.emplace_back(k, s.str());
    return *this;
  }
  template <class T>
  Echo& operator()(const std::string& k, const std::vector<T>& v) {
    std::ostringstream s;
    s << std::setprecision(12);
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
    kv_.emplace_back(k, s.str());
    return *this;
  }
  void write(std::ostream& os, const std::string& cmd) const {
    os << "# uvkv " << kVersion << " " << cmd;
    for (auto& [k, v] : kv_) os << " " << k << "=" << (v.find(' ') == std::string::npos ? v : "\"" + v + "\"");
    os << "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> kv_;
};

FieldRef field_of(unsigned q) {
  const auto [p, e] = prime_power(q);
  return make_field(p, e);
}

// Inserts config-file entries as flags ahead of the command-line ones; a key
// also given on the command line is skipped. `command = name` selects the
// subcommand when the command line has none.
std::vector<std::string> expand_config(const std::vector<std::string>& args, const std::set<std::string>& commands) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);

  auto given = [&](const std::string& key) {
    for (auto& a : args)
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    return false;
  };
  std::string command;
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "command") {
      command = value;
      continue;
    }
    if (key == "config" || given(key)) continue;
    if (value == "true") {
      extra.push_back("--" + key);
    } else if (value != "false") {
      extra.push_back("--" + key);
      std::istringstream vs(value);
      for (std::string tok; vs >> tok;) extra.push_back(tok);
    }
  }
  std::vector<std::string> res = args;
  auto has_cmd = std::any_of(args.begin(), args.end(), [&](auto& a) { return commands.count(a) > 0; });
  auto at = res.end();
  if (!has_cmd && !command.empty()) {
    res.insert(res.begin(), command);
    at = res.begin() + 1;
  } else {
    at = std::find_if(res.begin(), res.end(), [&](auto& a) { return commands.count(a) > 0; });
    if (at != res.end()) ++at;
  }
  res.insert(at, extra.begin(), extra.end());
  return res;
}

// ---- curves

struct CurvesOpts {
  std::string name;
  unsigned q = 256;
  unsigned grid = 101;
  bool exact = false;
  std::uint64_t trials = 2000;
};

void cmd_curves(const CurvesOpts& o, const Globals& g, std::ostream& os) {
  LawMode mode;
  mode.allow_monte_carlo = !o.exact;
  mode.trials = o.trials;
  mode.seed = g.seed;
  mode.workers = g.workers;
  auto pts = curve(o.name, o.q, o.grid, mode);
  Echo e;
  e("curve", o.name)("q", o.q)("grid", o.grid);
  // finite:<ell> falls back to Monte Carlo leaves when exact evolution is too large
  if (o.name.rfind("finite:", 0) == 0) {
    if (o.exact)
      e("exact", 1);
    else
      e("trials", o.trials)("seed", g.seed);
  }
  e.write(os, "curves");
  if (o.name.size() == 3 && o.name.rfind("uv", 0) == 0) {
    if (auto c = gs_crossing(static_cast<unsigned>(o.name[2] - '0')))
      os << "# crosses gs at p=" << std::setprecision(6) << c->p << " rate=" << c->rate << "\n";
  }
  os << "p,value\n" << std::setprecision(12);
  for (auto& pt : pts) os << pt.p << "," << pt.value << "\n";
}

// ---- evolve

struct EvolveOpts {
  unsigned q = 2;
  double p = 0.1;
  std::string path;
  int depth = -1;
  bool law = false;
  bool monte_carlo = false;
  std::uint64_t trials = 100000;
};

void cmd_evolve(const EvolveOpts& o, const Globals& g, std::ostream& os) {
  auto ch = qsc(field_of(o.q), o.p);
  LawMode mode;
  mode.allow_monte_carlo = o.monte_carlo;
  mode.trials = o.trials;
  mode.seed = g.seed;
  mode.workers = g.workers;
  Echo e;
  e("q", o.q)("p", o.p);
  if (!o.path.empty()) e("path", o.path);
  if (o.depth >= 0) e("depth", o.depth);
  if (o.law) e("law", 1);
  if (o.monte_carlo) e("monte-carlo", 1)("trials", o.trials)("seed", g.seed);

  if (!o.path.empty()) {
    for (char c : o.path)
      if (c != '0' && c != '1') throw CLI::ValidationError("--path", "path must be a 0/1 string");
    ChannelLaw law;
    try {
      law = channel_law(ch, o.path, mode);
    } catch (const BlowupError&) {
      if (!o.monte_carlo) throw;
      mode.kind = LawMode::monte_carlo;
      law = channel_law(ch, o.path, mode);
    }
    e.write(os, "evolve");
    if (o.law) {
      write_law_csv(os, law);
      return;
    }
    auto s = law.summary();
    os << "path,method,classes,capacity,bhattacharyya,kv_capacity\n" << std::setprecision(12);
    os << o.path << "," << (mode.kind == LawMode::exact ? "exact" : "monte-carlo") << "," << law.entries.size() << ","
       << s.capacity << "," << s.bhattacharyya << "," << s.kv_capacity << "\n";
    return;
  }
  if (o.law) throw CLI::ValidationError("--law", "needs --path");
  const unsigned d = o.depth < 0 ? 0 : static_cast<unsigned>(o.depth);
  auto infos = all_path_info(ch, d, mode);
  e.write(os, "evolve");
  os << "path,method,capacity,bhattacharyya,kv_capacity,kv_stderr\n" << std::setprecision(12);
  for (std::size_t i = 0; i < infos.size(); ++i) {
    auto& r = infos[i];
    os << (d ? path_string(i, d) : "-") << "," << r.method << "," << r.info.capacity << "," << r.info.bhattacharyya
       << "," << r.info.kv_capacity << "," << r.kv_stderr << "\n";
  }
}

// ---- design

struct DesignOpts {
  unsigned q = 256;
  double p = 0.1;
  unsigned depth = 2;
  std::string policy = "kv_margin";
  double epsilon = 0.05;
  std::size_t n0 = 0;  // 0: q for kv_margin
  unsigned m = 1;
  double beta = 0.25;
};

DesignPolicy policy_of(const DesignOpts& o) {
  DesignPolicy pol;
  if (o.policy == "kv_margin")
    pol.kind = DesignPolicy::kv_margin;
  else if (o.policy == "capacity_recipe")
    pol.kind = DesignPolicy::capacity_recipe;
  else
    throw CLI::ValidationError("--policy", "expected kv_margin or capacity_recipe");
  pol.epsilon = o.epsilon;
  pol.m = o.m;
  pol.beta = o.beta;
  return pol;
}

LawMode design_mode(const Globals& g) {
  LawMode mode;
  mode.seed = g.seed;
  mode.workers = g.workers;
  return mode;
}

void cmd_design(const DesignOpts& o, const Globals& g, std::ostream& os) {
  auto ch = qsc(field_of(o.q), o.p);
  const auto pol = policy_of(o);
  auto d = design_rates(ch, o.depth, pol, o.n0 ? o.n0 : o.q, design_mode(g));
  Echo e;
  e("q", o.q)("p", o.p)("depth", o.depth)("policy", o.policy)("epsilon", o.epsilon)("n0", d.n0);
  if (pol.kind == DesignPolicy::capacity_recipe) e("m", o.m)("beta", o.beta);
  e.write(os, "design");
  os << std::setprecision(10) << "# rate=" << d.rate << " fer_proxy=" << d.fer_proxy
     << (d.monte_carlo ? " monte_carlo=1" : "") << "\n";
  for (std::size_t i = 0; i < d.leaf_info.size(); ++i)
    os << "# leaf " << (o.depth ? path_string(i, o.depth) : "-") << " kv_capacity=" << d.leaf_info[i].info.kv_capacity
       << " bhattacharyya=" << d.leaf_info[i].info.bhattacharyya << " method=" << d.leaf_info[i].method << "\n";
  write_tree_spec(os, tree_from_design(d));
}

// ---- simulate

struct SimOpts {
  std::string tree_spec;
  bool design = false;
  DesignOpts d;
  std::vector<std::size_t> n0s;
  std::vector<double> ps;
  std::uint64_t trials = 1000;
  double L = 16;
  bool genie = false;
  bool wall_time = false;
};

void cmd_simulate(const SimOpts& o, const Globals& g, std::ostream& os) {
  if (o.tree_spec.empty() == !o.design) throw CLI::ValidationError("simulate", "give exactly one of --tree-spec, --design");
  if (o.ps.empty()) throw CLI::ValidationError("--p", "at least one crossover probability is required");
  std::unique_ptr<CodeTree> fixed;
  if (!o.tree_spec.empty()) {
    std::ifstream in(o.tree_spec);
    if (!in) throw std::runtime_error("cannot open tree spec " + o.tree_spec);
    fixed = std::make_unique<CodeTree>(read_tree_spec(in));
  }
  Echo e;
  if (fixed)
    e("tree-spec", o.tree_spec);
  else {
    e("design", o.d.policy)("q", o.d.q)("depth", o.d.depth)("epsilon", o.d.epsilon);
    if (o.d.policy == "capacity_recipe") e("m", o.d.m)("beta", o.d.beta);
    if (!o.n0s.empty()) e("n0", o.n0s);
  }
  e("p", o.ps)("trials", o.trials)("seed", g.seed)("L", o.L)("genie", o.genie ? 1 : 0);
  e.write(os, "simulate");
  os << "rate,n0,p,trials,frame_errors,fer,lo,hi,fallbacks,leaf_errors";
  if (o.wall_time) os << ",seconds";
  os << "\n" << std::setprecision(10);

  SimConfig cfg;
  cfg.trials = o.trials;
  cfg.seed = g.seed;
  cfg.workers = g.workers;
  cfg.L = o.L;
  cfg.genie = o.genie;
  auto row = [&](const CodeTree& t, const Channel& ch, double p) {
    auto r = simulate(t, ch, cfg);
    os << t.rate() << "," << t.leaf_length() << "," << p << "," << r.trials << "," << r.frame_errors << "," << r.fer
       << "," << r.lo << "," << r.hi << "," << r.fallbacks << ",";
    for (std::size_t i = 0; i < r.leaf_errors.size(); ++i) os << (i ? ";" : "") << r.leaf_errors[i];
    if (o.wall_time) os << "," << r.seconds;
    os << "\n";
  };
  for (double p : o.ps) {
    if (fixed) {
      row(*fixed, qsc(fixed->field(), p), p);
      continue;
    }
    const auto pol = policy_of(o.d);
    auto base = qsc(field_of(o.d.q), p);
    const Channel ch = pol.kind == DesignPolicy::capacity_recipe ? tensor_power(base, pol.m) : base;
    std::vector<std::size_t> n0s = o.n0s;
    if (n0s.empty()) n0s.push_back(o.d.q);
    for (std::size_t n0 : n0s) {
      auto d = design_rates(base, o.d.depth, pol, n0, design_mode(g));
      row(tree_from_design(d), ch, p);
      if (pol.kind == DesignPolicy::capacity_recipe) break;  // n0 is q^m
    }
  }
}

// ---- agbounds

struct AgOpts {
  double n = 0, m = 0, g = 0, q = 16;
  std::vector<double> L, delta;
  double rtilde = 0, gtilde = -1;
  double cost = 0;
};

void cmd_agbounds(const AgOpts& o, std::ostream& os) {
  if (o.L.empty() == o.delta.empty()) throw CLI::ValidationError("agbounds", "give exactly one of --L, --delta");
  double rt = o.rtilde, gt = o.gtilde;
  const double n = o.n > 0 ? o.n : o.q;
  if (rt <= 0) {
    if (o.m <= 0) throw CLI::ValidationError("agbounds", "need --rtilde or --m");
    rt = o.m / n;
  }
  if (gt < 0) gt = o.m > 0 ? o.g / o.m : 0;
  Echo e;
  e("q", o.q)("rtilde", rt)("gtilde", gt);
  if (o.m > 0) e("n", n)("m", o.m)("g", o.g);
  if (o.cost > 0) e("cost", o.cost);
  if (!o.L.empty())
    e("L", o.L);
  else
    e("delta", o.delta);
  e.write(os, "agbounds");
  os << std::setprecision(12);
  if (o.cost > 0 && o.m > 0)
    os << "# cost=" << o.cost << " delta_bound=" << ag_delta_bound(o.cost, o.m, o.g)
       << " list_bound=" << ag_list_bound(o.cost, o.m, o.g) << "\n";

  const bool genus0 = gt == 0 && o.m > 0;
  if (!o.L.empty()) {
    os << "L,factor" << (genus0 ? ",rs_factor" : "") << "\n";
    for (double L : o.L) {
      os << L << ",";
      try {
        os << ag_soft_factor(L, rt, gt, o.q);
      } catch (const std::domain_error&) {
        os << "infeasible";
      }
      if (genus0) {
        // RS code of dimension m + 1 and length n
        const auto k = static_cast<std::size_t>(o.m) + 1;
        os << ",";
        try {
          os << rhs_bound(k, L, static_cast<Symbol>(o.q), static_cast<std::size_t>(n)) / std::sqrt(o.m);
        } catch (const std::domain_error&) {
          os << "infeasible";
        }
      }
      os << "\n";
    }
    return;
  }
  os << "delta,required_L,L_times_delta,factor_at_L\n";
  for (double d : o.delta) {
    const auto L = ag_required_list(d, rt, gt, o.q);
    os << d << "," << L << "," << static_cast<double>(L) * d << "," << ag_soft_factor(static_cast<double>(L), rt, gt, o.q)
       << "\n";
  }
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterated (U|U+V) codes with Koetter-Vardy leaf decoding", "uvkv"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--workers", g.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--config", g.config, "key = value file; command-line flags win");
  app.set_version_flag("--version", kVersion);

  CurvesOpts co;
  auto* curves = app.add_subcommand("curves", "capacity curves as CSV");
  curves->add_option("--curve", co.name, "gs, kv, uv1, uv2, uv3 or finite:<ell>")->required();
  curves->add_option("--q", co.q)->capture_default_str();
  curves->add_option("--grid", co.grid)->capture_default_str()->check(CLI::Range(2u, 1000000u));
  curves->add_flag("--exact", co.exact, "fail instead of estimating leaves by Monte Carlo");
  curves->add_option("--trials", co.trials, "Monte Carlo trials per leaf channel")->capture_default_str();

  EvolveOpts eo;
  auto* evolve = app.add_subcommand("evolve", "leaf channel statistics of the q-SC");
  evolve->add_option("--q", eo.q)->capture_default_str();
  evolve->add_option("--p", eo.p)->required()->check(CLI::Range(0.0, 1.0));
  auto* po = evolve->add_option("--path", eo.path, "0/1 path, x1 first");
  evolve->add_option("--depth", eo.depth)->excludes(po);
  evolve->add_flag("--law", eo.law, "print the APP law of --path instead of its summary");
  evolve->add_flag("--monte-carlo", eo.monte_carlo);
  evolve->add_option("--trials", eo.trials)->capture_default_str();

  SimOpts so;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo frame error rates");
  auto* ts = sim->add_option("--tree-spec", so.tree_spec, "tree spec file")->check(CLI::ExistingFile);
  sim->add_flag("--design", so.design, "design the tree with the flags below")->excludes(ts);
  sim->add_option("--q", so.d.q)->capture_default_str();
  sim->add_option("--depth", so.d.depth)->capture_default_str();
  sim->add_option("--policy", so.d.policy)->capture_default_str();
  sim->add_option("--epsilon", so.d.epsilon)->capture_default_str();
  sim->add_option("--n0", so.n0s, "leaf lengths, one row each");
  sim->add_option("--m", so.d.m)->capture_default_str();
  sim->add_option("--beta", so.d.beta)->capture_default_str();
  sim->add_option("--p", so.ps, "crossover probabilities, one row each")->required();
  sim->add_option("--trials", so.trials)->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--L", so.L, "list size parameter")->capture_default_str();
  sim->add_flag("--genie", so.genie, "propagate true leaf words (per-leaf statistics)");
  sim->add_flag("--wall-time", so.wall_time, "add a seconds column (not reproducible)");

  DesignOpts dopt;
  auto* des = app.add_subcommand("design", "leaf rates; prints a tree spec");
  des->add_option("--q", dopt.q)->capture_default_str();
  des->add_option("--p", dopt.p)->required();
  des->add_option("--depth", dopt.depth)->capture_default_str();
  des->add_option("--policy", dopt.policy)->capture_default_str();
  des->add_option("--epsilon", dopt.epsilon)->capture_default_str();
  des->add_option("--n0", dopt.n0, "leaf length (default q)");
  des->add_option("--m", dopt.m)->capture_default_str();
  des->add_option("--beta", dopt.beta)->capture_default_str();

  AgOpts ao;
  auto* ag = app.add_subcommand("agbounds", "AG list-decoding bounds");
  ag->add_option("--n", ao.n, "code length (default q)");
  ag->add_option("--m", ao.m);
  ag->add_option("--g", ao.g)->capture_default_str();
  ag->add_option("--q", ao.q)->capture_default_str();
  ag->add_option("--L", ao.L);
  ag->add_option("--delta", ao.delta);
  ag->add_option("--rtilde", ao.rtilde);
  ag->add_option("--gtilde", ao.gtilde);
  ag->add_option("--cost", ao.cost, "interpolation cost for the delta and list bounds");

  try {
    args = expand_config(args, {"curves", "evolve", "simulate", "design", "agbounds"});
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::ofstream file;
  if (!g.out.empty()) {
    file.open(g.out);
    if (!file) {
      err << "error: cannot write " << g.out << "\n";
      return 2;
    }
  }
  std::ostream& os = g.out.empty() ? out : file;
  try {
    if (*curves) cmd_curves(co, g, os);
    if (*evolve) cmd_evolve(eo, g, os);
    if (*sim) cmd_simulate(so, g, os);
    if (*des) cmd_design(dopt, g, os);
    if (*ag) cmd_agbounds(ao, os);
  } catch (const BlowupError& e) {
    err << "error: " << e.what() << "; exact evolution is too large, rerun with --monte-carlo\n";
    return 3;
  } catch (const CLI::Error& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace uvkv::cli
