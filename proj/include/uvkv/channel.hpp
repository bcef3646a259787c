#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uvkv/gf.hpp"
#include "uvkv/matrix.hpp"

namespace uvkv {

using AppVector = std::vector<double>;

// Raised when exact evolution would exceed the configured output or work cap.
struct BlowupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// W(y|x): rows are inputs (field indices), columns are outputs.
class Channel {
 public:
  Channel(FieldRef f, Matrix<double> w, double tol = 1e-12);

  const FieldRef& field() const { return f_; }
  Symbol q() const { return f_->order(); }
  std::size_t outputs() const { return w_.cols(); }
  double operator()(Symbol x, std::size_t y) const { return w_(x, y); }
  const Matrix<double>& transition() const { return w_; }

 private:
  FieldRef f_;
  Matrix<double> w_;
};

struct InfoSummary {
  double capacity = 0;  // symmetric capacity, base q
  double bhattacharyya = 0;
  double kv_capacity = 0;
};

struct EvolveLimits {
  std::size_t max_outputs = std::size_t(1) << 18;
  double max_work = 0x1p31;  // pre-merge multiply count for one split
};

Channel qsc(FieldRef f, double p);
// Crossover probability if the channel is a q-SC up to output relabelling.
std::optional<double> qsc_parameter(const Channel& ch, double tol = 1e-12);

AppVector app(const Channel& ch, std::size_t y);
double output_probability(const Channel& ch, std::size_t y);
InfoSummary info(const Channel& ch);
double symmetric_capacity(const Channel& ch);
double bhattacharyya(const Channel& ch);
double kv_capacity(const Channel& ch);

// Per-vector functionals; averaging them over the law of the APP vector
// given input 0 yields InfoSummary for symmetric channels.
double app_sqnorm(const AppVector& pi);
double app_bhattacharyya(const AppVector& pi);
double app_entropy(const AppVector& pi);  // base q

struct SymmetryWitness {
  bool symmetric = false;
  std::vector<std::vector<std::size_t>> blocks;  // output indices per block
};
SymmetryWitness is_weakly_symmetric(const Channel& ch, double tol = 1e-12);
bool is_cyclic_symmetric(const Channel& ch, double tol = 1e-9);

// Merges outputs with equal APP vectors (tolerance 1e-10) and drops
// unreachable outputs. Information lossless.
Channel merge_outputs(const Channel& ch);
// bit 0: W0(y1,y2,u2|u1) = W(y1|u1)W(y2|u1+u2)/q, bit 1: W1(y1,y2|u2) =
// sum_u1 W(y1|u1)W(y2|u1+u2)/q. Result is merged.
Channel transform(const Channel& ch, int bit, const EvolveLimits& lim = {});
std::pair<Channel, Channel> split(const Channel& ch, const EvolveLimits& lim = {});
Channel evolve(const Channel& ch, const std::string& path, const EvolveLimits& lim = {});
// Unmerged split, for testing the merge.
std::pair<Channel, Channel> split_raw(const Channel& ch);

// Input tuple (x_1..x_m) is relabelled x_1 + x_2 q + ... which is additive
// in GF(q^m) index space.
Channel tensor_power(const Channel& ch, unsigned m, std::size_t max_outputs = std::size_t(1) << 18);

// ---- APP laws

struct LawEntry {
  AppVector pi;  // sigma-canonical
  double prob;
};

struct ChannelLaw {
  Symbol q = 0;
  std::vector<LawEntry> entries;  // sorted by probability, then vector
  InfoSummary summary() const;
  double total() const;
};

// Coordinate 0 kept, remaining coordinates sorted descending.
AppVector sigma_canonical(const AppVector& pi);

struct LawMode {
  enum Kind { exact, monte_carlo } kind = exact;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::size_t max_configs = 5'000'000;
  EvolveLimits limits{};
  // When false, an evolution blowup is rethrown instead of falling back.
  bool allow_monte_carlo = true;
};

ChannelLaw channel_law(const Channel& ch, const std::string& path, const LawMode& mode = {});

// Info of every leaf channel W^x, x in {0,1}^ell, indexed with x_1 as the most
// significant bit. Exact when possible (q-SC configuration enumeration or
// evolution), else Monte Carlo.
struct PathInfo {
  InfoSummary info;
  std::string method;  // "exact-evolve", "exact-config", "monte-carlo"
  double kv_stderr = 0;
};
std::vector<PathInfo> all_path_info(const Channel& ch, unsigned ell, const LawMode& mode = {});

// Two-sided bounds on Z(W^x) for binary-input channels via degrading and
// upgrading quantization to at most `bins` outputs per step.
struct ZBounds {
  double lower, upper;
};
std::vector<ZBounds> binary_z_bounds(const Channel& ch, unsigned ell, unsigned bins = 1024);

std::string path_string(std::uint64_t index, unsigned ell);

// ---- text formats

void write_channel_csv(std::ostream& os, const Channel& ch);
Channel read_channel_csv(std::istream& is);
void write_law_csv(std::ostream& os, const ChannelLaw& law);

}  // namespace uvkv
