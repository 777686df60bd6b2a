#ifndef ITREE_EXPERIMENT_HPP
#define ITREE_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "itree/rng.hpp"

namespace itree {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Upper end of the edge-probability exponent range covered by the
/// concentration result: (e - 2) / (3e - 2).
double theta_limit();

struct PRule {
  enum class Kind { constant, power, reciprocal_log };
  Kind kind = Kind::constant;
  /// constant: p = c; reciprocal_log: p = c / ln n.
  double c = 0.5;
  /// power: p = n^-theta.
  double theta = 0.2;

  double operator()(std::size_t n) const;
};

struct SolverChoice {
  enum class Kind { exact, greedy };
  Kind kind = Kind::exact;
  std::uint64_t budget = 100'000'000;
  std::size_t restarts = 100;
};

struct ExperimentConfig {
  std::vector<std::size_t> n_values;
  PRule p_rule;
  std::size_t trials = 1;
  double delta = 0.5;
  SolverChoice solver;
  std::uint64_t master_seed = 0;
  std::string output_path;
  std::size_t workers = 1;
  /// Off by default so that exports stay byte-identical.
  bool record_timing = false;
  /// Keep lower-bound-only records in histograms.
  bool include_lower_bounds = false;
};

/// Throws ConfigError on schema or range violations.
ExperimentConfig parse_config(const nlohmann::json &j);
ExperimentConfig load_config(const std::string &path);
nlohmann::json to_json(const ExperimentConfig &c);

/// Graph and greedy streams of trial t: 2t and 2t + 1.
Seed graph_seed(std::uint64_t master, std::uint64_t trial);
Seed greedy_seed(std::uint64_t master, std::uint64_t trial);

struct TrialRecord {
  std::size_t n = 0;
  double p = 0;
  std::uint64_t seed_stream = 0;
  std::size_t size = 0;
  bool optimal = false;
  std::uint64_t nodes = 0;
  double millis = 0;

  bool lower_bound_only() const { return !optimal; }
  friend bool operator==(const TrialRecord &, const TrialRecord &) = default;
};

struct MarkovTail {
  std::size_t k = 0;
  double log_expected = 0;
};

struct ConcentrationReport {
  std::size_t n = 0;
  double p = 0;
  double delta = 0;
  std::size_t records = 0;
  std::size_t used = 0;
  std::size_t lower_bound_only = 0;
  std::map<std::size_t, std::size_t> histogram;
  double mean_size = 0;
  /// Best window {pair_low, pair_low + 1} and the fraction of used records in it.
  std::size_t pair_low = 0;
  double pair_mass = 0;
  /// Analytic fields, absent when 0 < p < 1 and np > 1 fail.
  std::optional<std::int64_t> g;
  bool g_near_tie = false;
  std::optional<double> window_mass;
  std::optional<double> k_hat;
  std::vector<MarkovTail> markov_tail;
  /// No size with E X_k < 1e-6 observed in more than 1% of used records.
  bool markov_coherent = true;
  std::vector<std::size_t> markov_offenders;
};

inline constexpr double kMarkovExpectation = 1e-6;
inline constexpr double kMarkovFrequency = 0.01;

/// Records must share (n, p) and be non-empty.
ConcentrationReport concentration_report(const std::vector<TrialRecord> &records,
                                         double delta,
                                         bool include_lower_bounds = false);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;
  std::vector<ConcentrationReport> reports;
  std::vector<std::string> warnings;
};

/// Runs every trial; output does not depend on config.workers.
ExperimentResult run_experiment(const ExperimentConfig &config);

nlohmann::json to_json(const TrialRecord &r);
nlohmann::json to_json(const ConcentrationReport &r);
nlohmann::json to_json(const ExperimentResult &r);

void write_csv(std::ostream &out, const std::vector<TrialRecord> &records);
std::vector<TrialRecord> read_csv(std::istream &in);
void write_json(std::ostream &out, const ExperimentResult &result);

/// Writes records.csv and results.json under dir. Throws IoError.
void export_result(const ExperimentResult &result, const std::string &dir);

/// Shortest round-trip decimal form.
std::string format_double(double x);

} // namespace itree

#endif // ITREE_EXPERIMENT_HPP
