#include "itree/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "itree/graph.hpp"
#include "itree/moments.hpp"
#include "itree/solver.hpp"

namespace itree {

using nlohmann::json;

namespace {

const char *kCsvHeader = "n,p,seed_stream,size,optimal,nodes,millis";

void expect_keys(const json &j, const std::set<std::string> &allowed,
                 const std::string &where) {
  if (!j.is_object())
    throw ConfigError(where + ": expected an object");
  for (const auto &[key, _] : j.items())
    if (!allowed.count(key))
      throw ConfigError(where + ": unknown field '" + key + "'");
}

template <typename T>
T get_field(const json &j, const std::string &key, const std::string &where) {
  if (!j.contains(key))
    throw ConfigError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_optional(const json &j, const std::string &key, T fallback,
               const std::string &where) {
  return j.contains(key) ? get_field<T>(j, key, where) : fallback;
}

std::uint64_t get_count(const json &j, const std::string &key,
                        const std::string &where) {
  const auto &v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ConfigError(where + "." + key + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos)
    return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"')
      q += '"';
    q += c;
  }
  return q + '"';
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

template <typename T> T parse_number(const std::string &s, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("csv line " + std::to_string(line) +
                                ": bad number '" + s + "'");
  return v;
}

bool analytic_ok(std::size_t n, double p) {
  return p > 0 && p < 1 && static_cast<double>(n) * p > 1;
}

} // namespace

double theta_limit() {
  return (std::numbers::e - 2) / (3 * std::numbers::e - 2);
}

double PRule::operator()(std::size_t n) const {
  const double nd = static_cast<double>(n);
  switch (kind) {
  case Kind::constant:
    return c;
  case Kind::power:
    return std::pow(nd, -theta);
  case Kind::reciprocal_log:
    return c / std::log(nd);
  }
  return c;
}

ExperimentConfig parse_config(const json &j) {
  expect_keys(j,
              {"n_values", "p_rule", "trials", "delta", "solver", "master_seed",
               "output_path", "workers", "record_timing",
               "include_lower_bounds"},
              "config");
  ExperimentConfig c;

  if (!j.contains("n_values") || !j["n_values"].is_array() ||
      j["n_values"].empty())
    throw ConfigError("config.n_values: expected a non-empty array");
  for (const auto &v : j["n_values"]) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1 ||
        v.get<std::uint64_t>() > kMaxVertices)
      throw ConfigError("config.n_values: entries must be integers in 1..65536");
    c.n_values.push_back(v.get<std::size_t>());
  }

  if (!j.contains("p_rule"))
    throw ConfigError("config: missing field 'p_rule'");
  const auto &pr = j["p_rule"];
  expect_keys(pr, {"kind", "c", "theta"}, "config.p_rule");
  const auto kind = get_field<std::string>(pr, "kind", "config.p_rule");
  if (kind == "constant") {
    c.p_rule.kind = PRule::Kind::constant;
    c.p_rule.c = get_field<double>(pr, "c", "config.p_rule");
  } else if (kind == "power") {
    c.p_rule.kind = PRule::Kind::power;
    c.p_rule.theta = get_field<double>(pr, "theta", "config.p_rule");
  } else if (kind == "reciprocal_log") {
    c.p_rule.kind = PRule::Kind::reciprocal_log;
    c.p_rule.c = get_field<double>(pr, "c", "config.p_rule");
  } else {
    throw ConfigError("config.p_rule.kind: expected constant, power or "
                      "reciprocal_log");
  }

  if (!j.contains("trials"))
    throw ConfigError("config: missing field 'trials'");
  c.trials = get_count(j, "trials", "config");
  if (c.trials < 1)
    throw ConfigError("config.trials: must be at least 1");
  c.delta = get_optional<double>(j, "delta", 0.5, "config");

  if (j.contains("solver")) {
    const auto &s = j["solver"];
    expect_keys(s, {"kind", "budget", "restarts"}, "config.solver");
    const auto sk = get_field<std::string>(s, "kind", "config.solver");
    if (sk == "exact") {
      c.solver.kind = SolverChoice::Kind::exact;
      if (s.contains("budget"))
        c.solver.budget = get_count(s, "budget", "config.solver");
    } else if (sk == "greedy") {
      c.solver.kind = SolverChoice::Kind::greedy;
      if (s.contains("restarts"))
        c.solver.restarts = get_count(s, "restarts", "config.solver");
    } else {
      throw ConfigError("config.solver.kind: expected exact or greedy");
    }
  }

  if (j.contains("master_seed")) {
    const auto &ms = j["master_seed"];
    if (ms.is_object()) {
      expect_keys(ms, {"master"}, "config.master_seed");
      c.master_seed = get_count(ms, "master", "config.master_seed");
    } else {
      c.master_seed = get_count(j, "master_seed", "config");
    }
  }
  c.output_path = get_optional<std::string>(j, "output_path", "", "config");
  if (j.contains("workers"))
    c.workers = get_count(j, "workers", "config");
  if (c.workers < 1)
    throw ConfigError("config.workers: must be at least 1");
  c.record_timing = get_optional<bool>(j, "record_timing", false, "config");
  c.include_lower_bounds =
      get_optional<bool>(j, "include_lower_bounds", false, "config");

  for (auto n : c.n_values) {
    const double p = c.p_rule(n);
    if (!(p > 0 && p <= 1))
      throw ConfigError("config: p_rule gives p = " + format_double(p) +
                        " at n = " + std::to_string(n) +
                        ", outside (0, 1]");
  }
  return c;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig &c) {
  json pr;
  switch (c.p_rule.kind) {
  case PRule::Kind::constant:
    pr = {{"kind", "constant"}, {"c", c.p_rule.c}};
    break;
  case PRule::Kind::power:
    pr = {{"kind", "power"}, {"theta", c.p_rule.theta}};
    break;
  case PRule::Kind::reciprocal_log:
    pr = {{"kind", "reciprocal_log"}, {"c", c.p_rule.c}};
    break;
  }
  json solver = c.solver.kind == SolverChoice::Kind::exact
                    ? json{{"kind", "exact"}, {"budget", c.solver.budget}}
                    : json{{"kind", "greedy"}, {"restarts", c.solver.restarts}};
  // workers and output_path are left out: they never change the results.
  return {{"n_values", c.n_values},
          {"p_rule", pr},
          {"trials", c.trials},
          {"delta", c.delta},
          {"solver", solver},
          {"master_seed", c.master_seed},
          {"record_timing", c.record_timing},
          {"include_lower_bounds", c.include_lower_bounds}};
}

Seed graph_seed(std::uint64_t master, std::uint64_t trial) {
  return {master, 2 * trial};
}

Seed greedy_seed(std::uint64_t master, std::uint64_t trial) {
  return {master, 2 * trial + 1};
}

ConcentrationReport concentration_report(const std::vector<TrialRecord> &records,
                                         double delta,
                                         bool include_lower_bounds) {
  if (records.empty())
    throw std::invalid_argument("concentration_report: no records");
  ConcentrationReport rep;
  rep.n = records.front().n;
  rep.p = records.front().p;
  rep.delta = delta;
  rep.records = records.size();
  double total = 0;
  for (const auto &r : records) {
    if (r.n != rep.n || r.p != rep.p)
      throw std::invalid_argument("concentration_report: mixed (n, p)");
    if (r.lower_bound_only())
      ++rep.lower_bound_only;
    if (r.lower_bound_only() && !include_lower_bounds)
      continue;
    ++rep.histogram[r.size];
    ++rep.used;
    total += static_cast<double>(r.size);
  }
  if (rep.used == 0)
    return rep;
  const double used = static_cast<double>(rep.used);
  rep.mean_size = total / used;

  auto mass = [&](std::size_t lo) {
    std::size_t c = 0;
    for (std::size_t v : {lo, lo + 1}) {
      auto it = rep.histogram.find(v);
      c += it == rep.histogram.end() ? 0 : it->second;
    }
    return static_cast<double>(c) / used;
  };
  const std::size_t first = rep.histogram.begin()->first;
  rep.pair_low = first > 0 ? first - 1 : 0;
  rep.pair_mass = mass(rep.pair_low);
  for (const auto &[v, _] : rep.histogram) {
    if (mass(v) > rep.pair_mass) {
      rep.pair_low = v;
      rep.pair_mass = mass(v);
    }
  }

  if (!analytic_ok(rep.n, rep.p))
    return rep;
  const double nd = static_cast<double>(rep.n);
  const auto t = g_threshold(nd, rep.p, delta);
  rep.g = t.value;
  rep.g_near_tie = t.near_tie;
  rep.window_mass = *rep.g >= 0 ? mass(static_cast<std::size_t>(*rep.g)) : 0.0;
  try {
    rep.k_hat = solve_k_hat(nd, rep.p).root;
  } catch (const BracketError &) {
  }
  for (std::int64_t k = std::max<std::int64_t>(*rep.g + 2, 1);
       k <= *rep.g + 4 && k <= static_cast<std::int64_t>(rep.n); ++k) {
    rep.markov_tail.push_back(
        {static_cast<std::size_t>(k),
         log_expected_trees(nd, rep.p, static_cast<std::uint64_t>(k))
             .log_magnitude()});
  }
  const double log_floor = std::log(kMarkovExpectation);
  for (const auto &[size, count] : rep.histogram) {
    if (static_cast<double>(count) / used <= kMarkovFrequency || size < 1)
      continue;
    if (log_expected_trees(nd, rep.p, size).log_magnitude() < log_floor)
      rep.markov_offenders.push_back(size);
  }
  rep.markov_coherent = rep.markov_offenders.empty();
  return rep;
}

ExperimentResult run_experiment(const ExperimentConfig &config) {
  ExperimentResult res;
  res.config = config;
  if (config.trials < 1 || config.n_values.empty() || config.workers < 1)
    throw ConfigError("run_experiment: invalid config");
  if (config.p_rule.kind == PRule::Kind::power &&
      !(config.p_rule.theta > 0 && config.p_rule.theta < theta_limit()))
    res.warnings.push_back("theta = " + format_double(config.p_rule.theta) +
                           " lies outside (0, " + format_double(theta_limit()) +
                           ")");
  for (auto n : config.n_values) {
    const double p = config.p_rule(n);
    if (!(p > 0 && p <= 1))
      throw ConfigError("run_experiment: p outside (0, 1] at n = " +
                        std::to_string(n));
    if (!analytic_ok(n, p))
      res.warnings.push_back("n = " + std::to_string(n) + ", p = " +
                             format_double(p) +
                             ": analytic quantities undefined");
  }

  const std::size_t total = config.n_values.size() * config.trials;
  res.records.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= total)
        return;
      const std::size_t n = config.n_values[t / config.trials];
      const double p = config.p_rule(n);
      const auto start = std::chrono::steady_clock::now();
      const Seed gs = graph_seed(config.master_seed, t);
      const Graph g = sample_gnp(n, p, gs);
      const SolveResult s =
          config.solver.kind == SolverChoice::Kind::exact
              ? max_induced_tree(g, config.solver.budget)
              : greedy_tree_lower_bound(g, config.solver.restarts,
                                        greedy_seed(config.master_seed, t));
      TrialRecord &r = res.records[t];
      r.n = n;
      r.p = p;
      r.seed_stream = gs.stream;
      r.size = s.size;
      r.optimal = s.optimal;
      r.nodes = s.nodes_explored;
      if (config.record_timing)
        r.millis = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    }
  };
  const std::size_t threads = std::min(config.workers, total);
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i)
    pool.emplace_back(worker);
  worker();
  for (auto &th : pool)
    th.join();

  std::sort(res.records.begin(), res.records.end(),
            [](const TrialRecord &a, const TrialRecord &b) {
              return std::tie(a.n, a.p, a.seed_stream) <
                     std::tie(b.n, b.p, b.seed_stream);
            });
  for (std::size_t i = 0; i < res.records.size();) {
    std::size_t j = i;
    while (j < res.records.size() && res.records[j].n == res.records[i].n &&
           res.records[j].p == res.records[i].p)
      ++j;
    std::vector<TrialRecord> batch(res.records.begin() + i,
                                   res.records.begin() + j);
    res.reports.push_back(concentration_report(batch, config.delta,
                                               config.include_lower_bounds));
    const auto &rep = res.reports.back();
    if (rep.lower_bound_only > 0 && !config.include_lower_bounds)
      res.warnings.push_back("n = " + std::to_string(rep.n) + ", p = " +
                             format_double(rep.p) + ": " +
                             std::to_string(rep.lower_bound_only) +
                             " lower-bound-only records left out");
    i = j;
  }
  return res;
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{})
    throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

json to_json(const TrialRecord &r) {
  return {{"n", r.n},         {"p", r.p},           {"seed_stream", r.seed_stream},
          {"size", r.size},   {"optimal", r.optimal}, {"nodes", r.nodes},
          {"millis", r.millis}, {"lower_bound_only", r.lower_bound_only()}};
}

json to_json(const ConcentrationReport &r) {
  json hist = json::array();
  for (const auto &[size, count] : r.histogram)
    hist.push_back({{"size", size}, {"count", count}});
  json tail = json::array();
  for (const auto &m : r.markov_tail)
    tail.push_back({{"k", m.k}, {"log_expected", m.log_expected}});
  json out = {{"n", r.n},
              {"p", r.p},
              {"delta", r.delta},
              {"records", r.records},
              {"used", r.used},
              {"lower_bound_only", r.lower_bound_only},
              {"histogram", hist},
              {"mean_size", r.mean_size},
              {"best_pair", {r.pair_low, r.pair_low + 1}},
              {"best_pair_mass", r.pair_mass},
              {"g", nullptr},
              {"window", nullptr},
              {"window_mass", nullptr},
              {"near_tie", r.g_near_tie},
              {"k_hat", nullptr},
              {"markov_tail", tail},
              {"markov_coherent", r.markov_coherent},
              {"markov_offenders", r.markov_offenders}};
  if (r.g) {
    out["g"] = *r.g;
    out["window"] = {*r.g, *r.g + 1};
  }
  if (r.window_mass)
    out["window_mass"] = *r.window_mass;
  if (r.k_hat)
    out["k_hat"] = *r.k_hat;
  return out;
}

json to_json(const ExperimentResult &r) {
  json records = json::array();
  for (const auto &x : r.records)
    records.push_back(to_json(x));
  json reports = json::array();
  for (const auto &x : r.reports)
    reports.push_back(to_json(x));
  return {{"config", to_json(r.config)},
          {"records", records},
          {"summary", {{"reports", reports}, {"warnings", r.warnings}}}};
}

void write_csv(std::ostream &out, const std::vector<TrialRecord> &records) {
  out << kCsvHeader << '\n';
  for (const auto &r : records) {
    out << r.n << ',' << csv_field(format_double(r.p)) << ',' << r.seed_stream
        << ',' << r.size << ',' << (r.optimal ? "true" : "false") << ','
        << r.nodes << ',' << csv_field(format_double(r.millis)) << '\n';
  }
}

std::vector<TrialRecord> read_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("csv: missing or unexpected header");
  std::vector<TrialRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7)
      throw std::invalid_argument("csv line " + std::to_string(lineno) +
                                  ": expected 7 fields");
    TrialRecord r;
    r.n = parse_number<std::size_t>(f[0], lineno);
    r.p = parse_number<double>(f[1], lineno);
    r.seed_stream = parse_number<std::uint64_t>(f[2], lineno);
    r.size = parse_number<std::size_t>(f[3], lineno);
    if (f[4] != "true" && f[4] != "false")
      throw std::invalid_argument("csv line " + std::to_string(lineno) +
                                  ": optimal must be true or false");
    r.optimal = f[4] == "true";
    r.nodes = parse_number<std::uint64_t>(f[5], lineno);
    r.millis = parse_number<double>(f[6], lineno);
    out.push_back(r);
  }
  return out;
}

void write_json(std::ostream &out, const ExperimentResult &result) {
  out << to_json(result).dump(2) << '\n';
}

void export_result(const ExperimentResult &result, const std::string &dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create " + dir + ": " + ec.message());
  const fs::path base(dir);
  {
    std::ofstream csv(base / "records.csv", std::ios::binary);
    if (!csv)
      throw IoError("cannot write " + (base / "records.csv").string());
    write_csv(csv, result.records);
    if (!csv)
      throw IoError("write failed: " + (base / "records.csv").string());
  }
  std::ofstream js(base / "results.json", std::ios::binary);
  if (!js)
    throw IoError("cannot write " + (base / "results.json").string());
  write_json(js, result);
  if (!js)
    throw IoError("write failed: " + (base / "results.json").string());
}

} // namespace itree
