#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "itree/experiment.hpp"
#include "itree/graph.hpp"
#include "itree/solver.hpp"

using namespace itree;
using nlohmann::json;

namespace {

json base_config() {
  return json{{"n_values", {8}},
              {"p_rule", {{"kind", "constant"}, {"c", 0.5}}},
              {"trials", 10},
              {"master_seed", 7}};
}

std::string csv_of(const std::vector<TrialRecord> &records) {
  std::ostringstream out;
  write_csv(out, records);
  return out.str();
}

} // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(base_config());
  CHECK(c.n_values == std::vector<std::size_t>{8});
  CHECK(c.trials == 10);
  CHECK(c.delta == 0.5);
  CHECK(c.solver.kind == SolverChoice::Kind::exact);
  CHECK(c.master_seed == 7);

  auto j = base_config();
  j["master_seed"] = json{{"master", 9}};
  CHECK(parse_config(j).master_seed == 9);

  j = base_config();
  j["p_rule"] = json{{"kind", "power"}, {"theta", 0.25}};
  CHECK(parse_config(j).p_rule(16) == doctest::Approx(0.5));
  j["p_rule"] = json{{"kind", "reciprocal_log"}, {"c", 1.0}};
  CHECK(parse_config(j).p_rule(100) == doctest::Approx(1 / std::log(100.0)));

  CHECK(theta_limit() ==
        doctest::Approx((std::exp(1.0) - 2) / (3 * std::exp(1.0) - 2)));
}

TEST_CASE("config errors") {
  auto bad = [](auto mutate) {
    auto j = base_config();
    mutate(j);
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  };
  bad([](json &j) { j.erase("n_values"); });
  bad([](json &j) { j["n_values"] = json::array(); });
  bad([](json &j) { j["n_values"] = {0}; });
  bad([](json &j) { j["trials"] = 0; });
  bad([](json &j) { j["trials"] = "ten"; });
  bad([](json &j) { j["p_rule"]["kind"] = "linear"; });
  bad([](json &j) { j["p_rule"]["c"] = 1.5; });
  bad([](json &j) { j["p_rule"]["c"] = 0.0; });
  bad([](json &j) { j["solver"] = {{"kind", "fast"}}; });
  bad([](json &j) { j["unknown_key"] = 1; });
  bad([](json &j) { j["master_seed"] = -1; });
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("seed streams are disjoint") {
  CHECK(graph_seed(3, 5) == Seed{3, 10});
  CHECK(greedy_seed(3, 5) == Seed{3, 11});
}

TEST_CASE("complete graph: every trial measures 2") {
  auto j = base_config();
  j["n_values"] = {5};
  j["p_rule"] = {{"kind", "constant"}, {"c", 1.0}};
  const auto res = run_experiment(parse_config(j));
  REQUIRE(res.records.size() == 10);
  for (const auto &r : res.records) {
    CHECK(r.size == 2);
    CHECK(r.optimal);
  }
  REQUIRE(res.reports.size() == 1);
  const auto &rep = res.reports[0];
  CHECK(rep.histogram == std::map<std::size_t, std::size_t>{{2, 10}});
  CHECK(rep.pair_mass == 1.0);
  CHECK((rep.pair_low == 1 || rep.pair_low == 2));
  CHECK_FALSE(rep.g.has_value());
}

TEST_CASE("output does not depend on worker count") {
  auto j = base_config();
  j["n_values"] = {10, 12};
  j["trials"] = 40;
  auto c = parse_config(j);
  c.workers = 1;
  const auto one = run_experiment(c);
  c.workers = 4;
  const auto four = run_experiment(c);
  CHECK(one.records == four.records);
  CHECK(csv_of(one.records) == csv_of(four.records));
  std::ostringstream a, b;
  write_json(a, one);
  write_json(b, four);
  CHECK(a.str() == b.str());
  CHECK(one.reports.size() == 2);
}

TEST_CASE("exact runs agree with brute force on the same seeds") {
  auto j = base_config();
  j["n_values"] = {14};
  j["trials"] = 100;
  j["workers"] = 4;
  const auto c = parse_config(j);
  const auto res = run_experiment(c);
  double mean_run = 0, mean_brute = 0;
  for (std::size_t t = 0; t < res.records.size(); ++t) {
    const auto &r = res.records[t];
    const Graph g = sample_gnp(14, 0.5, Seed{c.master_seed, r.seed_stream});
    const auto brute = max_induced_tree_bruteforce(g);
    CHECK(r.size == brute.size);
    mean_run += static_cast<double>(r.size);
    mean_brute += static_cast<double>(brute.size);
  }
  CHECK(mean_run == mean_brute);
}

TEST_CASE("greedy runs are lower bounds and excluded by default") {
  auto j = base_config();
  j["solver"] = {{"kind", "greedy"}, {"restarts", 5}};
  const auto res = run_experiment(parse_config(j));
  for (const auto &r : res.records)
    CHECK_FALSE(r.optimal);
  CHECK(res.reports[0].used == 0);
  CHECK(res.reports[0].lower_bound_only == 10);
  CHECK_FALSE(res.warnings.empty());

  j["include_lower_bounds"] = true;
  const auto inc = run_experiment(parse_config(j));
  CHECK(inc.reports[0].used == 10);
}

TEST_CASE("report basics") {
  std::vector<TrialRecord> recs(4, TrialRecord{16, 0.45, 0, 6, true, 1, 0});
  for (std::size_t i = 0; i < recs.size(); ++i)
    recs[i].seed_stream = 2 * i;
  const auto rep = concentration_report(recs, 0.5);
  CHECK(rep.histogram.size() == 1);
  CHECK(rep.pair_mass == 1.0);
  CHECK(rep.mean_size == 6.0);
  REQUIRE(rep.g.has_value());
  CHECK(rep.markov_tail.size() == 3);
  CHECK(rep.markov_tail.front().k == static_cast<std::size_t>(*rep.g + 2));

  recs[1].n = 15;
  CHECK_THROWS(concentration_report(recs, 0.5));
  CHECK_THROWS(concentration_report({}, 0.5));
}

TEST_CASE("markov coherence flags impossible sizes") {
  // size 15 at n = 16, p = 0.5 has expectation near e^-35
  std::vector<TrialRecord> recs(10, TrialRecord{16, 0.5, 0, 5, true, 1, 0});
  CHECK(concentration_report(recs, 0.5).markov_coherent);
  recs[0].size = 15;
  const auto rep = concentration_report(recs, 0.5);
  CHECK_FALSE(rep.markov_coherent);
  CHECK(rep.markov_offenders == std::vector<std::size_t>{15});
}

TEST_CASE("csv export") {
  CHECK(csv_of({}) == "n,p,seed_stream,size,optimal,nodes,millis\n");
  std::vector<TrialRecord> recs{{10, 0.5, 0, 4, true, 12, 0},
                                {10, 0.5, 2, 5, false, 100, 1.25},
                                {12, 0.1, 4, 3, true, 7, 0}};
  const auto text = csv_of(recs);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  std::istringstream in(text);
  CHECK(read_csv(in) == recs);
  std::istringstream broken("n,p\n1,2\n");
  CHECK_THROWS(read_csv(broken));
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3) == "0.3333333333333333");
}

TEST_CASE("export writes both files") {
  auto j = base_config();
  j["trials"] = 3;
  const auto res = run_experiment(parse_config(j));
  const auto dir = std::filesystem::temp_directory_path() / "itree_export_test";
  std::filesystem::remove_all(dir);
  export_result(res, dir.string());
  std::ifstream csv(dir / "records.csv");
  CHECK(read_csv(csv) == res.records);
  std::ifstream js(dir / "results.json");
  const auto doc = json::parse(js);
  CHECK(doc.contains("config"));
  CHECK(doc["records"].size() == 3);
  CHECK(doc["summary"]["reports"].size() == 1);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(export_result(res, "/proc/itree/forbidden"), IoError);
}
