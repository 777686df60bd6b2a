// Command-line front end: sampling, solving, enumeration oracles, analytic
// moments and Monte Carlo experiments.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "itree/experiment.hpp"
#include "itree/graph.hpp"
#include "itree/moments.hpp"
#include "itree/solver.hpp"
#include "itree/trees.hpp"

using namespace itree;
using nlohmann::json;

namespace {

json optional_number(const std::optional<double> &x) {
  return x ? json(*x) : json(nullptr);
}

json overlap_json(const OverlapReport &rep) {
  json rows = json::array();
  for (const auto &r : rep.rows) {
    rows.push_back({{"r", r.r},
                    {"N", r.n_coinciding},
                    {"N_intersecting", r.n_intersecting},
                    {"phi", r.phi},
                    {"bound1", r.bound1},
                    {"bound2", optional_number(r.bound2)},
                    {"bound3", optional_number(r.bound3)},
                    {"ok", r.ok}});
  }
  json product = json::array();
  for (const auto &c : rep.product) {
    product.push_back({{"p", c.p},
                       {"r", c.r},
                       {"applicable", c.applicable},
                       {"lhs", c.lhs},
                       {"rhs", c.rhs},
                       {"holds", c.holds}});
  }
  return {{"k", rep.k}, {"l", rep.ell}, {"rows", rows}, {"product", product},
          {"ok", rep.ok()}};
}

void print_overlap_table(const OverlapReport &rep) {
  std::cout << "k=" << rep.k << " l=" << rep.ell << '\n';
  std::cout << std::setw(3) << "r" << std::setw(10) << "N" << std::setw(12)
            << "N_inter" << std::setw(8) << "phi" << std::setw(14) << "bound1"
            << std::setw(14) << "bound2" << std::setw(14) << "bound3"
            << "  ok\n";
  auto opt = [](const std::optional<double> &x) {
    std::ostringstream s;
    if (x)
      s << std::setprecision(6) << *x;
    else
      s << "-";
    return s.str();
  };
  for (const auto &r : rep.rows) {
    std::cout << std::setw(3) << r.r << std::setw(10) << r.n_coinciding
              << std::setw(12) << r.n_intersecting << std::setw(8) << r.phi
              << std::setw(14) << std::setprecision(6) << r.bound1
              << std::setw(14) << opt(r.bound2) << std::setw(14)
              << opt(r.bound3) << "  " << (r.ok ? "yes" : "NO") << '\n';
  }
}

int run_sample(std::size_t n, double p, std::uint64_t seed,
               std::uint64_t stream, const std::string &out) {
  const Graph g = sample_gnp(n, p, Seed{seed, stream});
  if (out.empty())
    write_graph(std::cout, g);
  else
    write_graph_file(out, g);
  return 0;
}

int run_solve(const std::string &in, std::uint64_t budget, bool greedy,
              std::size_t restarts, std::uint64_t seed) {
  const Graph g = read_graph_file(in);
  const SolveResult r = greedy ? greedy_tree_lower_bound(g, restarts, Seed{seed, 0})
                               : max_induced_tree(g, budget);
  json j = {{"size", r.size},
            {"witness", r.witness.members()},
            {"optimal", r.optimal},
            {"nodes", r.nodes_explored}};
  std::cout << j.dump() << '\n';
  return 0;
}

int run_forests(std::size_t ell) {
  json rows = json::array();
  std::cout << "l=" << ell << "\n  r        phi      bound  rooted(enum)  "
               "C(n,m)m n^(n-m-1)  C(n,m)m n^(n-m+1)\n";
  bool minus_ok = true, plus_ok = true;
  for (std::size_t r = 0; r < ell; ++r) {
    const auto f = count_forests(ell, r);
    minus_ok = minus_ok && f.rooted_enumerated == f.rooted_minus_one;
    plus_ok = plus_ok && f.rooted_enumerated == f.rooted_plus_one;
    std::cout << std::setw(3) << r << std::setw(11) << f.value << std::setw(11)
              << f.bound << std::setw(14) << f.rooted_enumerated
              << std::setw(19) << f.rooted_minus_one << std::setw(19)
              << f.rooted_plus_one << '\n';
    rows.push_back({{"r", r},
                    {"phi", f.value},
                    {"bound", f.bound},
                    {"bound_ok", f.value <= f.bound},
                    {"rooted_enumerated", f.rooted_enumerated},
                    {"rooted_exponent_minus_one", f.rooted_minus_one},
                    {"rooted_exponent_plus_one", f.rooted_plus_one}});
  }
  std::string matched = minus_ok ? (plus_ok ? "both" : "n-m-1")
                                 : (plus_ok ? "n-m+1" : "neither");
  std::cout << "rooted-forest exponent matching enumeration: " << matched
            << '\n';
  json j = {{"l", ell},
            {"total", forest_census(ell).total},
            {"rows", rows},
            {"matching_exponent", matched}};
  std::cout << j.dump() << '\n';
  return 0;
}

int run_profile(double n, double p, double delta) {
  const auto m = profile(n, p);
  const auto kh = solve_k_hat(n, p);
  const auto t = m.g(delta);
  json j = {{"n", m.n},
            {"p", m.p},
            {"b", m.b},
            {"k_star", m.k_star},
            {"epsilon", m.epsilon},
            {"k_hat", m.k_hat},
            {"k_hat_closed_form", m.k_hat_closed_form},
            {"k_hat_gap", kh.gap},
            {"gamma_at_k_hat", kh.gamma_at_root},
            {"delta", delta},
            {"g", t.value},
            {"g_raw", t.raw},
            {"near_tie", t.near_tie},
            {"ell_star", m.ell_star},
            {"ell_1", m.ell_1},
            {"ell_2", m.ell_2}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_varbound(double n, double p, double w_exponent,
                 std::optional<std::size_t> k_opt) {
  const std::size_t k =
      k_opt ? *k_opt
            : static_cast<std::size_t>(std::floor(solve_k_hat(n, p).root - 0.5));
  const double w = std::pow(std::log(n), w_exponent);
  const auto vb = variance_ratio_bound(n, p, k, w);
  std::cout << "part,ell,log_summand\n";
  for (const auto &row : vb.rows)
    std::cout << part_name(row.part) << ',' << row.ell << ','
              << format_double(row.log_summand) << '\n';
  json sums = json::object();
  json logs = json::object();
  for (const auto &ps : vb.parts) {
    sums[part_name(ps.part)] = ps.sum.to_double();
    logs[part_name(ps.part)] = ps.count ? json(ps.sum.log_magnitude()) : json(nullptr);
  }
  json j = {{"n", n},
            {"p", p},
            {"k", k},
            {"w", w},
            {"regime", vb.regime == Regime::small_p ? "small_p" : "large_p"},
            {"part_sums", sums},
            {"log_part_sums", logs},
            {"total", vb.total.to_double()},
            {"log_total", vb.total.log_magnitude()}};
  std::cout << j.dump() << '\n';
  return 0;
}

int run_experiment_cmd(const std::string &config_path, const std::string &out,
                       std::optional<std::size_t> workers) {
  ExperimentConfig config = load_config(config_path);
  if (workers) {
    if (*workers < 1)
      throw ConfigError("--workers must be at least 1");
    config.workers = *workers;
  }
  if (!out.empty())
    config.output_path = out;
  if (config.output_path.empty())
    throw ConfigError("no output directory: pass --out or set output_path");
  const auto result = run_experiment(config);
  for (const auto &w : result.warnings)
    std::cerr << "warning: " << w << '\n';
  export_result(result, config.output_path);
  for (const auto &r : result.reports) {
    std::cout << "n=" << r.n << " p=" << format_double(r.p) << " used="
              << r.used << "/" << r.records << " best pair {" << r.pair_low
              << "," << r.pair_low + 1 << "} mass " << r.pair_mass;
    if (r.g)
      std::cout << " g=" << *r.g << (r.g_near_tie ? " (near tie)" : "");
    std::cout << " markov " << (r.markov_coherent ? "ok" : "VIOLATED") << '\n';
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Maximum induced trees in G(n,p): solver, oracles, moments"};
  app.require_subcommand(1);

  auto *sample = app.add_subcommand("sample", "Sample G(n,p) in text format");
  std::size_t s_n = 0;
  double s_p = 0;
  std::uint64_t s_seed = 0, s_stream = 0;
  std::string s_out;
  sample->add_option("--n", s_n)->required();
  sample->add_option("--p", s_p)->required();
  sample->add_option("--seed", s_seed)->required();
  sample->add_option("--stream", s_stream);
  sample->add_option("--out", s_out);

  auto *solve = app.add_subcommand("solve", "Largest induced tree of a graph");
  std::string v_in;
  std::uint64_t v_budget = kDefaultBudget, v_seed = 0;
  bool v_greedy = false;
  std::size_t v_restarts = 100;
  solve->add_option("--in", v_in)->required();
  solve->add_option("--budget", v_budget);
  solve->add_flag("--greedy", v_greedy);
  solve->add_option("--restarts", v_restarts);
  solve->add_option("--seed", v_seed);

  auto *oracle = app.add_subcommand("oracle", "Exhaustive counting oracles");
  oracle->require_subcommand(1);
  auto *overlap = oracle->add_subcommand("overlap", "N(k,l,r) table and bounds");
  std::size_t o_k = 0, o_l = 0;
  overlap->add_option("--k", o_k)->required();
  overlap->add_option("--l", o_l)->required();
  auto *forests = oracle->add_subcommand("forests", "Forest counts on [l]");
  std::size_t f_l = 0;
  forests->add_option("--l", f_l)->required();
  auto *validate = oracle->add_subcommand("validate", "Check all bounds up to kmax");
  std::size_t val_kmax = 6;
  validate->add_option("--kmax", val_kmax);

  auto *moments = app.add_subcommand("moments", "Analytic moment quantities");
  moments->require_subcommand(1);
  auto *prof = moments->add_subcommand("profile", "k*, k-hat, g(n) and partition points");
  double m_n = 0, m_p = 0, m_delta = 0;
  prof->add_option("--n", m_n)->required();
  prof->add_option("--p", m_p)->required();
  prof->add_option("--delta", m_delta);
  auto *varb = moments->add_subcommand("varbound", "Per-overlap variance bound");
  double vb_n = 0, vb_p = 0, vb_w = 0.25;
  std::optional<std::size_t> vb_k;
  varb->add_option("--n", vb_n)->required();
  varb->add_option("--p", vb_p)->required();
  varb->add_option("--w-exponent", vb_w);
  varb->add_option("--k", vb_k);

  auto *experiment = app.add_subcommand("experiment", "Monte Carlo studies");
  experiment->require_subcommand(1);
  auto *erun = experiment->add_subcommand("run", "Run a configured batch");
  std::string e_config, e_out;
  std::optional<std::size_t> e_workers;
  erun->add_option("--config", e_config)->required();
  erun->add_option("--out", e_out);
  erun->add_option("--workers", e_workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return erun->parsed() && code != 0 ? 2 : code;
  }

  try {
    if (*sample)
      return run_sample(s_n, s_p, s_seed, s_stream, s_out);
    if (*solve)
      return run_solve(v_in, v_budget, v_greedy, v_restarts, v_seed);
    if (*overlap) {
      const auto rep = validate_overlap_bounds(o_k, o_l);
      print_overlap_table(rep);
      std::cout << overlap_json(rep).dump() << '\n';
      return 0;
    }
    if (*forests)
      return run_forests(f_l);
    if (*validate) {
      json all = json::array();
      std::size_t violations = 0;
      for (std::size_t k = 2; k <= val_kmax; ++k) {
        for (std::size_t l = 2; l <= k; ++l) {
          const auto rep = validate_overlap_bounds(k, l);
          print_overlap_table(rep);
          violations += rep.violations();
          all.push_back(overlap_json(rep));
        }
      }
      std::cout << "violations: " << violations << '\n';
      std::cout << all.dump() << '\n';
      return violations == 0 ? 0 : 1;
    }
    if (*prof)
      return run_profile(m_n, m_p, m_delta);
    if (*varb)
      return run_varbound(vb_n, vb_p, vb_w, vb_k);
    if (*erun)
      return run_experiment_cmd(e_config, e_out, e_workers);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError &e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
