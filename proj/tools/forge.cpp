// Copyright 2026 The Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "forge/atsp_reduction.hpp"
#include "forge/biwheel.hpp"
#include "forge/e3lin2.hpp"
#include "forge/errors.hpp"
#include "forge/graph.hpp"
#include "forge/hybrid.hpp"
#include "forge/json_io.hpp"
#include "forge/oracles.hpp"
#include "forge/pipeline.hpp"
#include "forge/tsp_reduction.hpp"
#include "forge/wheel_probability.hpp"

namespace {

using forge::Rational;
using forge::io::json;

std::string read_file(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw forge::InputError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw forge::InputError("cannot write '" + path + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json(const std::string& path) { return forge::io::parse(read_file(path)); }

struct Reduction {
  std::optional<forge::tsp::Gs> gs;
  std::optional<forge::atsp::Ga> ga;
  const forge::graph::Graph& graph() const { return gs ? gs->g : ga->g; }
  const forge::hybrid::Instance& hybrid() const { return gs ? gs->h : ga->h; }
};

Reduction load_reduction(const std::string& path) {
  const json j = read_json(path);
  Reduction r;
  const std::string kind = forge::io::reduction_of(j);
  if (kind == "tsp")
    r.gs = forge::io::gs_from_json(j);
  else if (kind == "atsp")
    r.ga = forge::io::ga_from_json(j);
  else
    throw forge::InputError("graph '" + path + "' carries no reduction metadata");
  return r;
}

forge::graph::Tour load_tour(const Reduction& red, const std::string& path, int expanded_L, bool lenient) {
  const json j = read_json(path);
  if (expanded_L == 0) return forge::io::tour_from_json(red.graph(), j);
  const auto x = forge::graph::expand_forced(red.graph(), expanded_L);
  const auto t = forge::io::tour_from_json(x.graph, j);
  return forge::graph::contract_tour(red.graph(), x, t,
                                     lenient ? forge::graph::ContractMode::Lenient : forge::graph::ContractMode::Strict);
}

json prob_grid(int n_max) {
  using namespace forge::biwheel;
  double worst_sum = 0;
  double worst_k0 = 0;
  long ratio_cases = 0;
  long ratio_false = 0;
  long disagreements = 0;
  for (int n = 1; n <= n_max; ++n) {
    for (int u = 0; u <= 12 * n; ++u) {
      double s = 0;
      for (int c = 0; c <= u; ++c) s += std::exp(prob_cut_standard(n, u, c));
      worst_sum = std::max(worst_sum, std::abs(s - 1));
    }
    for (int u = 0; u <= 6 * n; u += 2)
      for (int c = 0; 6 * c <= u; c += 2) {
        worst_k0 = std::max(worst_k0, std::abs(prob_cut_unbalanced(n, u, c, 0) - prob_cut_balanced(n, u, c)));
        for (int k = 0; k <= c / 2; ++k) {
          const auto v = ratio_check(n, u, c, k);
          ++ratio_cases;
          if (!v.decreasing) ++ratio_false;
          if (v.decreasing != (v.direct < 1.0)) ++disagreements;
        }
      }
  }
  const bool pass = worst_sum <= 1e-9 && worst_k0 <= 1e-9 && ratio_false == 0 && disagreements == 0;
  return json{{"n_max", n_max},
              {"max_sum_error", worst_sum},
              {"max_balanced_k0_error", worst_k0},
              {"ratio_cases", ratio_cases},
              {"ratio_not_decreasing", ratio_false},
              {"route_disagreements", disagreements},
              {"pass", pass}};
}

int run(int argc, char** argv) {
  CLI::App app{"Reductions from MAX-E3-LIN2 to TSP and ATSP with tour/assignment converters"};
  app.require_subcommand(1);
  int rc = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a planted MAX-E3-LIN2 instance");
  int gen_vars = 3, gen_eqs = 1, gen_flips = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out, gen_assign;
  gen->add_option("--vars", gen_vars, "Number of variables")->check(CLI::Range(3, 1 << 20));
  gen->add_option("--eqs", gen_eqs, "Number of equations")->check(CLI::NonNegativeNumber);
  gen->add_option("--flips", gen_flips, "Equations the planted assignment violates")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "Instance file (default stdout)");
  gen->add_option("--assign-out", gen_assign, "Write the planted assignment as JSON");
  gen->callback([&] {
    const auto p = forge::e3lin2::generate_planted(gen_vars, gen_eqs, gen_flips, gen_seed);
    write_out(gen_out, forge::e3lin2::format(p.instance));
    if (!gen_assign.empty()) write_out(gen_assign, dump(forge::io::original_assignment_json(p.assignment)));
  });

  // balance
  auto* bal = app.add_subcommand("balance", "Rewrite to rhs b and add the three pair-negated copies");
  std::string bal_in, bal_out;
  int bal_b = 0;
  bal->add_option("--in", bal_in, "Instance file")->required();
  bal->add_option("--b", bal_b, "Right-hand side")->check(CLI::Range(0, 1));
  bal->add_option("--out", bal_out, "Output file");
  bal->callback([&] {
    const auto inst = forge::e3lin2::parse(read_file(bal_in));
    write_out(bal_out, forge::e3lin2::format(forge::e3lin2::balance_negations(inst, bal_b)));
  });

  // to-hybrid
  auto* toh = app.add_subcommand("to-hybrid", "Build the Hybrid instance of a balanced instance");
  std::string toh_in, toh_out;
  int toh_b = 0;
  std::uint64_t toh_seed = 1;
  bool toh_balance = false;
  toh->add_option("--in", toh_in, "Instance file")->required();
  toh->add_option("--b", toh_b, "Right-hand side of size-3 equations")->check(CLI::Range(0, 1));
  toh->add_option("--seed", toh_seed, "Seed for the wheel matchings");
  toh->add_flag("--balance", toh_balance, "Balance the instance first");
  toh->add_option("--out", toh_out, "Output file");
  toh->callback([&] {
    auto inst = forge::e3lin2::parse(read_file(toh_in));
    if (toh_balance) inst = forge::e3lin2::balance_negations(inst, toh_b);
    write_out(toh_out, dump(forge::io::hybrid_json(forge::hybrid::build(inst, toh_b, toh_seed))));
  });

  // to-tsp / to-atsp
  auto* tot = app.add_subcommand("to-tsp", "Build the undirected reduction graph");
  std::string tot_in, tot_out;
  tot->add_option("--in", tot_in, "Hybrid JSON")->required();
  tot->add_option("--out", tot_out, "Output file");
  tot->callback([&] {
    const auto h = forge::io::hybrid_from_json(read_json(tot_in));
    write_out(tot_out, dump(forge::io::reduction_json(forge::tsp::build_gs(h))));
  });
  auto* toa = app.add_subcommand("to-atsp", "Build the directed reduction graph");
  std::string toa_in, toa_out, toa_lambda = "1/8";
  toa->add_option("--in", toa_in, "Hybrid JSON")->required();
  toa->add_option("--lambda", toa_lambda, "Weight of the hub edges (p/q)");
  toa->add_option("--out", toa_out, "Output file");
  toa->callback([&] {
    const auto h = forge::io::hybrid_from_json(read_json(toa_in));
    write_out(toa_out, dump(forge::io::reduction_json(forge::atsp::build_ga(h, Rational::parse(toa_lambda)))));
  });

  // tour
  auto* tour = app.add_subcommand("tour", "Construct a tour from an assignment");
  std::string tour_graph, tour_assign, tour_out, tour_summary;
  bool tour_quasi = false;
  tour->add_option("--graph", tour_graph, "Reduction graph JSON")->required();
  tour->add_option("--assign", tour_assign, "Assignment JSON")->required();
  tour->add_flag("--quasi", tour_quasi, "Emit the quasi-tour before bridging");
  tour->add_option("--summary", tour_summary, "Write cost summary JSON");
  tour->add_option("--out", tour_out, "Tour JSON (default stdout)");
  tour->callback([&] {
    const auto red = load_reduction(tour_graph);
    auto a = forge::io::hybrid_assignment_from_json(red.hybrid(), read_json(tour_assign));
    if (!forge::hybrid::is_consistent(red.hybrid(), a)) a = forge::hybrid::round_consistent(red.hybrid(), a);
    json summary;
    forge::graph::Tour t;
    auto fill = [&](const auto& c) {
      t = tour_quasi ? c.quasi_tour : c.tour;
      summary = {{"unsat", c.unsat}, {"components", c.components}, {"bridges", c.bridges},
                 {"quasi_edge_cost", c.quasi_edge_cost.str()}, {"cost", c.cost.str()}, {"bound", c.bound.str()}};
    };
    if (red.gs) fill(forge::tsp::tour_from_assignment(*red.gs, a));
    else fill(forge::atsp::tour_from_assignment(*red.ga, a));
    write_out(tour_out, dump(forge::io::tour_json(red.graph(), t)));
    if (!tour_summary.empty()) write_out(tour_summary, dump(summary));
  });

  // extract / audit share options
  struct TourArgs {
    std::string graph, tour, out;
    int expanded_L = 0;
    bool strict = false;
    bool lenient = false;
  };
  auto add_tour_args = [](CLI::App* sc, TourArgs& a) {
    sc->add_option("--graph", a.graph, "Reduction graph JSON")->required();
    sc->add_option("--tour", a.tour, "Tour JSON")->required();
    sc->add_option("--expanded-L", a.expanded_L, "Tour refers to the graph with forced edges expanded to L-paths")
        ->check(CLI::Range(2, 1000));
    auto* s = sc->add_flag("--strict", a.strict, "Require uniform traversal of every forced path (default)");
    auto* l = sc->add_flag("--lenient", a.lenient, "Repair under-used forced paths");
    s->excludes(l);
    sc->add_option("--out", a.out, "Output file");
  };
  auto* ext = app.add_subcommand("extract", "Extract an assignment from a tour");
  TourArgs ext_args;
  std::string ext_assign;
  add_tour_args(ext, ext_args);
  ext->add_option("--assign-out", ext_assign, "Write the extracted hybrid assignment");
  ext->callback([&] {
    const auto red = load_reduction(ext_args.graph);
    const auto t = load_tour(red, ext_args.tour, ext_args.expanded_L, ext_args.lenient);
    json summary;
    auto fill = [&](const auto& x) {
      const bool ok = Rational(x.unsat) <= x.bound;
      summary = {{"unsat", x.unsat}, {"dishonest", x.dishonest}, {"cost", x.cost.str()},
                 {"bound", x.bound.str()}, {"pass", ok}};
      if (!ext_assign.empty()) write_out(ext_assign, dump(forge::io::hybrid_assignment_json(red.hybrid(), x.assignment)));
      if (!ok) rc = 3;
    };
    if (red.gs) fill(forge::tsp::extract_assignment(*red.gs, t, false));
    else fill(forge::atsp::extract_assignment(*red.ga, t, false));
    write_out(ext_args.out, dump(summary));
  });

  auto* aud = app.add_subcommand("audit", "Per-gadget local costs and credits of a tour");
  TourArgs aud_args;
  add_tour_args(aud, aud_args);
  aud->callback([&] {
    const auto red = load_reduction(aud_args.graph);
    const auto t = load_tour(red, aud_args.tour, aud_args.expanded_L, aud_args.lenient);
    json parts = json::array();
    json out;
    if (red.gs) {
      const auto r = forge::tsp::local_audit(*red.gs, t);
      for (const auto& p : r.parts)
        parts.push_back({{"kind", p.kind}, {"index", p.index}, {"local", p.local.str()}, {"full", p.full.str()},
                         {"baseline", p.baseline.str()}, {"credit", p.credit.str()}});
      out = {{"parts", parts}, {"sum_full", r.sum_full.str()}, {"sum_credit", r.sum_credit.str()},
             {"tour_cost", r.tour_cost.str()}, {"superadditive", r.superadditive}};
    } else {
      const auto r = forge::atsp::local_audit(*red.ga, t);
      for (const auto& p : r.parts)
        parts.push_back({{"kind", p.kind}, {"index", p.index}, {"local", p.local.str()},
                         {"baseline", p.baseline.str()}, {"credit", p.credit.str()}});
      out = {{"parts", parts}, {"sum_local", r.sum_local.str()}, {"sum_credit", r.sum_credit.str()},
             {"edge_cost", r.edge_cost.str()}, {"partition_exact", r.partition_exact}};
    }
    write_out(aud_args.out, dump(out));
  });

  // amplifier-check
  auto* amp = app.add_subcommand("amplifier-check", "Check the amplifier property of bi-wheels");
  int amp_n = 1, amp_count = 1;
  std::uint64_t amp_seed = 1, amp_budget = 0;
  std::string amp_wheel, amp_method = "scan", amp_out;
  amp->add_option("--n", amp_n, "Contacts per ring")->check(CLI::PositiveNumber);
  amp->add_option("--seed", amp_seed, "First seed");
  amp->add_option("--count", amp_count, "Number of consecutive seeds")->check(CLI::PositiveNumber);
  amp->add_option("--budget", amp_budget, "Random subsets to sample when the wheel is too large to scan");
  amp->add_option("--method", amp_method, "scan or mincut")->check(CLI::IsMember({"scan", "mincut"}));
  amp->add_option("--wheel", amp_wheel, "Check this wheel JSON instead of generating");
  amp->add_option("--out", amp_out, "Output file");
  amp->callback([&] {
    json results = json::array();
    int verified = 0;
    auto one = [&](const forge::biwheel::BiWheel& w) {
      const auto cert = amp_method == "mincut" ? forge::biwheel::check_amplifier_mincut(w)
                                               : forge::biwheel::check_amplifier(w, amp_budget, w.seed());
      verified += cert.verified ? 1 : 0;
      json r{{"n", w.n()}, {"seed", w.seed()}, {"verified", cert.verified}, {"exhaustive", cert.exhaustive},
             {"subsets_checked", cert.subsets_checked}};
      if (cert.violating_set) r["violating_set"] = *cert.violating_set;
      results.push_back(r);
    };
    if (!amp_wheel.empty()) {
      one(forge::io::wheel_from_json(read_json(amp_wheel)));
    } else {
      for (int k = 0; k < amp_count; ++k) one(forge::biwheel::build(amp_n, amp_seed + static_cast<std::uint64_t>(k)));
    }
    write_out(amp_out, dump(json{{"checked", results.size()}, {"verified", verified}, {"results", results}}));
  });

  // prob-check
  auto* prob = app.add_subcommand("prob-check", "Evaluate the cut probability formulas on a grid");
  int prob_n = 8;
  std::string prob_out;
  prob->add_option("--n-max", prob_n, "Largest n of the grid")->check(CLI::Range(1, 40));
  prob->add_option("--out", prob_out, "Output file");
  prob->callback([&] {
    const json r = prob_grid(prob_n);
    write_out(prob_out, dump(r));
    if (!r["pass"].get<bool>()) rc = 3;
  });

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact optimal tour of a small distance matrix");
  std::string orc_matrix, orc_method = "hk", orc_out;
  orc->add_option("--matrix", orc_matrix, "Matrix JSON")->required();
  orc->add_option("--method", orc_method, "hk or perm")->check(CLI::IsMember({"hk", "perm"}));
  orc->add_option("--out", orc_out, "Output file");
  orc->callback([&] {
    const auto m = forge::io::matrix_from_json(read_json(orc_matrix));
    const auto r = orc_method == "hk" ? forge::oracle::held_karp(m) : forge::oracle::brute_permutation(m);
    write_out(orc_out, dump(json{{"cost", r.cost.str()}, {"order", r.order}, {"method", r.method}}));
  });

  // export
  auto* exp = app.add_subcommand("export", "Expand forced edges and emit the metric closure");
  std::string exp_graph, exp_out, exp_format = "tsplib";
  int exp_L = 10;
  bool exp_tsplib = false;
  exp->add_option("--graph", exp_graph, "Graph JSON")->required();
  exp->add_option("--L", exp_L, "Path length for forced edges")->check(CLI::Range(2, 1000));
  exp->add_flag("--tsplib", exp_tsplib, "Same as --format tsplib");
  exp->add_option("--format", exp_format, "tsplib or json")->check(CLI::IsMember({"tsplib", "json"}));
  exp->add_option("--out", exp_out, "Output file");
  exp->callback([&] {
    const auto g = forge::io::graph_from_json(read_json(exp_graph));
    const auto x = forge::graph::expand_forced(g, exp_L);
    if (x.graph.num_vertices() > forge::graph::kTsplibMaxNodes)
      throw forge::SizeGuardError("export: expanded graph has " + std::to_string(x.graph.num_vertices()) +
                                  " vertices, limit " + std::to_string(forge::graph::kTsplibMaxNodes));
    const auto m = forge::graph::metric_closure(x.graph);
    if (exp_tsplib || exp_format == "tsplib")
      write_out(exp_out, forge::graph::export_tsplib(m, "forge", "L " + std::to_string(exp_L)));
    else
      write_out(exp_out, dump(forge::io::matrix_json(m)));
  });

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Run generation, reductions, tours, extraction and audits");
  forge::pipeline::Config cfg;
  std::string pipe_lambda = "1/8", pipe_target = "both", pipe_out, pipe_in, pipe_assign;
  pipe->add_option("--seed", cfg.seed, "RNG seed");
  pipe->add_option("--vars", cfg.num_vars, "Variables of the planted instance")->check(CLI::Range(3, 1 << 20));
  pipe->add_option("--eqs", cfg.num_eqs, "Equations of the planted instance")->check(CLI::NonNegativeNumber);
  pipe->add_option("--flips", cfg.flips, "Equations violated by the planted assignment")->check(CLI::NonNegativeNumber);
  pipe->add_option("--reps", cfg.reps, "Repeat every equation this often")->check(CLI::PositiveNumber);
  pipe->add_option("--lambda", pipe_lambda, "Hub edge weight for the directed graph (p/q)");
  pipe->add_option("--L", cfg.L, "Forced path length for the expansion check")->check(CLI::Range(2, 1000));
  pipe->add_option("--mutations", cfg.mutations, "Mutated tours per reduction")->check(CLI::NonNegativeNumber);
  pipe->add_option("--target", pipe_target, "tsp, atsp or both")->check(CLI::IsMember({"tsp", "atsp", "both"}));
  pipe->add_option("--in", pipe_in, "Use this instance instead of generating one");
  pipe->add_option("--assign", pipe_assign, "Original-variable assignment JSON for --in");
  pipe->add_option("--out", pipe_out, "Report file (default stdout)");
  pipe->callback([&] {
    cfg.lambda = Rational::parse(pipe_lambda);
    cfg.tsp = pipe_target != "atsp";
    cfg.atsp = pipe_target != "tsp";
    if (!pipe_in.empty()) cfg.instance = forge::e3lin2::parse(read_file(pipe_in));
    if (!pipe_assign.empty()) {
      const auto bits = forge::io::field<std::vector<int>>(read_json(pipe_assign), "original");
      cfg.assignment = forge::e3lin2::Assignment(bits.begin(), bits.end());
    }
    const auto out = forge::pipeline::run(cfg);
    write_out(pipe_out, dump(out.report));
    if (!out.pass) rc = 3;
  });

  // report
  auto* rep = app.add_subcommand("report", "Summarize a pipeline report as one line per check");
  std::string rep_in;
  rep->add_option("--in", rep_in, "Report JSON")->required();
  rep->callback([&] {
    const json r = read_json(rep_in);
    if (forge::io::field<int>(r, "report_v") != 1) throw forge::InputError("report: unsupported report_v");
    bool all = true;
    for (const char* target : {"tsp", "atsp"}) {
      if (!r.contains(target)) continue;
      const auto& t = r[target];
      std::cout << target << ": m=" << t["hybrid"]["m"] << " cost=" << t["construction"]["cost"].get<std::string>()
                << " bound=" << t["construction"]["bound"].get<std::string>() << "\n";
      for (const auto& c : t["checks"]) {
        const bool ok = c["pass"].get<bool>();
        all = all && ok;
        std::cout << "  " << (ok ? "PASS " : "FAIL ") << c["name"].get<std::string>() << "  ["
                  << c["bound"].get<std::string>() << "]\n";
      }
    }
    for (const char* target : {"tsp", "atsp"}) {
      const auto& q = r["ratios"][target];
      const bool ok = q["pass"].get<bool>();
      all = all && ok;
      std::cout << (ok ? "PASS " : "FAIL ") << target << " ratio " << q["no"].get<std::string>() << " / "
                << q["yes"].get<std::string>() << " = " << q["ratio"].get<std::string>() << "\n";
    }
    if (!all) rc = 3;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const forge::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const forge::InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 3;
  } catch (const forge::SizeGuardError& e) {
    std::cerr << "size guard: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
