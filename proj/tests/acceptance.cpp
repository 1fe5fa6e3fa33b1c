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
// Acceptance battery. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Pass --n2 to add the slow two-contact
// wheel scan to AC2.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "forge/atsp_reduction.hpp"
#include "forge/biwheel.hpp"
#include "forge/e3lin2.hpp"
#include "forge/graph.hpp"
#include "forge/hybrid.hpp"
#include "forge/mutate.hpp"
#include "forge/oracles.hpp"
#include "forge/pipeline.hpp"
#include "forge/random.hpp"
#include "forge/tsp_reduction.hpp"
#include "forge/wheel_probability.hpp"

namespace {

using namespace forge;

// Wall-clock limits in seconds; 0 means none.
constexpr double kLimitAC1 = 5.0;
constexpr double kLimitAC2 = 30.0;
constexpr double kLimitAC3 = 10.0;
constexpr double kLimitAC9 = 20.0;
constexpr double kProbTolerance = 1e-9;
constexpr int kMutations = 1000;
constexpr int kExpansionL = 10;
const std::vector<int> kEquationCounts{4, 8, 12};
const std::vector<int> kFlips{0, 1, 2};
const std::vector<Rational> kLambdas{Rational(1, 8), Rational(1, 4)};

struct Result {
  bool pass = true;
  std::string detail;
};

bool g_all_pass = true;

void run(const char* id, double limit, const std::function<Result()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Result r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit > 0 && secs > limit) {
    r.pass = false;
    r.detail += " (over the " + std::to_string(static_cast<int>(limit)) + " s limit)";
  }
  std::printf("%s %s %s [%.2fs]\n", id, r.pass ? "PASS" : "FAIL", r.detail.c_str(), secs);
  std::fflush(stdout);
  g_all_pass = g_all_pass && r.pass;
}

struct Planted {
  e3lin2::Planted p;
  int num_eqs;
  int flips;
  std::uint64_t seed;
};

std::vector<Planted> planted_grid() {
  std::vector<Planted> out;
  std::uint64_t seed = 100;
  for (int m : kEquationCounts)
    for (int f : kFlips) {
      out.push_back(Planted{e3lin2::generate_planted(m + 2, m, f, seed), m, f, seed});
      ++seed;
    }
  return out;
}

Result ac1() {
  int bad = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const int b = static_cast<int>(s % 2);
    const auto p = e3lin2::generate_planted(4 + static_cast<int>(s % 5), 1 + static_cast<int>(s % 4), 0, s);
    const auto bal = e3lin2::balance_negations(p.instance, b);
    const auto h = hybrid::build(bal, b, s);
    const int m = h.m();
    const auto c = hybrid::counts(h);
    if (m != static_cast<int>(bal.size()) || !(c == hybrid::Counts{31 * m, 21 * m, 9 * m, m})) ++bad;
    std::vector<int> occ(h.num_vars(), 0);
    for (const auto& eq : h.equations())
      for (int k = 0; k < eq.arity(); ++k) ++occ[eq.vars[k]];
    for (int o : occ)
      if (o != 3) {
        ++bad;
        break;
      }
  }
  return {bad == 0, "50 instances, " + std::to_string(bad) + " with wrong counts or occurrences"};
}

Result ac2(bool with_n2) {
  int verified = 0;
  int bad_certificates = 0;
  int route_disagreements = 0;
  auto scan = [&](int n, int count) {
    for (int s = 0; s < count; ++s) {
      const auto w = biwheel::build(n, static_cast<std::uint64_t>(s));
      const auto cert = biwheel::check_amplifier(w);
      if (cert.verified) ++verified;
      if (cert.violating_set && !biwheel::cut_check(w, *cert.violating_set).violates()) ++bad_certificates;
      if (!cert.verified && !cert.violating_set) ++bad_certificates;
      if (biwheel::check_amplifier_mincut(w).verified != cert.verified) ++route_disagreements;
    }
  };
  scan(1, 100);
  std::string detail = "n=1: " + std::to_string(verified) + "/100 verified";
  bool pass = bad_certificates == 0 && route_disagreements == 0;
  if (with_n2) {
    const int before = verified;
    scan(2, 10);
    detail += ", n=2: " + std::to_string(verified - before) + "/10 verified";
  }
  detail += ", bad certificates " + std::to_string(bad_certificates) + ", route disagreements " +
            std::to_string(route_disagreements);
  return {pass, detail};
}

Result ac3() {
  double worst_sum = 0.0;
  double worst_k0 = 0.0;
  int ratio_cases = 0;
  int ratio_failures = 0;
  for (int n = 1; n <= 6; ++n)
    for (int u = 0; u <= 12 * n; ++u) {
      double sum = 0.0;
      for (int c = u % 2; c <= u; c += 2) sum += std::exp(biwheel::prob_cut_standard(n, u, c));
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
  for (int n = 1; n <= 8; ++n)
    for (int u = 0; u <= 12 * n; u += 2)
      for (int c = 0; c <= u; c += 2) {
        const double a = biwheel::prob_cut_unbalanced(n, u, c, 0);
        const double b = biwheel::prob_cut_balanced(n, u, c);
        if (a == b) continue;
        worst_k0 = std::max(worst_k0, std::abs(a - b));
      }
  for (int n = 2; n <= 8; ++n)
    for (int u = 0; u <= 6 * n; u += 2)
      for (int c = 0; 6 * c <= u; c += 2)
        for (int k = 0; 2 * k <= c; ++k) {
          ++ratio_cases;
          if (!biwheel::ratio_check(n, u, c, k).decreasing) ++ratio_failures;
        }
  char buf[200];
  std::snprintf(buf, sizeof buf, "max |sum-1| %.2e, max |P''(k=0)-P'| %.2e, ratio %d/%d decreasing", worst_sum,
                worst_k0, ratio_cases - ratio_failures, ratio_cases);
  return {worst_sum <= kProbTolerance && worst_k0 <= kProbTolerance && ratio_failures == 0 && ratio_cases > 0, buf};
}

Result ac4() {
  int cases = 0;
  int bad = 0;
  int exact_sat = 0;
  for (const auto& pl : planted_grid()) {
    const auto bal = e3lin2::balance_negations(pl.p.instance, 0);
    const auto gs = tsp::build_gs(hybrid::build(bal, 0, pl.seed));
    const auto a = hybrid::extend_consistent(gs.h, pl.p.assignment);
    const auto c = tsp::tour_from_assignment(gs, a);
    const int m = gs.m();
    const int nu = gs.h.num_wheels();
    ++cases;
    bool ok = graph::is_tour(gs.g, c.tour);
    for (std::size_t e = 0; e < gs.g.num_edges(); ++e)
      if (gs.g.edges()[e].forced && c.tour.fwd[e] < 1) ok = false;
    ok = ok && c.cost <= Rational(61 * m + 2 * nu + c.unsat + 2);
    if (pl.flips == 0) {
      const bool exact = c.cost == Rational(61 * m + 2 * nu);
      exact_sat += exact;
      ok = ok && exact;
    }
    bad += !ok;
  }
  return {bad == 0, std::to_string(cases - bad) + "/" + std::to_string(cases) + " tours within bound, " +
                        std::to_string(exact_sat) + " satisfiable cases at exactly 61m + 2nu"};
}

Result ac5() {
  int round_trip_bad = 0;
  long checked = 0;
  long violations = 0;
  for (const auto& pl : planted_grid()) {
    const auto bal = e3lin2::balance_negations(pl.p.instance, 0);
    const auto gs = tsp::build_gs(hybrid::build(bal, 0, pl.seed));
    const auto a = hybrid::extend_consistent(gs.h, pl.p.assignment);
    const auto c = tsp::tour_from_assignment(gs, a);
    if (tsp::extract_assignment(gs, c.tour, false).unsat > c.unsat) ++round_trip_bad;
    Rng rng(derive_seed(pl.seed, 5));
    graph::Tour t = c.quasi_tour;
    int accepted = 0;
    for (int tries = 0; accepted < kMutations && tries < 50 * kMutations; ++tries) {
      if (!graph::mutate(gs.g, t, rng)) continue;
      ++accepted;
      const auto x = tsp::extract_assignment(gs, t, false);
      ++checked;
      if (Rational(x.unsat) > tsp::soundness_bound(gs.m(), graph::tour_cost(gs.g, t))) ++violations;
    }
    if (accepted < kMutations) ++round_trip_bad;
  }
  return {round_trip_bad == 0 && violations == 0,
          "round-trip failures " + std::to_string(round_trip_bad) + ", " + std::to_string(checked) +
              " mutated quasi-tours, " + std::to_string(violations) + " violations"};
}

Result ac6() {
  int bad = 0;
  long checked = 0;
  long violations = 0;
  for (const auto& lambda : kLambdas)
    for (const auto& pl : planted_grid()) {
      const auto bal = e3lin2::balance_negations(pl.p.instance, 1);
      const auto ga = atsp::build_ga(hybrid::build(bal, 1, pl.seed), lambda);
      const auto a = hybrid::extend_consistent(ga.h, pl.p.assignment);
      const auto c = atsp::tour_from_assignment(ga, a);
      const int m = ga.m();
      const int nu = ga.h.num_wheels();
      const Rational bound = Rational(37 * m + 5 * nu + c.unsat) + Rational(2 * m) * lambda + Rational(2 * nu) * lambda;
      if (!graph::is_tour(ga.g, c.tour) || c.cost > bound) ++bad;
      if (atsp::extract_assignment(ga, c.tour, false).unsat > c.unsat) ++bad;
      Rng rng(derive_seed(pl.seed, 6));
      graph::Tour t = c.tour;
      graph::MutationOptions mo;
      mo.keep_connected = true;
      int accepted = 0;
      for (int tries = 0; accepted < kMutations && tries < 100 * kMutations; ++tries) {
        if (!graph::mutate(ga.g, t, rng, mo)) continue;
        ++accepted;
        const auto x = atsp::extract_assignment(ga, t, false);
        ++checked;
        if (Rational(x.unsat) > graph::tour_cost(ga.g, t) - Rational(37 * m) - Rational(2 * m) * lambda) ++violations;
      }
      if (accepted < kMutations) ++bad;
    }
  return {bad == 0 && violations == 0, "construction failures " + std::to_string(bad) + ", " +
                                           std::to_string(checked) + " mutated tours, " +
                                           std::to_string(violations) + " violations"};
}

Result ac7() {
  int bad = 0;
  int parts = 0;
  for (const auto& pl : planted_grid()) {
    const auto bal = e3lin2::balance_negations(pl.p.instance, 0);
    const auto gs = tsp::build_gs(hybrid::build(bal, 0, pl.seed));
    const auto a = hybrid::extend_consistent(gs.h, pl.p.assignment);
    const auto audit = tsp::local_audit(gs, tsp::tour_from_assignment(gs, a).quasi_tour);
    for (const auto& p : audit.parts) {
      ++parts;
      if (p.kind == "pair" && p.local != Rational(5)) ++bad;
      if (p.kind == "size3") {
        const bool sat = hybrid::satisfied(gs.h.equations()[gs.gadgets[p.index].equation], a);
        if (p.local != (sat ? Rational(31, 2) : Rational(33, 2))) ++bad;
      }
    }
    for (const auto& lambda : kLambdas) {
      const auto bal1 = e3lin2::balance_negations(pl.p.instance, 1);
      const auto ga = atsp::build_ga(hybrid::build(bal1, 1, pl.seed), lambda);
      const auto a1 = hybrid::extend_consistent(ga.h, pl.p.assignment);
      const auto au = atsp::local_audit(ga, atsp::tour_from_assignment(ga, a1).quasi_tour);
      if (!au.partition_exact) ++bad;
      for (const auto& p : au.parts) {
        ++parts;
        if (p.kind == "pair" && p.local != Rational(3)) ++bad;
        if (p.kind == "size3") {
          const bool sat = hybrid::satisfied(ga.h.equations()[ga.gadgets[p.index].equation], a1);
          if (p.local != Rational(sat ? 10 : 11) + lambda) ++bad;
        }
      }
    }
  }
  return {bad == 0, std::to_string(parts) + " audited parts, " + std::to_string(bad) + " off the table"};
}

Result ac8() {
  bool pass = true;
  const auto r = pipeline::ratios(pass);
  const bool direct = Rational(123, 2) / Rational(61) == Rational(123, 122) &&
                      Rational(75, 2) / Rational(37) == Rational(75, 74);
  return {pass && direct, "61.5/61 = " + r["tsp"]["ratio"].get<std::string>() + ", 37.5/37 = " +
                              r["atsp"]["ratio"].get<std::string>()};
}

Result ac9() {
  Rng rng(909);
  int agree = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const bool symmetric = trial % 2 == 0;
    const std::size_t n = 2 + rng.below(8);
    graph::Matrix m(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || (symmetric && j < i)) continue;
        m[i][j] = Rational(1 + static_cast<std::int64_t>(rng.below(100)), 1 + static_cast<std::int64_t>(rng.below(6)));
        if (symmetric) m[j][i] = m[i][j];
      }
    agree += oracle::held_karp(m).cost == oracle::brute_permutation(m).cost;
  }
  return {agree == 100, std::to_string(agree) + "/100 matrices agree"};
}

Result ac10() {
  const auto pl = planted_grid()[1];
  const auto bal = e3lin2::balance_negations(pl.p.instance, 0);
  const auto gs = tsp::build_gs(hybrid::build(bal, 0, pl.seed));
  const auto c = tsp::tour_from_assignment(gs, hybrid::extend_consistent(gs.h, pl.p.assignment));
  const auto x = graph::expand_forced(gs.g, kExpansionL);
  const auto lifted = graph::lift_tour(x, c.tour);
  const bool valid = graph::is_tour(x.graph, lifted);
  const Rational expanded = graph::tour_cost(x.graph, lifted);
  const Rational diff = expanded - c.cost;
  const Rational slack = Rational(2) * gs.g.max_weight() / Rational(kExpansionL) *
                         Rational(static_cast<std::int64_t>(gs.g.num_forced()));
  const bool back = graph::contract_tour(gs.g, x, lifted, graph::ContractMode::Strict) == c.tour;
  const Rational abs_diff = diff < Rational(0) ? -diff : diff;
  return {valid && back && abs_diff <= slack,
          "abstract " + c.cost.str() + ", expanded " + expanded.str() + ", difference " + diff.str() +
              ", allowed " + slack.str() + " over " + std::to_string(gs.g.num_forced()) + " forced edges"};
}

}  // namespace

int main(int argc, char** argv) {
  bool with_n2 = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--n2") == 0) with_n2 = true;
  run("AC1", kLimitAC1, ac1);
  run("AC2", with_n2 ? 0 : kLimitAC2, [&] { return ac2(with_n2); });
  run("AC3", kLimitAC3, ac3);
  run("AC4", 0, ac4);
  run("AC5", 0, ac5);
  run("AC6", 0, ac6);
  run("AC7", 0, ac7);
  run("AC8", 0, ac8);
  run("AC9", kLimitAC9, ac9);
  run("AC10", 0, ac10);
  return g_all_pass ? 0 : 1;
}
