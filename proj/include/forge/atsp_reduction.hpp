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
#ifndef FORGE_ATSP_REDUCTION_HPP_
#define FORGE_ATSP_REDUCTION_HPP_

#include <array>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/graph.hpp"
#include "forge/hybrid.hpp"
#include "forge/rational.hpp"

namespace forge::atsp {

using graph::Dir;
using graph::Graph;
using graph::Tour;
using biwheel::BiWheel;

inline const Rational kDefaultLambda{1, 8};

// Per contact: r and l vertices joined by a forced edge stored r -> l, so
// fwd means r -> l (value 1).
struct ContactPair {
  int r = 0;
  int l = 0;
  int forced = 0;
};

struct PairGadget {
  int equation = 0;
  int u_vertex = 0;
  int n_vertex = 0;
  int forced = 0;  // stored u -> n
};

// Positions p = 0, 1, 2 stand for e^1, e^2, e^3 and the equation's x, y, z.
struct Size3Gadget {
  int equation = 0;
  int s_j = 0;
  int t_j = 0;
  std::array<int, 3> e{};
  std::array<int, 3> lit{};  // hybrid variable of each position
  int from_hub = 0;          // s -> s_j
  int to_hub = 0;            // t_j -> s
  std::array<int, 3> enter{};  // s_j -> e(p)
  std::array<int, 3> leave{};  // e(p) -> t_j
  std::array<int, 3> back{};   // e(p+1) -> e(p)
  std::array<int, 3> hook_in{};   // e(p) -> lit(p).l
  std::array<int, 3> hook_out{};  // lit(p).r -> e(p+1)
};

struct Ga {
  hybrid::Instance h;
  Rational lambda;
  Graph g{true};
  int hub = 0;
  std::vector<int> checker_vertex;       // per hybrid variable, -1 for contacts
  std::vector<ContactPair> contact;      // per hybrid variable, meaningful for contacts
  std::vector<int> simple_in;            // per checker: simple edge entering it
  std::vector<int> simple_out;           // per checker: simple edge leaving it
  std::vector<int> matching_edge;        // per checker: its forced matching edge
  std::vector<PairGadget> pairs;
  std::vector<Size3Gadget> gadgets;

  int m() const { return h.m(); }
  bool is_contact(int var) const { return checker_vertex[var] < 0; }
};

inline Ga build_ga(const hybrid::Instance& h, const Rational& lambda = kDefaultLambda) {
  require(h.b() == 1, "build_ga: size-3 equations must have rhs 1");
  require(lambda > Rational(0), "build_ga: lambda must be positive");
  Ga ga;
  ga.h = h;
  ga.lambda = lambda;
  Graph& g = ga.g;
  const std::size_t nv = h.num_vars();
  ga.checker_vertex.assign(nv, -1);
  ga.contact.assign(nv, ContactPair{});
  ga.simple_in.assign(nv, -1);
  ga.simple_out.assign(nv, -1);
  ga.matching_edge.assign(nv, -1);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& var = h.variables()[v];
    const std::string id = h.var_id(static_cast<int>(v));
    if (var.is_contact) {
      ga.contact[v].r = g.add_vertex(id + ".r");
      ga.contact[v].l = g.add_vertex(id + ".l");
    } else {
      ga.checker_vertex[v] = g.add_vertex(id);
    }
  }
  ga.hub = g.add_vertex("s");
  for (std::size_t v = 0; v < nv; ++v)
    if (h.variables()[v].is_contact)
      ga.contact[v].forced = g.add_edge(ga.contact[v].r, ga.contact[v].l, Rational(1), true,
                                        "contact." + h.var_id(static_cast<int>(v)));
  for (std::size_t e = 0; e < h.equations().size(); ++e) {
    const auto& eq = h.equations()[e];
    if (eq.kind != hybrid::Kind::Matching) continue;
    PairGadget p{static_cast<int>(e), ga.checker_vertex[eq.vars[0]], ga.checker_vertex[eq.vars[1]], 0};
    p.forced = g.add_edge(p.u_vertex, p.n_vertex, Rational(2), true, "eq." + std::to_string(e));
    ga.matching_edge[eq.vars[0]] = ga.matching_edge[eq.vars[1]] = p.forced;
    ga.pairs.push_back(p);
  }
  // Cycle C_side: checker i on that side continues from its matched partner
  // to position i + 1, through the r/l pair when i + 1 is a contact.
  for (const auto& [i, w] : h.wheels()) {
    for (biwheel::Side side : {biwheel::Side::U, biwheel::Side::N}) {
      const std::string tag = std::string("cycle.") + std::to_string(i) + "." + biwheel::side_char(side);
      for (int p = 1; p <= w.ring_size(); ++p) {
        if (BiWheel::is_contact(p)) continue;
        const int from_var = h.index(i, biwheel::other(side), w.partner(side, p));
        const int from = ga.checker_vertex[from_var];
        const int q = w.next_pos(p);
        const int q_var = h.index(i, side, q);
        if (!BiWheel::is_contact(q)) {
          const int e = g.add_edge(from, ga.checker_vertex[q_var], Rational(1), false, tag, Dir::UV);
          ga.simple_out[from_var] = e;
          ga.simple_in[q_var] = e;
        } else {
          const int e1 = g.add_edge(from, ga.contact[q_var].r, Rational(1), false, tag, Dir::UV);
          ga.simple_out[from_var] = e1;
          const int q2_var = h.index(i, side, w.next_pos(q));
          const int e2 = g.add_edge(ga.contact[q_var].l, ga.checker_vertex[q2_var], Rational(1), false, tag, Dir::UV);
          ga.simple_in[q2_var] = e2;
        }
      }
    }
  }
  int j = 0;
  for (std::size_t e = 0; e < h.equations().size(); ++e) {
    const auto& eq = h.equations()[e];
    if (eq.kind != hybrid::Kind::Size3) continue;
    Size3Gadget q;
    q.equation = static_cast<int>(e);
    const std::string pre = "a3." + std::to_string(j);
    q.s_j = g.add_vertex(pre + ".s");
    q.t_j = g.add_vertex(pre + ".t");
    for (int p = 0; p < 3; ++p) {
      q.e[p] = g.add_vertex(pre + ".e" + std::to_string(p + 1));
      q.lit[p] = eq.vars[p];
    }
    q.from_hub = g.add_edge(ga.hub, q.s_j, lambda, true, pre, Dir::UV);
    q.to_hub = g.add_edge(q.t_j, ga.hub, lambda, true, pre, Dir::UV);
    for (int p = 0; p < 3; ++p) {
      q.enter[p] = g.add_edge(q.s_j, q.e[p], Rational(1), false, pre, Dir::UV);
      q.leave[p] = g.add_edge(q.e[p], q.t_j, Rational(1), false, pre, Dir::UV);
    }
    for (int p = 0; p < 3; ++p) q.back[p] = g.add_edge(q.e[(p + 1) % 3], q.e[p], Rational(1), false, pre, Dir::UV);
    for (int p = 0; p < 3; ++p) {
      q.hook_in[p] = g.add_edge(q.e[p], ga.contact[q.lit[p]].l, Rational(1), false, pre, Dir::UV);
      q.hook_out[p] = g.add_edge(ga.contact[q.lit[p]].r, q.e[(p + 1) % 3], Rational(1), false, pre, Dir::UV);
    }
    ga.gadgets.push_back(q);
    ++j;
  }
  return ga;
}

inline Rational quasi_tour_cost(int m, int k, const Rational& lambda) {
  return Rational(37 * m + k) + Rational(2 * m) * lambda;
}

inline Rational completeness_bound(int m, int nu, int k, const Rational& lambda) {
  return Rational(37 * m + 5 * nu + k) + Rational(2 * m) * lambda + Rational(2 * nu) * lambda;
}

inline Rational bridge_cost(const Rational& lambda) { return Rational(5) + Rational(2) * lambda; }

struct Construction {
  Tour quasi_tour;
  Tour tour;
  int unsat = 0;
  int components = 0;
  int bridges = 0;
  Rational quasi_edge_cost;
  Rational cost;
  Rational bound;
};

inline Construction tour_from_assignment(const Ga& ga, const hybrid::Assignment& a) {
  const auto& h = ga.h;
  require(a.size() == h.num_vars(), "ga tour: assignment size does not match the instance");
  require(hybrid::is_consistent(h, a), "ga tour: assignment is not consistent (round it first)");
  const Graph& g = ga.g;
  Construction c;
  c.unsat = hybrid::eval(h, a);
  Tour t = graph::empty_tour(g);
  for (const auto& [i, w] : h.wheels()) {
    const biwheel::Side side = hybrid::wheel_value(h, a, i) == 1 ? biwheel::Side::U : biwheel::Side::N;
    const std::string tag = std::string("cycle.") + std::to_string(i) + "." + biwheel::side_char(side);
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      if (g.edges()[e].tag == tag) ++t.fwd[e];
    for (int p = 1; p <= w.ring_size(); ++p) {
      const int v = h.index(i, side, p);
      if (BiWheel::is_contact(p)) {
        ++t.fwd[ga.contact[v].forced];
      } else {
        graph::traverse(g, t, ga.matching_edge[v], ga.checker_vertex[v]);
      }
    }
  }
  auto contact_lr = [&](int var) { ++t.bwd[ga.contact[var].forced]; };
  for (const auto& q : ga.gadgets) {
    ++t.fwd[q.from_hub];
    ++t.fwd[q.to_hub];
    std::array<int, 3> val{};
    int sum = 0;
    for (int p = 0; p < 3; ++p) sum += val[p] = a[q.lit[p]];
    // e(p) -> lit(p).l -> lit(p).r -> e(p+1)
    auto through = [&](int p) {
      ++t.fwd[q.hook_in[p]];
      contact_lr(q.lit[p]);
      ++t.fwd[q.hook_out[p]];
    };
    if (sum == 1) {
      int one = 0;
      while (val[one] == 0) ++one;
      ++t.fwd[q.enter[(one + 1) % 3]];
      through((one + 1) % 3);
      through((one + 2) % 3);
      ++t.fwd[q.leave[one]];
    } else if (sum == 3) {
      ++t.fwd[q.enter[1]];
      ++t.fwd[q.back[0]];  // e2 -> e1
      ++t.fwd[q.back[2]];  // e1 -> e3
      ++t.fwd[q.leave[2]];
    } else if (sum == 2) {
      int zero = 0;
      while (val[zero] == 1) ++zero;
      ++t.fwd[q.enter[zero]];
      through(zero);
      ++t.fwd[q.back[zero]];            // e(c+1) -> e(c)
      ++t.fwd[q.back[(zero + 2) % 3]];  // e(c) -> e(c-1)
      ++t.fwd[q.leave[(zero + 2) % 3]];
    } else {
      ++t.fwd[q.enter[1]];
      through(1);
      through(2);
      through(0);
      ++t.fwd[q.leave[1]];
    }
  }
  const auto check = graph::check_quasi_tour(g, t);
  ensure(check.ok, "ga tour: constructed multiset is not a quasi-tour: " + check.violation);
  c.quasi_tour = t;
  c.quasi_edge_cost = graph::edge_weight_sum(g, t);
  ensure(c.quasi_edge_cost == quasi_tour_cost(ga.m(), c.unsat, ga.lambda),
         "ga tour: quasi-tour edge cost " + c.quasi_edge_cost.str() + " differs from 37m + 2 lambda m + k");

  int comps = 0;
  auto label = graph::component_labels(g, t, &comps);
  c.components = comps;
  // Bridge each wheel not yet joined to s through the first gadget position
  // holding one of its 1-valued contacts.
  graph::DisjointSets ds(static_cast<std::size_t>(comps));
  for (const auto& q : ga.gadgets) {
    for (int p = 0; p < 3; ++p) {
      const int var = q.lit[p];
      if (a[var] != 1) continue;
      if (!ds.unite(label[ga.contact[var].r], label[ga.hub])) continue;
      ++t.fwd[q.from_hub];
      ++t.fwd[q.enter[p]];
      ++t.fwd[q.hook_in[p]];
      contact_lr(var);
      ++t.fwd[q.hook_out[p]];
      ++t.fwd[q.leave[(p + 1) % 3]];
      ++t.fwd[q.to_hub];
      ++c.bridges;
    }
  }
  c.tour = t;
  ensure(graph::num_components(g, t) == 1, "ga tour: bridging left the tour disconnected");
  c.cost = graph::tour_cost(g, t);
  c.bound = completeness_bound(ga.m(), h.num_wheels(), c.unsat, ga.lambda);
  ensure(c.cost == c.quasi_edge_cost + Rational(c.bridges) * bridge_cost(ga.lambda),
         "ga tour: cost accounting mismatch");
  ensure(c.cost <= c.bound, "ga tour: cost " + c.cost.str() + " exceeds the bound " + c.bound.str());
  return c;
}

struct LocalCost {
  std::string kind;  // "hub", "pair", "size3"
  int index = 0;
  Rational local;
  Rational baseline;
  Rational credit;
};

struct CreditReport {
  std::vector<LocalCost> parts;
  Rational sum_local;
  Rational sum_credit;
  Rational edge_cost;
  bool partition_exact = false;  // sum_local == edge_cost
};

inline Rational size3_baseline(const Rational& lambda) { return Rational(10) + lambda; }

// c_T counts the full weight of every used edge at its source.
inline CreditReport local_audit(const Ga& ga, const Tour& t) {
  const Graph& g = ga.g;
  graph::check_shape(g, t);
  std::vector<Rational> out(g.num_vertices(), Rational(0));
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edges()[e];
    if (t.fwd[e]) out[ed.u] += ed.w * Rational(t.fwd[e]);
    if (t.bwd[e]) out[ed.v] += ed.w * Rational(t.bwd[e]);
  }
  CreditReport r;
  std::vector<int> seen(g.num_vertices(), 0);
  auto add = [&](std::string kind, int index, const std::vector<int>& vs, Rational baseline) {
    LocalCost c{std::move(kind), index, Rational(0), baseline, Rational(0)};
    for (int v : vs) {
      ensure(seen[v]++ == 0, "ga audit: partition overlap");
      c.local += out[v];
    }
    c.credit = c.local - c.baseline;
    r.parts.push_back(c);
  };
  add("hub", 0, {ga.hub}, Rational(ga.m()) * ga.lambda);
  for (std::size_t i = 0; i < ga.pairs.size(); ++i)
    add("pair", static_cast<int>(i), {ga.pairs[i].u_vertex, ga.pairs[i].n_vertex}, Rational(3));
  for (std::size_t j = 0; j < ga.gadgets.size(); ++j) {
    const auto& q = ga.gadgets[j];
    std::vector<int> vs{q.s_j, q.t_j, q.e[0], q.e[1], q.e[2]};
    for (int p = 0; p < 3; ++p) {
      vs.push_back(ga.contact[q.lit[p]].r);
      vs.push_back(ga.contact[q.lit[p]].l);
    }
    add("size3", static_cast<int>(j), vs, size3_baseline(ga.lambda));
  }
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    ensure(seen[v] == 1, "ga audit: vertex '" + g.name(static_cast<int>(v)) + "' outside the partition");
  r.sum_local = Rational(0);
  r.sum_credit = Rational(0);
  for (const auto& p : r.parts) {
    r.sum_local += p.local;
    r.sum_credit += p.credit;
  }
  r.edge_cost = graph::edge_weight_sum(g, t);
  r.partition_exact = r.sum_local == r.edge_cost;
  return r;
}

struct Extraction {
  hybrid::Assignment assignment;
  std::vector<char> honest;
  int dishonest = 0;
  int unsat = 0;
  Rational cost;
  Rational bound;  // cost - 37m - 2 lambda m
};

inline Rational soundness_bound(int m, const Rational& lambda, const Rational& cost) {
  return cost - Rational(37 * m) - Rational(2 * m) * lambda;
}

inline Extraction extract_assignment(const Ga& ga, const Tour& t, bool check_bound = true) {
  const auto& h = ga.h;
  const Graph& g = ga.g;
  const auto check = graph::check_quasi_tour(g, t);
  require(check.ok, "ga extract: not a quasi-tour: " + check.violation);
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    require(!g.edges()[e].forced || t.mult(static_cast<int>(e)) >= 1,
            "ga extract: forced edge " + std::to_string(e) + " is unused");
  Extraction x;
  x.cost = graph::tour_cost(g, t);
  x.bound = soundness_bound(ga.m(), ga.lambda, x.cost);
  x.assignment.assign(h.num_vars(), 0);
  x.honest.assign(h.num_vars(), 0);
  std::vector<char> pending(h.num_vars(), 0);
  auto used = [&](int e) { return t.mult(e) > 0; };
  for (const auto& [i, w] : h.wheels()) {
    for (biwheel::Side side : {biwheel::Side::U, biwheel::Side::N}) {
      for (int p = 1; p <= w.ring_size(); ++p) {
        const int v = h.index(i, side, p);
        bool honest = false;
        int value = 0;
        if (BiWheel::is_contact(p)) {
          const int f = ga.contact[v].forced;
          honest = (t.fwd[f] > 0) != (t.bwd[f] > 0);
          value = t.fwd[f] > 0 ? 1 : 0;
        } else {
          const int partner = h.index(i, biwheel::other(side), w.partner(side, p));
          const bool in = used(ga.simple_in[v]);
          honest = in == used(ga.simple_out[partner]);
          value = in ? 1 : 0;
        }
        if (honest) {
          x.honest[v] = 1;
          x.assignment[v] = static_cast<std::uint8_t>(value);
        } else {
          pending[v] = 1;
          ++x.dishonest;
        }
      }
    }
  }
  std::vector<std::vector<int>> groups;
  for (const auto& pg : ga.pairs) {
    const auto& eq = h.equations()[pg.equation];
    groups.push_back({eq.vars[0], eq.vars[1]});
  }
  for (const auto& q : ga.gadgets) groups.push_back({q.lit[0], q.lit[1], q.lit[2]});
  hybrid::resolve_groups(h, x.assignment, pending, groups);
  x.unsat = hybrid::eval(h, x.assignment);
  if (check_bound)
    ensure(Rational(x.unsat) <= x.bound, "ga extract: " + std::to_string(x.unsat) +
                                             " unsatisfied equations exceed cost - 37m - 2 lambda m = " +
                                             x.bound.str());
  return x;
}

}  // namespace forge::atsp

#endif  // FORGE_ATSP_REDUCTION_HPP_
