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
#ifndef FORGE_TSP_REDUCTION_HPP_
#define FORGE_TSP_REDUCTION_HPP_

#include <array>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/graph.hpp"
#include "forge/hybrid.hpp"
#include "forge/rational.hpp"

namespace forge::tsp {

using graph::Graph;
using graph::Tour;

struct PairGadget {
  int equation = 0;  // hybrid equation index
  int u_vertex = 0;
  int n_vertex = 0;
  std::array<int, 2> forced{};
};

// Size-3 gadget. Index k = 0, 1, 2 follows the equation's (x, y, z).
struct Size3Gadget {
  int equation = 0;
  std::array<int, 3> contact{};
  std::array<int, 3> left{};
  std::array<int, 3> right{};
  int e_left = 0;
  int e_right = 0;
  std::array<std::array<int, 2>, 3> forced{};  // {contact, left}, {contact, right}
  std::array<int, 2> hub{};                    // {e_left, s}, {e_right, s}
  std::array<int, 3> inner{};                  // {left, right}
  std::array<std::array<int, 2>, 3> hook{};    // {e_left, left}, {e_right, right}

  std::vector<int> vertices() const {
    std::vector<int> v;
    for (int k = 0; k < 3; ++k) {
      v.push_back(contact[k]);
      v.push_back(left[k]);
      v.push_back(right[k]);
    }
    v.push_back(e_left);
    v.push_back(e_right);
    return v;
  }
};

struct Gs {
  hybrid::Instance h;
  Graph g{false};
  int hub = 0;
  std::vector<int> cycle_edge;  // per hybrid equation: edge id, -1 unless a cycle equation
  std::vector<PairGadget> pairs;
  std::vector<Size3Gadget> gadgets;

  int m() const { return h.m(); }
};

inline const Rational kContactForced{3, 2};
inline const Rational kHubForced{1, 2};

// Hybrid variables keep their indices as vertex ids; the hub s follows, then
// eight vertices per size-3 equation.
inline Gs build_gs(const hybrid::Instance& h) {
  require(h.b() == 0, "build_gs: size-3 equations must have rhs 0");
  Gs gs;
  gs.h = h;
  Graph& g = gs.g;
  for (std::size_t v = 0; v < h.num_vars(); ++v) g.add_vertex(h.var_id(static_cast<int>(v)));
  gs.hub = g.add_vertex("s");
  gs.cycle_edge.assign(h.equations().size(), -1);
  int j = 0;
  for (std::size_t e = 0; e < h.equations().size(); ++e) {
    const auto& eq = h.equations()[e];
    const std::string tag = "eq." + std::to_string(e);
    switch (eq.kind) {
      case hybrid::Kind::Cycle:
        gs.cycle_edge[e] = g.add_edge(eq.vars[0], eq.vars[1], Rational(1), false, tag);
        break;
      case hybrid::Kind::Matching: {
        PairGadget p{static_cast<int>(e), eq.vars[0], eq.vars[1], {}};
        for (int k = 0; k < 2; ++k) p.forced[k] = g.add_edge(eq.vars[0], eq.vars[1], Rational(2), true, tag);
        gs.pairs.push_back(p);
        break;
      }
      case hybrid::Kind::Size3: {
        Size3Gadget q;
        q.equation = static_cast<int>(e);
        const std::string pre = "g3." + std::to_string(j) + ".";
        const char* names = "xyz";
        for (int k = 0; k < 3; ++k) {
          q.contact[k] = eq.vars[k];
          q.left[k] = g.add_vertex(pre + names[k] + ".l");
          q.right[k] = g.add_vertex(pre + names[k] + ".r");
        }
        q.e_left = g.add_vertex(pre + "e.l");
        q.e_right = g.add_vertex(pre + "e.r");
        const std::string gtag = "g3." + std::to_string(j);
        for (int k = 0; k < 3; ++k) {
          q.forced[k][0] = g.add_edge(q.contact[k], q.left[k], kContactForced, true, gtag);
          q.forced[k][1] = g.add_edge(q.contact[k], q.right[k], kContactForced, true, gtag);
        }
        q.hub[0] = g.add_edge(q.e_left, gs.hub, kHubForced, true, gtag);
        q.hub[1] = g.add_edge(q.e_right, gs.hub, kHubForced, true, gtag);
        for (int k = 0; k < 3; ++k) q.inner[k] = g.add_edge(q.left[k], q.right[k], Rational(1), false, gtag);
        for (int k = 0; k < 3; ++k) {
          q.hook[k][0] = g.add_edge(q.e_left, q.left[k], Rational(1), false, gtag);
          q.hook[k][1] = g.add_edge(q.e_right, q.right[k], Rational(1), false, gtag);
        }
        gs.gadgets.push_back(q);
        ++j;
        break;
      }
    }
  }
  return gs;
}

// Edge weight sum of the constructed quasi-tour: 5 per pair, 15.5 or 16.5 per
// size-3 gadget, 1/2 per gadget at the hub.
inline Rational quasi_tour_cost(int m, int k) { return Rational(61 * m + k); }

inline Rational completeness_bound(int m, int nu, int k) { return Rational(61 * m + 2 * nu + k + 2); }

struct Construction {
  Tour quasi_tour;
  Tour tour;
  int unsat = 0;       // hybrid unsat of the input assignment
  int components = 0;  // of the quasi-tour
  int bridges = 0;
  Rational quasi_edge_cost;
  Rational cost;
  Rational bound;
};

inline Construction tour_from_assignment(const Gs& gs, const hybrid::Assignment& a) {
  const auto& h = gs.h;
  require(a.size() == h.num_vars(), "gs tour: assignment size does not match the instance");
  require(hybrid::is_consistent(h, a), "gs tour: assignment is not consistent (round it first)");
  const Graph& g = gs.g;
  Construction c;
  c.unsat = hybrid::eval(h, a);
  Tour t = graph::empty_tour(g);
  for (std::size_t e = 0; e < h.equations().size(); ++e) {
    const auto& eq = h.equations()[e];
    if (eq.kind == hybrid::Kind::Cycle && a[eq.vars[0]] == 1 && a[eq.vars[1]] == 1) t.fwd[gs.cycle_edge[e]] = 1;
  }
  for (const auto& p : gs.pairs)
    for (int f : p.forced) t.fwd[f] = 1;
  for (const auto& q : gs.gadgets) {
    for (int k = 0; k < 3; ++k)
      for (int f : q.forced[k]) t.fwd[f] = 1;
    for (int f : q.hub) t.fwd[f] = 1;
    std::array<int, 3> val{};
    int sum = 0;
    for (int k = 0; k < 3; ++k) sum += val[k] = a[q.contact[k]];
    auto use_inner = [&](int k) { t.fwd[q.inner[k]] = 1; };
    auto use_hooks = [&](int k) { t.fwd[q.hook[k][0]] = t.fwd[q.hook[k][1]] = 1; };
    if (sum == 2) {
      for (int k = 0; k < 3; ++k) val[k] ? use_inner(k) : use_hooks(k);
    } else if (sum == 3) {
      use_hooks(0);
      use_inner(1);
      use_inner(2);
    } else {
      for (int k = 0; k < 3; ++k) use_hooks(k);
    }
  }
  const auto check = graph::check_quasi_tour(g, t);
  ensure(check.ok, "gs tour: constructed multiset is not a quasi-tour: " + check.violation);
  c.quasi_tour = t;
  c.quasi_edge_cost = graph::edge_weight_sum(g, t);
  ensure(c.quasi_edge_cost == quasi_tour_cost(gs.m(), c.unsat),
         "gs tour: quasi-tour edge cost " + c.quasi_edge_cost.str() + " differs from 61m + k = " +
             quasi_tour_cost(gs.m(), c.unsat).str());

  int comps = 0;
  const auto label = graph::component_labels(g, t, &comps);
  c.components = comps;
  graph::DisjointSets ds(static_cast<std::size_t>(comps));
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edges()[e];
    if (ed.forced) continue;
    if (ds.unite(label[ed.u], label[ed.v])) {
      t.fwd[e] += 2;
      ++c.bridges;
    }
  }
  ensure(c.bridges == comps - 1, "gs tour: bridging left the tour disconnected");
  c.tour = t;
  c.cost = graph::tour_cost(g, t);
  c.bound = completeness_bound(gs.m(), h.num_wheels(), c.unsat);
  ensure(c.cost == quasi_tour_cost(gs.m(), c.unsat) + Rational(2 * c.bridges), "gs tour: cost accounting mismatch");
  ensure(c.cost <= c.bound, "gs tour: cost " + c.cost.str() + " exceeds the bound " + c.bound.str());
  return c;
}

struct LocalCost {
  std::string kind;  // "hub", "pair", "size3"
  int index = 0;
  Rational local;
  Rational full;
  Rational baseline;
  Rational credit;
};

struct CreditReport {
  std::vector<LocalCost> parts;
  Rational sum_full;
  Rational sum_credit;
  Rational tour_cost;     // Σ w + 2(con - 1)
  Rational full_cost;     // c^F(V) = tour_cost + 2
  bool superadditive = false;  // sum_full <= full_cost
};

inline const Rational kPairBaseline{5};
inline const Rational kSize3Baseline{31, 2};
inline const Rational kSize3Unsatisfied{33, 2};

// Partition {s}, matching pairs, size-3 gadgets; c_T counts half the weight
// of each used edge per endpoint inside the set, c^F adds 2 per component
// lying entirely inside it.
inline CreditReport local_audit(const Gs& gs, const Tour& t) {
  const Graph& g = gs.g;
  const auto check = graph::check_quasi_tour(g, t);
  require(check.ok, "gs audit: not a quasi-tour: " + check.violation);
  std::vector<Rational> half(g.num_vertices(), Rational(0));
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const std::int64_t k = t.mult(static_cast<int>(e));
    if (k == 0) continue;
    const Rational hw = g.edges()[e].w * Rational(k) / Rational(2);
    half[g.edges()[e].u] += hw;
    half[g.edges()[e].v] += hw;
  }
  std::vector<int> part(g.num_vertices(), -1);
  std::vector<std::vector<int>> sets;
  CreditReport r;
  auto add_part = [&](std::string kind, int index, std::vector<int> vs, Rational baseline) {
    for (int v : vs) {
      ensure(part[v] < 0, "gs audit: partition overlap");
      part[v] = static_cast<int>(sets.size());
    }
    sets.push_back(std::move(vs));
    r.parts.push_back(LocalCost{std::move(kind), index, Rational(0), Rational(0), baseline, Rational(0)});
  };
  add_part("hub", 0, {gs.hub}, Rational(gs.m(), 2));
  for (std::size_t i = 0; i < gs.pairs.size(); ++i)
    add_part("pair", static_cast<int>(i), {gs.pairs[i].u_vertex, gs.pairs[i].n_vertex}, kPairBaseline);
  for (std::size_t j = 0; j < gs.gadgets.size(); ++j)
    add_part("size3", static_cast<int>(j), gs.gadgets[j].vertices(), kSize3Baseline);
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    ensure(part[v] >= 0, "gs audit: vertex '" + g.name(static_cast<int>(v)) + "' outside the partition");

  int comps = 0;
  const auto label = graph::component_labels(g, t, &comps);
  std::vector<int> owner(static_cast<std::size_t>(comps), -2);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    int& o = owner[label[v]];
    o = o == -2 ? part[v] : (o == part[v] ? o : -1);
  }
  std::vector<int> inside(sets.size(), 0);
  for (int o : owner)
    if (o >= 0) ++inside[o];

  r.sum_full = Rational(0);
  r.sum_credit = Rational(0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto& p = r.parts[i];
    for (int v : sets[i]) p.local += half[v];
    p.full = p.local + Rational(2 * inside[i]);
    p.credit = p.full - p.baseline;
    r.sum_full += p.full;
    r.sum_credit += p.credit;
  }
  r.tour_cost = graph::edge_weight_sum(g, t) + Rational(2 * (comps - 1));
  r.full_cost = r.tour_cost + Rational(2);
  r.superadditive = r.sum_full <= r.full_cost;
  return r;
}

struct Extraction {
  Tour normalized;
  hybrid::Assignment assignment;
  std::vector<char> honest;
  int dishonest = 0;
  int unsat = 0;
  Rational cost;   // of the input quasi-tour
  Rational bound;  // cost - 61m + 2
};

inline Rational soundness_bound(int m, const Rational& cost) { return cost - Rational(61 * m) + Rational(2); }

// Removes paired copies of simple edges, trims forced edges above two, and
// replaces a doubled pair of contact forced edges by the inner edge.
inline Tour normalize(const Gs& gs, const Tour& t) {
  const Graph& g = gs.g;
  Tour n = t;
  for (const auto& q : gs.gadgets)
    for (int k = 0; k < 3; ++k)
      while (n.fwd[q.forced[k][0]] >= 2 && n.fwd[q.forced[k][1]] >= 2) {
        --n.fwd[q.forced[k][0]];
        --n.fwd[q.forced[k][1]];
        ++n.fwd[q.inner[k]];
      }
  for (const auto& p : gs.pairs)
    while (n.fwd[p.forced[0]] >= 2 && n.fwd[p.forced[1]] >= 2) {
      --n.fwd[p.forced[0]];
      --n.fwd[p.forced[1]];
    }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (g.edges()[e].forced) {
      while (n.fwd[e] > 2) n.fwd[e] -= 2;
    } else {
      n.fwd[e] %= 2;
    }
  }
  return n;
}

// With check set, a violated soundness inequality throws.
inline Extraction extract_assignment(const Gs& gs, const Tour& t, bool check_bound = true) {
  const auto& h = gs.h;
  const Graph& g = gs.g;
  const auto check = graph::check_quasi_tour(g, t);
  require(check.ok, "gs extract: not a quasi-tour: " + check.violation);
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    require(!g.edges()[e].forced || t.fwd[e] >= 1, "gs extract: forced edge " + std::to_string(e) + " is unused");
  Extraction x;
  x.cost = graph::tour_cost(g, t);
  x.bound = soundness_bound(gs.m(), x.cost);
  x.normalized = normalize(gs, t);
  const Tour& n = x.normalized;

  x.assignment.assign(h.num_vars(), 0);
  x.honest.assign(h.num_vars(), 0);
  std::vector<char> pending(h.num_vars(), 0);
  auto read = [&](int v, int f0, int f1) {
    if (n.fwd[f0] == 1 && n.fwd[f1] == 1) {
      x.honest[v] = 1;
      int used = 0;
      for (int e : h.incident(v))
        if (h.equations()[e].kind == hybrid::Kind::Cycle && n.fwd[gs.cycle_edge[e]] == 1) ++used;
      x.assignment[v] = used == 2 ? 1 : 0;
    } else {
      pending[v] = 1;
      ++x.dishonest;
    }
  };
  std::vector<std::vector<int>> groups;
  for (const auto& p : gs.pairs) {
    read(p.u_vertex, p.forced[0], p.forced[1]);
    read(p.n_vertex, p.forced[0], p.forced[1]);
    groups.push_back({p.u_vertex, p.n_vertex});
  }
  for (const auto& q : gs.gadgets) {
    for (int k = 0; k < 3; ++k) read(q.contact[k], q.forced[k][0], q.forced[k][1]);
    groups.push_back({q.contact[0], q.contact[1], q.contact[2]});
  }
  hybrid::resolve_groups(h, x.assignment, pending, groups);
  x.unsat = hybrid::eval(h, x.assignment);
  if (check_bound)
    ensure(Rational(x.unsat) <= x.bound, "gs extract: " + std::to_string(x.unsat) +
                                           " unsatisfied equations exceed cost - 61m + 2 = " + x.bound.str());
  return x;
}

}  // namespace forge::tsp

#endif  // FORGE_TSP_REDUCTION_HPP_
