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
#ifndef FORGE_JSON_IO_HPP_
#define FORGE_JSON_IO_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "forge/atsp_reduction.hpp"
#include "forge/biwheel.hpp"
#include "forge/e3lin2.hpp"
#include "forge/errors.hpp"
#include "forge/graph.hpp"
#include "forge/hybrid.hpp"
#include "forge/rational.hpp"
#include "forge/tsp_reduction.hpp"

namespace forge::io {

using json = nlohmann::ordered_json;

template <class T>
T field(const json& j, const char* key) {
  require(j.is_object() && j.contains(key), std::string("json: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("json: bad field '") + key + "': " + e.what());
  }
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("json: ") + e.what());
  }
}

inline Rational rational_from(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw InputError("json: expected a rational as \"p/q\" or an integer");
}

// Wheel: {n, seed, matching: [[u_pos, n_pos], ...]}
inline json wheel_json(const biwheel::BiWheel& w) {
  json m = json::array();
  for (const auto& [pu, pn] : w.matching()) m.push_back({pu, pn});
  return json{{"n", w.n()}, {"seed", w.seed()}, {"matching", m}};
}

inline biwheel::BiWheel wheel_from_json(const json& j) {
  std::vector<std::pair<int, int>> pairs;
  const json matching = field<json>(j, "matching");
  for (const auto& p : matching) {
    require(p.is_array() && p.size() == 2, "json: matching entries must be pairs");
    pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
  }
  return biwheel::BiWheel(field<int>(j, "n"), field<std::uint64_t>(j, "seed"), pairs);
}

// Hybrid: {b, m, wheels: {var: wheel}, equations: [{kind, vars, rhs}]}
inline json hybrid_json(const hybrid::Instance& h) {
  json wheels = json::object();
  for (const auto& [i, w] : h.wheels()) wheels[std::to_string(i)] = wheel_json(w);
  json eqs = json::array();
  for (const auto& eq : h.equations()) {
    json vars = json::array();
    for (int k = 0; k < eq.arity(); ++k) vars.push_back(h.var_id(eq.vars[k]));
    eqs.push_back({{"kind", hybrid::kind_name(eq.kind)}, {"vars", vars}, {"rhs", eq.rhs}});
  }
  return json{{"b", h.b()}, {"m", h.m()}, {"wheels", wheels}, {"equations", eqs}};
}

// The wheels and the size-3 equations determine the instance; the remaining
// equations must match the rebuilt ones exactly.
inline hybrid::Instance hybrid_from_json(const json& j) {
  std::map<int, biwheel::BiWheel> wheels;
  const json wheel_map = field<json>(j, "wheels");
  for (const auto& [key, w] : wheel_map.items()) {
    int i = 0;
    try {
      i = std::stoi(key);
    } catch (const std::exception&) {
      throw InputError("json: wheel key '" + key + "' is not a variable index");
    }
    wheels.emplace(i, wheel_from_json(w));
  }
  const json eqs = field<json>(j, "equations");
  require(eqs.is_array(), "json: equations must be an array");
  std::vector<std::array<hybrid::ContactRef, 3>> triples;
  for (const auto& eq : eqs) {
    if (field<std::string>(eq, "kind") != "size3") continue;
    const auto ids = field<std::vector<std::string>>(eq, "vars");
    require(ids.size() == 3, "json: size3 equation needs 3 variables");
    std::array<hybrid::ContactRef, 3> t{};
    for (int k = 0; k < 3; ++k) t[k] = hybrid::parse_var_ref(ids[k]);
    triples.push_back(t);
  }
  hybrid::Instance h(field<int>(j, "b"), std::move(wheels), triples);
  require(h.equations().size() == eqs.size(), "json: hybrid equation count does not match the wheels");
  for (std::size_t e = 0; e < eqs.size(); ++e) {
    const auto& want = h.equations()[e];
    const auto ids = field<std::vector<std::string>>(eqs[e], "vars");
    bool same = field<std::string>(eqs[e], "kind") == hybrid::kind_name(want.kind) &&
                field<int>(eqs[e], "rhs") == want.rhs && static_cast<int>(ids.size()) == want.arity();
    for (int k = 0; same && k < want.arity(); ++k) same = h.parse_var_id(ids[k]) == want.vars[k];
    require(same, "json: hybrid equation " + std::to_string(e) + " does not match the wheel layout");
  }
  if (j.contains("m")) require(j["m"].get<int>() == h.m(), "json: hybrid m does not match");
  return h;
}

// Graph: {directed, vertices, edges: [{u, v, w, forced, dir, tag}], meta}
inline json graph_json(const graph::Graph& g, const json& meta = json::object()) {
  json edges = json::array();
  for (const auto& e : g.edges())
    edges.push_back({{"u", g.name(e.u)},
                     {"v", g.name(e.v)},
                     {"w", e.w.str()},
                     {"forced", e.forced},
                     {"dir", graph::dir_name(e.dir)},
                     {"tag", e.tag}});
  json out{{"directed", g.directed()}, {"vertices", g.names()}, {"edges", edges}};
  if (!meta.empty()) out["meta"] = meta;
  return out;
}

inline graph::Graph graph_from_json(const json& j) {
  graph::Graph g(field<bool>(j, "directed"));
  for (const auto& v : field<std::vector<std::string>>(j, "vertices")) g.add_vertex(v);
  const json edges = field<json>(j, "edges");
  for (const auto& e : edges)
    g.add_edge(field<std::string>(e, "u"), field<std::string>(e, "v"), rational_from(e.at("w")),
               e.value("forced", false), e.value("tag", std::string()),
               graph::parse_dir(e.value("dir", std::string("both"))));
  return g;
}

inline bool same_graph(const graph::Graph& a, const graph::Graph& b) {
  if (a.directed() != b.directed() || a.names() != b.names() || a.num_edges() != b.num_edges()) return false;
  for (std::size_t e = 0; e < a.num_edges(); ++e) {
    const auto& x = a.edges()[e];
    const auto& y = b.edges()[e];
    if (x.u != y.u || x.v != y.v || x.w != y.w || x.forced != y.forced || x.dir != y.dir || x.tag != y.tag)
      return false;
  }
  return true;
}

inline json reduction_json(const tsp::Gs& gs) {
  return graph_json(gs.g, json{{"reduction", "tsp"}, {"hybrid", hybrid_json(gs.h)}});
}

inline json reduction_json(const atsp::Ga& ga) {
  return graph_json(ga.g, json{{"reduction", "atsp"}, {"lambda", ga.lambda.str()}, {"hybrid", hybrid_json(ga.h)}});
}

inline std::string reduction_of(const json& j) {
  if (!j.contains("meta") || !j["meta"].contains("reduction")) return "";
  return j["meta"]["reduction"].get<std::string>();
}

// Rebuilds the reduction from its hybrid instance and checks the stored
// edges against it.
inline tsp::Gs gs_from_json(const json& j) {
  require(reduction_of(j) == "tsp", "json: graph is not a TSP reduction graph");
  auto gs = tsp::build_gs(hybrid_from_json(j["meta"]["hybrid"]));
  require(same_graph(gs.g, graph_from_json(j)), "json: graph edges do not match the stored hybrid instance");
  return gs;
}

inline atsp::Ga ga_from_json(const json& j) {
  require(reduction_of(j) == "atsp", "json: graph is not an ATSP reduction graph");
  auto ga = atsp::build_ga(hybrid_from_json(j["meta"]["hybrid"]), rational_from(j["meta"]["lambda"]));
  require(same_graph(ga.g, graph_from_json(j)), "json: graph edges do not match the stored hybrid instance");
  return ga;
}

// Tour: {edges: [{id, mult, dir}]}; only nonzero entries are written.
inline json tour_json(const graph::Graph& g, const graph::Tour& t) {
  json edges = json::array();
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!g.directed()) {
      if (t.fwd[e]) edges.push_back({{"id", e}, {"mult", t.fwd[e]}, {"dir", "both"}});
      continue;
    }
    if (t.fwd[e]) edges.push_back({{"id", e}, {"mult", t.fwd[e]}, {"dir", "uv"}});
    if (t.bwd[e]) edges.push_back({{"id", e}, {"mult", t.bwd[e]}, {"dir", "vu"}});
  }
  return json{{"edges", edges}};
}

inline graph::Tour tour_from_json(const graph::Graph& g, const json& j) {
  graph::Tour t = graph::empty_tour(g);
  const json edges = field<json>(j, "edges");
  for (const auto& e : edges) {
    const auto id = field<std::int64_t>(e, "id");
    require(id >= 0 && static_cast<std::size_t>(id) < g.num_edges(), "json: tour edge id out of range");
    const auto mult = field<std::int64_t>(e, "mult");
    require(mult >= 0, "json: negative multiplicity");
    const auto dir = graph::parse_dir(e.value("dir", std::string(g.directed() ? "uv" : "both")));
    if (!g.directed() || dir != graph::Dir::VU)
      t.fwd[id] += mult;
    else
      t.bwd[id] += mult;
  }
  graph::check_shape(g, t);
  return t;
}

// Assignment: {"original": [bits]} or {"hybrid": {id: bit}}.
inline json original_assignment_json(const e3lin2::Assignment& a) {
  return json{{"original", std::vector<int>(a.begin(), a.end())}};
}

inline json hybrid_assignment_json(const hybrid::Instance& h, const hybrid::Assignment& a) {
  json m = json::object();
  for (std::size_t v = 0; v < a.size(); ++v) m[h.var_id(static_cast<int>(v))] = a[v];
  return json{{"hybrid", m}};
}

inline hybrid::Assignment hybrid_assignment_from_json(const hybrid::Instance& h, const json& j) {
  if (j.contains("original")) {
    const auto bits = field<std::vector<int>>(j, "original");
    e3lin2::Assignment phi;
    for (int b : bits) {
      require(b == 0 || b == 1, "json: assignment bits must be 0 or 1");
      phi.push_back(static_cast<std::uint8_t>(b));
    }
    return hybrid::extend_consistent(h, phi);
  }
  const json m = field<json>(j, "hybrid");
  hybrid::Assignment a(h.num_vars(), 0);
  std::vector<char> seen(h.num_vars(), 0);
  for (const auto& [id, bit] : m.items()) {
    const int v = h.parse_var_id(id);
    const int b = bit.get<int>();
    require(b == 0 || b == 1, "json: assignment bits must be 0 or 1");
    a[v] = static_cast<std::uint8_t>(b);
    seen[v] = 1;
  }
  for (std::size_t v = 0; v < seen.size(); ++v)
    require(seen[v], "json: assignment misses " + h.var_id(static_cast<int>(v)));
  return a;
}

// Matrix: {"matrix": [[entry, ...], ...]} with entries "p/q" or integers.
inline json matrix_json(const graph::Matrix& m) {
  json rows = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& x : row) r.push_back(x.str());
    rows.push_back(r);
  }
  return json{{"matrix", rows}};
}

inline graph::Matrix matrix_from_json(const json& j) {
  graph::Matrix m;
  const json rows = field<json>(j, "matrix");
  for (const auto& row : rows) {
    require(row.is_array(), "json: matrix rows must be arrays");
    std::vector<Rational> r;
    for (const auto& x : row) r.push_back(rational_from(x));
    m.push_back(std::move(r));
  }
  graph::check_square(m);
  return m;
}

}  // namespace forge::io

#endif  // FORGE_JSON_IO_HPP_
