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
#ifndef FORGE_GRAPH_HPP_
#define FORGE_GRAPH_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "forge/errors.hpp"
#include "forge/rational.hpp"

namespace forge::graph {

// Allowed traversal directions of an edge. Undirected graphs use Both only.
enum class Dir { Both, UV, VU };

inline const char* dir_name(Dir d) {
  switch (d) {
    case Dir::Both: return "both";
    case Dir::UV: return "uv";
    case Dir::VU: return "vu";
  }
  return "?";
}

inline Dir parse_dir(std::string_view s) {
  if (s == "both") return Dir::Both;
  if (s == "uv") return Dir::UV;
  if (s == "vu") return Dir::VU;
  throw InputError("unknown edge direction '" + std::string(s) + "'");
}

struct Edge {
  int u = 0;
  int v = 0;
  Rational w;
  bool forced = false;
  Dir dir = Dir::Both;
  std::string tag;

  bool allows_uv() const { return dir != Dir::VU; }
  bool allows_vu() const { return dir != Dir::UV; }
  int other(int x) const { return x == u ? v : u; }
};

class Graph {
 public:
  explicit Graph(bool directed = false) : directed_(directed) {}

  bool directed() const { return directed_; }
  std::size_t num_vertices() const { return names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::string& name(int v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<int>& incident(int v) const { return incident_.at(v); }

  int add_vertex(std::string name) {
    require(!name.empty(), "graph: empty vertex id");
    require(index_.find(name) == index_.end(), "graph: duplicate vertex '" + name + "'");
    const int id = static_cast<int>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    incident_.emplace_back();
    return id;
  }

  bool has_vertex(std::string_view name) const { return index_.find(std::string(name)) != index_.end(); }

  int vertex(std::string_view name) const {
    const auto it = index_.find(std::string(name));
    require(it != index_.end(), "graph: unknown vertex '" + std::string(name) + "'");
    return it->second;
  }

  int add_edge(int u, int v, Rational w, bool forced, std::string tag, Dir dir = Dir::Both) {
    require(u >= 0 && v >= 0 && static_cast<std::size_t>(u) < names_.size() &&
                static_cast<std::size_t>(v) < names_.size(),
            "graph: edge endpoint out of range");
    require(u != v, "graph: self loop at '" + names_[u] + "'");
    require(w > Rational(0), "graph: edge weight must be positive");
    require(directed_ || dir == Dir::Both, "graph: undirected edges cannot be direction-restricted");
    const int id = static_cast<int>(edges_.size());
    edges_.push_back(Edge{u, v, w, forced, dir, std::move(tag)});
    incident_[u].push_back(id);
    incident_[v].push_back(id);
    return id;
  }

  int add_edge(std::string_view u, std::string_view v, Rational w, bool forced, std::string tag,
               Dir dir = Dir::Both) {
    return add_edge(vertex(u), vertex(v), w, forced, std::move(tag), dir);
  }

  std::size_t num_forced() const {
    return static_cast<std::size_t>(
        std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.forced; }));
  }

  Rational max_weight() const {
    Rational m(0);
    for (const auto& e : edges_) m = std::max(m, e.w);
    return m;
  }

 private:
  bool directed_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
};

// Edge multiset. fwd counts u->v traversals, bwd counts v->u; undirected
// tours keep everything in fwd.
struct Tour {
  std::vector<std::int64_t> fwd;
  std::vector<std::int64_t> bwd;

  std::int64_t mult(int e) const { return fwd.at(e) + bwd.at(e); }
  std::int64_t total() const {
    return std::accumulate(fwd.begin(), fwd.end(), std::int64_t{0}) +
           std::accumulate(bwd.begin(), bwd.end(), std::int64_t{0});
  }
  friend bool operator==(const Tour&, const Tour&) = default;
};

inline Tour empty_tour(const Graph& g) {
  return Tour{std::vector<std::int64_t>(g.num_edges(), 0), std::vector<std::int64_t>(g.num_edges(), 0)};
}

// Adds one traversal of edge e starting at vertex from.
inline void traverse(const Graph& g, Tour& t, int e, int from, std::int64_t count = 1) {
  const Edge& ed = g.edge(e);
  require(from == ed.u || from == ed.v, "traverse: vertex not on edge");
  if (!g.directed() || from == ed.u) {
    require(!g.directed() || ed.allows_uv(), "traverse: direction not allowed");
    t.fwd[e] += count;
  } else {
    require(ed.allows_vu(), "traverse: direction not allowed");
    t.bwd[e] += count;
  }
}

inline void check_shape(const Graph& g, const Tour& t) {
  require(t.fwd.size() == g.num_edges() && t.bwd.size() == g.num_edges(),
          "tour: multiplicity vector does not match the edge count");
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    require(t.fwd[e] >= 0 && t.bwd[e] >= 0, "tour: negative multiplicity on edge " + std::to_string(e));
    if (!g.directed()) {
      require(t.bwd[e] == 0, "tour: backward multiplicity on an undirected edge");
    } else {
      const Edge& ed = g.edges()[e];
      require(ed.allows_uv() || t.fwd[e] == 0, "tour: edge " + std::to_string(e) + " used against its direction");
      require(ed.allows_vu() || t.bwd[e] == 0, "tour: edge " + std::to_string(e) + " used against its direction");
    }
  }
}

// Directed: in minus out. Undirected: degree parity.
inline std::int64_t balance_of(const Graph& g, const Tour& t, int v) {
  require(v >= 0 && static_cast<std::size_t>(v) < g.num_vertices(), "balance_of: unknown vertex");
  std::int64_t in = 0;
  std::int64_t out = 0;
  std::int64_t deg = 0;
  for (int e : g.incident(v)) {
    const Edge& ed = g.edge(e);
    if (g.directed()) {
      if (ed.v == v) {
        in += t.fwd[e];
        out += t.bwd[e];
      } else {
        out += t.fwd[e];
        in += t.bwd[e];
      }
    } else {
      deg += t.fwd[e];
    }
  }
  return g.directed() ? in - out : deg % 2;
}

inline bool covered(const Graph& g, const Tour& t, int v) {
  for (int e : g.incident(v))
    if (t.mult(e) > 0) return true;
  return false;
}

struct QuasiTourCheck {
  bool ok = true;
  std::string violation;
  std::vector<int> unbalanced;
  std::vector<int> uncovered;

  explicit operator bool() const { return ok; }
};

inline QuasiTourCheck check_quasi_tour(const Graph& g, const Tour& t) {
  QuasiTourCheck r;
  check_shape(g, t);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (balance_of(g, t, static_cast<int>(v)) != 0) r.unbalanced.push_back(static_cast<int>(v));
    if (!covered(g, t, static_cast<int>(v))) r.uncovered.push_back(static_cast<int>(v));
  }
  if (!r.unbalanced.empty()) {
    r.ok = false;
    r.violation = "vertex '" + g.name(r.unbalanced.front()) + "' is unbalanced";
  } else if (!r.uncovered.empty()) {
    r.ok = false;
    r.violation = "vertex '" + g.name(r.uncovered.front()) + "' is not covered";
  }
  return r;
}

inline bool is_quasi_tour(const Graph& g, const Tour& t) { return check_quasi_tour(g, t).ok; }

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Component label per vertex (-1 for vertices no used edge touches) over the
// subgraph of edges with multiplicity >= 1.
inline std::vector<int> component_labels(const Graph& g, const Tour& t, int* count = nullptr) {
  DisjointSets ds(g.num_vertices());
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    if (t.mult(static_cast<int>(e)) > 0) ds.unite(g.edges()[e].u, g.edges()[e].v);
  std::vector<int> label(g.num_vertices(), -1);
  std::unordered_map<int, int> ids;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (!covered(g, t, static_cast<int>(v))) continue;
    const int root = ds.find(static_cast<int>(v));
    const auto [it, fresh] = ids.emplace(root, static_cast<int>(ids.size()));
    label[v] = it->second;
  }
  if (count != nullptr) *count = static_cast<int>(ids.size());
  return label;
}

inline int num_components(const Graph& g, const Tour& t) {
  int c = 0;
  component_labels(g, t, &c);
  return c;
}

inline Rational edge_weight_sum(const Graph& g, const Tour& t) {
  Rational s(0);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const std::int64_t k = t.mult(static_cast<int>(e));
    if (k != 0) s += g.edges()[e].w * Rational(k);
  }
  return s;
}

// Sum of weights plus 2 per extra component.
inline Rational tour_cost(const Graph& g, const Tour& t) {
  const auto check = check_quasi_tour(g, t);
  require(check.ok, "tour_cost: not a quasi-tour: " + check.violation);
  return edge_weight_sum(g, t) + Rational(2 * (num_components(g, t) - 1));
}

inline bool is_tour(const Graph& g, const Tour& t) {
  return is_quasi_tour(g, t) && num_components(g, t) == 1;
}

// Closed walk (Hierholzer) using every traversal of t exactly once. The
// returned sequence starts and ends at the same vertex.
inline std::vector<int> eulerian_order(const Graph& g, const Tour& t) {
  const auto check = check_quasi_tour(g, t);
  require(check.ok, "eulerian_order: not a quasi-tour: " + check.violation);
  require(num_components(g, t) == 1, "eulerian_order: tour is disconnected");
  // Arc list: (edge, from, to) per traversal.
  struct Arc {
    int to;
    int id;
  };
  std::vector<std::vector<Arc>> out(g.num_vertices());
  std::vector<std::pair<int, int>> arc_ends;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edges()[e];
    for (std::int64_t k = 0; k < t.fwd[e]; ++k) {
      const int id = static_cast<int>(arc_ends.size());
      arc_ends.emplace_back(ed.u, ed.v);
      out[ed.u].push_back({ed.v, id});
      if (!g.directed()) out[ed.v].push_back({ed.u, id});
    }
    for (std::int64_t k = 0; k < t.bwd[e]; ++k) {
      const int id = static_cast<int>(arc_ends.size());
      arc_ends.emplace_back(ed.v, ed.u);
      out[ed.v].push_back({ed.u, id});
    }
  }
  if (arc_ends.empty()) return {0};
  std::vector<char> used(arc_ends.size(), 0);
  std::vector<std::size_t> ptr(g.num_vertices(), 0);
  std::vector<int> stack{arc_ends.front().first};
  std::vector<int> walk;
  while (!stack.empty()) {
    const int v = stack.back();
    auto& p = ptr[v];
    while (p < out[v].size() && used[out[v][p].id]) ++p;
    if (p == out[v].size()) {
      walk.push_back(v);
      stack.pop_back();
    } else {
      used[out[v][p].id] = 1;
      stack.push_back(out[v][p].to);
    }
  }
  std::reverse(walk.begin(), walk.end());
  ensure(walk.size() == arc_ends.size() + 1, "eulerian_order: walk does not use every edge");
  return walk;
}

// Forced edges replaced by L-edge paths of weight w/L each.
struct Expansion {
  Graph graph;
  std::vector<std::vector<int>> path;  // per original edge: edge ids in the expanded graph, u to v
  int L = 0;
};

inline Expansion expand_forced(const Graph& g, int L) {
  require(L >= 2, "expand_forced: L must be >= 2");
  Expansion x{Graph(g.directed()), std::vector<std::vector<int>>(g.num_edges()), L};
  for (const auto& name : g.names()) x.graph.add_vertex(name);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edges()[e];
    if (!ed.forced) {
      x.path[e].push_back(x.graph.add_edge(ed.u, ed.v, ed.w, false, ed.tag, ed.dir));
      continue;
    }
    const Rational piece = ed.w / Rational(L);
    int prev = ed.u;
    for (int k = 1; k <= L; ++k) {
      const int next =
          k == L ? ed.v : x.graph.add_vertex("~" + std::to_string(e) + "." + std::to_string(k));
      x.path[e].push_back(x.graph.add_edge(prev, next, piece, false, ed.tag, ed.dir));
      prev = next;
    }
  }
  return x;
}

// Induced tour on the expanded graph: each path edge repeats its forced
// edge's traversals.
inline Tour lift_tour(const Expansion& x, const Tour& t) {
  Tour out = empty_tour(x.graph);
  for (std::size_t e = 0; e < x.path.size(); ++e)
    for (int pe : x.path[e]) {
      out.fwd[pe] = t.fwd[e];
      out.bwd[pe] = t.bwd[e];
    }
  return out;
}

enum class ContractMode { Strict, Lenient };

// Maps a tour of the expanded graph back. Strict mode requires every path
// edge of a forced edge to carry identical traversals; lenient mode takes the
// per-direction maximum over the path (the repair that adds copies of
// under-used path edges).
inline Tour contract_tour(const Graph& g, const Expansion& x, const Tour& t, ContractMode mode) {
  check_shape(x.graph, t);
  Tour out = empty_tour(g);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    std::int64_t f = 0;
    std::int64_t b = 0;
    bool uniform = true;
    for (std::size_t k = 0; k < x.path[e].size(); ++k) {
      const int pe = x.path[e][k];
      if (k > 0 && (t.fwd[pe] != f || t.bwd[pe] != b)) uniform = false;
      f = k == 0 ? t.fwd[pe] : std::max(f, t.fwd[pe]);
      b = k == 0 ? t.bwd[pe] : std::max(b, t.bwd[pe]);
    }
    if (!uniform)
      require(mode == ContractMode::Lenient,
              "contract_tour: forced path of edge " + std::to_string(e) + " is not traversed uniformly");
    out.fwd[e] = f;
    out.bwd[e] = b;
  }
  return out;
}

using Matrix = std::vector<std::vector<Rational>>;

// All-pairs shortest paths by Dijkstra from every source, honouring edge
// directions.
inline Matrix metric_closure(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<std::pair<int, Rational>>> adj(n);
  for (const auto& e : g.edges()) {
    if (e.allows_uv() || !g.directed()) adj[e.u].emplace_back(e.v, e.w);
    if (e.allows_vu() || !g.directed()) adj[e.v].emplace_back(e.u, e.w);
  }
  Matrix d(n, std::vector<Rational>(n));
  using Item = std::pair<Rational, int>;
  for (std::size_t src = 0; src < n; ++src) {
    std::vector<std::optional<Rational>> dist(n);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = Rational(0);
    pq.emplace(Rational(0), static_cast<int>(src));
    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (*dist[u] < du) continue;
      for (const auto& [v, w] : adj[u]) {
        const Rational nd = du + w;
        if (!dist[v] || nd < *dist[v]) {
          dist[v] = nd;
          pq.emplace(nd, v);
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      require(dist[v].has_value(), "metric_closure: '" + g.name(static_cast<int>(v)) +
                                       "' is unreachable from '" + g.name(static_cast<int>(src)) + "'");
      d[src][v] = *dist[v];
    }
  }
  return d;
}

inline bool is_symmetric(const Matrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m[i][j] != m[j][i]) return false;
  return true;
}

inline void check_square(const Matrix& m) {
  for (const auto& row : m) require(row.size() == m.size(), "matrix is not square");
}

inline constexpr std::size_t kTsplibMaxNodes = 5000;

struct TsplibFile {
  std::string name;
  bool asymmetric = false;
  std::int64_t scale = 1;
  std::vector<std::vector<std::int64_t>> weights;
};

// EXPLICIT / FULL_MATRIX, entries scaled by the LCM of all denominators.
inline std::string export_tsplib(const Matrix& m, const std::string& name, const std::string& note = "") {
  check_square(m);
  require(!m.empty(), "export_tsplib: empty matrix");
  if (m.size() > kTsplibMaxNodes)
    throw SizeGuardError("export_tsplib: " + std::to_string(m.size()) + " nodes exceeds the limit of " +
                         std::to_string(kTsplibMaxNodes));
  std::int64_t scale = 1;
  for (const auto& row : m)
    for (const auto& x : row) scale = lcm_checked(scale, x.den());
  const bool sym = is_symmetric(m);
  std::ostringstream os;
  os << "NAME: " << name << "\n";
  os << "TYPE: " << (sym ? "TSP" : "ATSP") << "\n";
  os << "COMMENT: scale " << scale;
  if (!note.empty()) os << "; " << note;
  os << "\n";
  os << "DIMENSION: " << m.size() << "\n";
  os << "EDGE_WEIGHT_TYPE: EXPLICIT\n";
  os << "EDGE_WEIGHT_FORMAT: FULL_MATRIX\n";
  os << "EDGE_WEIGHT_SECTION\n";
  for (const auto& row : m) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      const Rational s = row[j] * Rational(scale);
      ensure(s.is_integer(), "export_tsplib: scaled entry is not integral");
      os << (j ? " " : "") << s.num();
    }
    os << "\n";
  }
  os << "EOF\n";
  return os.str();
}

inline TsplibFile parse_tsplib(const std::string& text) {
  TsplibFile f;
  std::istringstream is(text);
  std::string line;
  std::size_t dim = 0;
  bool explicit_full = false;
  while (std::getline(is, line)) {
    const auto colon = line.find(':');
    std::string key = line.substr(0, colon);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    std::string value = colon == std::string::npos ? "" : line.substr(colon + 1);
    while (!value.empty() && value.front() == ' ') value.erase(value.begin());
    if (key == "NAME") {
      f.name = value;
    } else if (key == "TYPE") {
      require(value == "TSP" || value == "ATSP", "tsplib: unsupported TYPE '" + value + "'");
      f.asymmetric = value == "ATSP";
    } else if (key == "COMMENT") {
      if (value.rfind("scale ", 0) == 0) f.scale = std::stoll(value.substr(6));
    } else if (key == "DIMENSION") {
      dim = std::stoul(value);
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      explicit_full = value == "FULL_MATRIX";
    } else if (key == "EDGE_WEIGHT_SECTION") {
      require(explicit_full, "tsplib: only FULL_MATRIX is supported");
      require(dim > 0 && dim <= kTsplibMaxNodes, "tsplib: bad DIMENSION");
      f.weights.assign(dim, std::vector<std::int64_t>(dim));
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) require(static_cast<bool>(is >> f.weights[i][j]), "tsplib: truncated matrix");
    }
  }
  require(!f.weights.empty(), "tsplib: no EDGE_WEIGHT_SECTION");
  return f;
}

}  // namespace forge::graph

#endif  // FORGE_GRAPH_HPP_
