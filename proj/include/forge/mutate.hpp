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
#ifndef FORGE_MUTATE_HPP_
#define FORGE_MUTATE_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "forge/graph.hpp"
#include "forge/random.hpp"

namespace forge::graph {

struct Step {
  int edge = 0;
  int from = 0;
};

// Random simple closed walk following allowed directions: a random walk that
// stops at the first repeated vertex, cut back to the loop.
inline std::vector<Step> random_cycle(const Graph& g, Rng& rng) {
  require(g.num_vertices() > 0, "random_cycle: empty graph");
  std::vector<int> first_seen(g.num_vertices(), -1);
  std::vector<Step> walk;
  int v = static_cast<int>(rng.below(g.num_vertices()));
  int came_by = -1;
  for (;;) {
    first_seen[v] = static_cast<int>(walk.size());
    std::vector<int> options;
    for (int e : g.incident(v)) {
      const Edge& ed = g.edge(e);
      if (g.directed() && !(ed.u == v ? ed.allows_uv() : ed.allows_vu())) continue;
      if (e == came_by && g.incident(v).size() > 1) continue;
      options.push_back(e);
    }
    if (options.empty()) return {};
    const int e = options[rng.below(options.size())];
    walk.push_back(Step{e, v});
    came_by = e;
    v = g.edge(e).other(v);
    if (first_seen[v] >= 0) return {walk.begin() + first_seen[v], walk.end()};
  }
}

struct MutationOptions {
  bool keep_connected = false;  // reject moves that split the tour
  std::int64_t max_mult = 4;
};

// One legal move on a quasi-tour: add or remove a closed walk (directed), or
// toggle each edge of a closed walk by +-1 (undirected). Forced edges stay at
// multiplicity >= 1 and every vertex stays covered. Returns false when the
// sampled move was rejected; t is unchanged then.
inline bool mutate(const Graph& g, Tour& t, Rng& rng, const MutationOptions& opts = {}) {
  const auto cycle = random_cycle(g, rng);
  if (cycle.empty()) return false;
  Tour next = t;
  if (g.directed()) {
    const bool remove = rng.coin();
    for (const auto& s : cycle) {
      auto& slot = s.from == g.edge(s.edge).u ? next.fwd[s.edge] : next.bwd[s.edge];
      slot += remove ? -1 : 1;
      if (slot < 0 || slot > opts.max_mult) return false;
    }
  } else {
    for (const auto& s : cycle) {
      auto& slot = next.fwd[s.edge];
      slot += rng.coin() && slot > 0 ? -1 : 1;
      if (slot > opts.max_mult) return false;
    }
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    if (g.edges()[e].forced && next.mult(static_cast<int>(e)) < 1) return false;
  if (!is_quasi_tour(g, next)) return false;
  if (opts.keep_connected && num_components(g, next) != 1) return false;
  t = std::move(next);
  return true;
}

}  // namespace forge::graph

#endif  // FORGE_MUTATE_HPP_
