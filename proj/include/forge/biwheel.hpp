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
#ifndef FORGE_BIWHEEL_HPP_
#define FORGE_BIWHEEL_HPP_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forge/errors.hpp"
#include "forge/random.hpp"

namespace forge::biwheel {

enum class Side { U, N };

inline char side_char(Side s) { return s == Side::U ? 'u' : 'n'; }
inline Side other(Side s) { return s == Side::U ? Side::N : Side::U; }

// Two rings of 7n vertices numbered 1..7n. Positions divisible by 7 are
// contacts, the rest checkers; checkers of the u-ring are perfectly matched
// to checkers of the n-ring.
class BiWheel {
 public:
  BiWheel() = default;

  // pairs holds (u-ring checker position, n-ring checker position).
  BiWheel(int n, std::uint64_t seed, const std::vector<std::pair<int, int>>& pairs)
      : n_(n), seed_(seed) {
    require(n >= 1, "bi-wheel needs n >= 1");
    const int ring = 7 * n;
    u_to_n_.assign(static_cast<std::size_t>(ring) + 1, 0);
    n_to_u_.assign(static_cast<std::size_t>(ring) + 1, 0);
    require(pairs.size() == static_cast<std::size_t>(6 * n),
            "bi-wheel matching must have 6n = " + std::to_string(6 * n) + " pairs");
    for (const auto& [pu, pn] : pairs) {
      require(pu >= 1 && pu <= ring && pn >= 1 && pn <= ring,
              "bi-wheel matching position out of range");
      require(!is_contact(pu) && !is_contact(pn), "bi-wheel matching must pair checkers");
      require(u_to_n_[pu] == 0 && n_to_u_[pn] == 0, "bi-wheel matching is not a bijection");
      u_to_n_[pu] = pn;
      n_to_u_[pn] = pu;
    }
  }

  int n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  int ring_size() const { return 7 * n_; }
  int num_vertices() const { return 14 * n_; }

  static bool is_contact(int pos) { return pos % 7 == 0; }

  // Partner position on the opposite ring; 0 for contacts.
  int partner(Side side, int pos) const {
    return side == Side::U ? u_to_n_.at(pos) : n_to_u_.at(pos);
  }

  int next_pos(int pos) const { return pos == ring_size() ? 1 : pos + 1; }
  int prev_pos(int pos) const { return pos == 1 ? ring_size() : pos - 1; }

  // Dense vertex numbering: u-ring positions first, then n-ring.
  int vertex(Side side, int pos) const { return (side == Side::U ? 0 : ring_size()) + pos - 1; }
  Side side_of(int v) const { return v < ring_size() ? Side::U : Side::N; }
  int pos_of(int v) const { return v < ring_size() ? v + 1 : v - ring_size() + 1; }
  bool vertex_is_contact(int v) const { return is_contact(pos_of(v)); }

  std::vector<std::pair<int, int>> matching() const {
    std::vector<std::pair<int, int>> out;
    for (int p = 1; p <= ring_size(); ++p)
      if (!is_contact(p)) out.emplace_back(p, u_to_n_[p]);
    return out;
  }

  // Ring edges (u-ring, then n-ring) followed by matching edges.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (Side s : {Side::U, Side::N})
      for (int p = 1; p <= ring_size(); ++p) out.emplace_back(vertex(s, p), vertex(s, next_pos(p)));
    for (const auto& [pu, pn] : matching()) out.emplace_back(vertex(Side::U, pu), vertex(Side::N, pn));
    return out;
  }

  friend bool operator==(const BiWheel& a, const BiWheel& b) {
    return a.n_ == b.n_ && a.u_to_n_ == b.u_to_n_;
  }

 private:
  int n_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<int> u_to_n_;
  std::vector<int> n_to_u_;
};

// Uniformly random checker-to-checker matching, fully determined by seed.
inline BiWheel build(int n, std::uint64_t seed) {
  require(n >= 1, "build_biwheel: n must be at least 1");
  std::vector<int> u_checkers;
  std::vector<int> n_checkers;
  for (int p = 1; p <= 7 * n; ++p) {
    if (BiWheel::is_contact(p)) continue;
    u_checkers.push_back(p);
    n_checkers.push_back(p);
  }
  Rng rng(derive_seed(seed, 0xb1));
  rng.shuffle(n_checkers);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(u_checkers.size());
  for (std::size_t i = 0; i < u_checkers.size(); ++i) pairs.emplace_back(u_checkers[i], n_checkers[i]);
  return BiWheel(n, seed, pairs);
}

// Vertex ids of the contact set X.
inline std::vector<int> contacts(const BiWheel& w) {
  std::vector<int> out;
  for (int v = 0; v < w.num_vertices(); ++v)
    if (w.vertex_is_contact(v)) out.push_back(v);
  return out;
}

inline std::vector<int> degrees(const BiWheel& w) {
  std::vector<int> deg(static_cast<std::size_t>(w.num_vertices()), 0);
  for (const auto& [a, b] : w.edges()) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

struct CutCheck {
  int cut = 0;
  int contacts_inside = 0;
  int contacts_outside = 0;
  bool violates() const { return cut < std::min(contacts_inside, contacts_outside); }
};

// Evaluates the amplifier inequality for one vertex subset.
inline CutCheck cut_check(const BiWheel& w, const std::vector<int>& subset) {
  std::vector<char> in(static_cast<std::size_t>(w.num_vertices()), 0);
  for (int v : subset) {
    require(v >= 0 && v < w.num_vertices(), "cut_check: vertex out of range");
    in[v] = 1;
  }
  CutCheck c;
  for (const auto& [a, b] : w.edges())
    if (in[a] != in[b]) ++c.cut;
  for (int v : contacts(w)) (in[v] ? c.contacts_inside : c.contacts_outside)++;
  return c;
}

struct AmplifierCertificate {
  bool verified = false;   // only ever set by an exhaustive route
  bool exhaustive = false;
  std::optional<std::vector<int>> violating_set;
  std::uint64_t subsets_checked = 0;
};

inline constexpr int kExhaustiveMaxVertices = 30;

namespace detail {

inline std::vector<int> mask_to_set(std::uint64_t mask, int nv) {
  std::vector<int> out;
  for (int v = 0; v < nv; ++v)
    if ((mask >> v) & 1) out.push_back(v);
  return out;
}

// Gray-code walk over every subset, maintaining the cut size incrementally.
// Only non-empty subsets of size <= 7n are tested; a subset and its
// complement give the same inequality. The numerically smallest violating
// subset is reported.
inline AmplifierCertificate exhaustive_scan(const BiWheel& w) {
  const int nv = w.num_vertices();
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(nv), 0);
  for (const auto& [a, b] : w.edges()) {
    adj[a] |= std::uint32_t{1} << b;
    adj[b] |= std::uint32_t{1} << a;
  }
  std::uint32_t xmask = 0;
  for (int v : contacts(w)) xmask |= std::uint32_t{1} << v;
  const int total_contacts = std::popcount(xmask);
  const int half = 7 * w.n();

  AmplifierCertificate cert;
  cert.exhaustive = true;
  std::uint32_t mask = 0;
  int cut = 0;
  std::optional<std::uint32_t> worst;
  const std::uint64_t count = std::uint64_t{1} << nv;
  for (std::uint64_t i = 1; i < count; ++i) {
    const int v = std::countr_zero(i);
    const std::uint32_t bit = std::uint32_t{1} << v;
    const int deg = std::popcount(adj[v]);
    if (mask & bit) {
      mask ^= bit;
      cut += 2 * std::popcount(adj[v] & mask) - deg;
    } else {
      cut += deg - 2 * std::popcount(adj[v] & mask);
      mask ^= bit;
    }
    if (std::popcount(mask) > half) continue;
    ++cert.subsets_checked;
    const int inside = std::popcount(mask & xmask);
    if (cut < std::min(inside, total_contacts - inside)) {
      if (!worst || mask < *worst) worst = mask;
    }
  }
  cert.verified = !worst.has_value();
  if (worst) cert.violating_set = mask_to_set(*worst, nv);
  return cert;
}

inline AmplifierCertificate sample_scan(const BiWheel& w, std::uint64_t budget,
                                        std::uint64_t sample_seed) {
  const int nv = w.num_vertices();
  Rng rng(derive_seed(sample_seed, 0x5a));
  AmplifierCertificate cert;
  std::vector<int> subset;
  for (std::uint64_t s = 0; s < budget; ++s) {
    subset.clear();
    for (int v = 0; v < nv; ++v)
      if (rng.coin()) subset.push_back(v);
    if (subset.empty() || static_cast<int>(subset.size()) == nv) continue;
    ++cert.subsets_checked;
    if (cut_check(w, subset).violates()) {
      cert.violating_set = subset;
      break;
    }
  }
  return cert;
}

}  // namespace detail

// Decides the amplifier property exactly when 14n <= 30; larger wheels need
// a sampling budget and can then only be refuted, never verified.
inline AmplifierCertificate check_amplifier(const BiWheel& w, std::uint64_t budget = 0,
                                            std::uint64_t sample_seed = 0) {
  if (w.num_vertices() <= kExhaustiveMaxVertices) return detail::exhaustive_scan(w);
  if (budget == 0)
    throw SizeGuardError("check_amplifier: " + std::to_string(w.num_vertices()) +
                         " vertices exceeds exhaustive limit " +
                         std::to_string(kExhaustiveMaxVertices) + " and no sampling budget given");
  return detail::sample_scan(w, budget, sample_seed);
}

inline constexpr int kMinCutMaxContacts = 20;

// Second exact route, exponential only in the number of contacts: for every
// split (A, X \ A) of the contacts with |A| <= n, the smallest cut of any U
// with U ∩ X = A is a unit-capacity max flow from A to X \ A, and it must
// reach |A|. On failure the residual-reachable side is a violating set.
inline AmplifierCertificate check_amplifier_mincut(const BiWheel& w) {
  const std::vector<int> xs = contacts(w);
  const int k = static_cast<int>(xs.size());
  if (k > kMinCutMaxContacts)
    throw SizeGuardError("check_amplifier_mincut: too many contacts (" + std::to_string(k) + ")");
  const int nv = w.num_vertices();
  const auto edges = w.edges();
  // Arc 2e is a->b, arc 2e+1 is b->a; undirected unit capacity per edge.
  std::vector<std::vector<int>> out_arcs(static_cast<std::size_t>(nv));
  std::vector<int> head(edges.size() * 2);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    head[2 * e] = edges[e].second;
    head[2 * e + 1] = edges[e].first;
    out_arcs[edges[e].first].push_back(static_cast<int>(2 * e));
    out_arcs[edges[e].second].push_back(static_cast<int>(2 * e + 1));
  }

  AmplifierCertificate cert;
  cert.exhaustive = true;
  std::optional<std::vector<int>> worst;
  std::vector<int> flow(edges.size() * 2);
  std::vector<int> role(static_cast<std::size_t>(nv));  // 1 source, 2 sink
  std::vector<int> parent_arc(static_cast<std::size_t>(nv));
  for (std::uint32_t amask = 1; amask < (std::uint32_t{1} << k); ++amask) {
    const int a_size = std::popcount(amask);
    if (a_size > k / 2) continue;
    ++cert.subsets_checked;
    std::fill(role.begin(), role.end(), 0);
    for (int i = 0; i < k; ++i) role[xs[i]] = ((amask >> i) & 1) ? 1 : 2;
    std::fill(flow.begin(), flow.end(), 0);

    int value = 0;
    std::vector<char> seen;
    while (value < a_size) {
      seen.assign(static_cast<std::size_t>(nv), 0);
      std::deque<int> queue;
      for (int v = 0; v < nv; ++v)
        if (role[v] == 1) {
          seen[v] = 1;
          queue.push_back(v);
        }
      int reached = -1;
      while (!queue.empty() && reached < 0) {
        const int x = queue.front();
        queue.pop_front();
        for (int arc : out_arcs[x]) {
          const int y = head[arc];
          const int residual = 1 - flow[arc] + flow[arc ^ 1];
          if (seen[y] || residual <= 0) continue;
          seen[y] = 1;
          parent_arc[y] = arc;
          if (role[y] == 2) {
            reached = y;
            break;
          }
          queue.push_back(y);
        }
      }
      if (reached < 0) break;
      for (int y = reached; role[y] != 1;) {
        const int arc = parent_arc[y];
        if (flow[arc ^ 1] > 0) --flow[arc ^ 1];
        else ++flow[arc];
        y = head[arc ^ 1];
      }
      ++value;
    }
    if (value < a_size) {
      std::vector<int> side;
      for (int v = 0; v < nv; ++v)
        if (seen[v]) side.push_back(v);
      if (!worst) worst = side;
    }
  }
  cert.verified = !worst.has_value();
  cert.violating_set = worst;
  return cert;
}

}  // namespace forge::biwheel

#endif  // FORGE_BIWHEEL_HPP_
