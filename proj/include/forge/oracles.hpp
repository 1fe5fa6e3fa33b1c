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
#ifndef FORGE_ORACLES_HPP_
#define FORGE_ORACLES_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/graph.hpp"
#include "forge/rational.hpp"

namespace forge::oracle {

using graph::Matrix;

struct ExactTourResult {
  Rational cost;
  std::vector<int> order;  // city sequence starting at 0, closing edge implicit
  std::string method;
};

inline constexpr std::size_t kHeldKarpMax = 18;
inline constexpr std::size_t kPermutationMax = 10;

namespace detail {

struct Scaled {
  std::int64_t scale = 1;
  std::vector<std::vector<std::int64_t>> d;
};

inline Scaled scale(const Matrix& m) {
  graph::check_square(m);
  Scaled s;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i == j) continue;
      require(m[i][j] > Rational(0), "oracle: off-diagonal entries must be positive");
      s.scale = lcm_checked(s.scale, m[i][j].den());
    }
  s.d.assign(m.size(), std::vector<std::int64_t>(m.size(), 0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (i != j) s.d[i][j] = (m[i][j] * Rational(s.scale)).num();
  return s;
}

inline Rational order_cost(const Matrix& m, const std::vector<int>& order) {
  Rational c(0);
  for (std::size_t k = 0; k < order.size(); ++k) c += m[order[k]][order[(k + 1) % order.size()]];
  return c;
}

}  // namespace detail

inline Rational cycle_cost(const Matrix& m, const std::vector<int>& order) {
  if (order.size() < 2) return Rational(0);
  return detail::order_cost(m, order);
}

// Subset DP over cities 1..n-1 with city 0 fixed as the start.
inline ExactTourResult held_karp(const Matrix& m) {
  const std::size_t n = m.size();
  require(n >= 1, "held_karp: empty matrix");
  if (n > kHeldKarpMax)
    throw SizeGuardError("held_karp: " + std::to_string(n) + " cities exceeds the limit of " +
                         std::to_string(kHeldKarpMax));
  const auto s = detail::scale(m);
  if (n == 1) return {Rational(0), {0}, "held_karp"};
  const std::size_t k = n - 1;
  const std::size_t full = std::size_t{1} << k;
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> dp(full * k, kInf);
  std::vector<std::int8_t> parent(full * k, -1);
  for (std::size_t j = 0; j < k; ++j) dp[(std::size_t{1} << j) * k + j] = s.d[0][j + 1];
  for (std::size_t mask = 1; mask < full; ++mask)
    for (std::size_t j = 0; j < k; ++j) {
      if (!(mask >> j & 1)) continue;
      const std::int64_t cur = dp[mask * k + j];
      if (cur >= kInf) continue;
      for (std::size_t nx = 0; nx < k; ++nx) {
        if (mask >> nx & 1) continue;
        const std::size_t nm = mask | (std::size_t{1} << nx);
        const std::int64_t cand = cur + s.d[j + 1][nx + 1];
        if (cand < dp[nm * k + nx]) {
          dp[nm * k + nx] = cand;
          parent[nm * k + nx] = static_cast<std::int8_t>(j);
        }
      }
    }
  std::int64_t best = kInf;
  std::size_t last = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::int64_t c = dp[(full - 1) * k + j] + s.d[j + 1][0];
    if (c < best) {
      best = c;
      last = j;
    }
  }
  std::vector<int> rev;
  std::size_t mask = full - 1;
  int j = static_cast<int>(last);
  while (j >= 0) {
    rev.push_back(j + 1);
    const int pj = parent[mask * k + static_cast<std::size_t>(j)];
    mask &= ~(std::size_t{1} << j);
    j = pj;
  }
  std::vector<int> order{0};
  order.insert(order.end(), rev.rbegin(), rev.rend());
  ExactTourResult r{Rational(best, s.scale), order, "held_karp"};
  ensure(detail::order_cost(m, order) == r.cost, "held_karp: witness cost mismatch");
  return r;
}

// Every ordering of cities 1..n-1 after city 0.
inline ExactTourResult brute_permutation(const Matrix& m) {
  const std::size_t n = m.size();
  require(n >= 1, "brute_permutation: empty matrix");
  if (n > kPermutationMax)
    throw SizeGuardError("brute_permutation: " + std::to_string(n) + " cities exceeds the limit of " +
                         std::to_string(kPermutationMax));
  const auto s = detail::scale(m);
  if (n == 1) return {Rational(0), {0}, "brute_permutation"};
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<int> best_order;
  do {
    std::int64_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += s.d[perm[i]][perm[(i + 1) % n]];
    if (c < best) {
      best = c;
      best_order = perm;
    }
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return {Rational(best, s.scale), best_order, "brute_permutation"};
}

}  // namespace forge::oracle

#endif  // FORGE_ORACLES_HPP_
