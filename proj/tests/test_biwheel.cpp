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
#include <gtest/gtest.h>

#include <numeric>
#include <set>
#include <vector>

#include "forge/biwheel.hpp"
#include "forge/errors.hpp"

namespace forge::biwheel {
namespace {

int components(const BiWheel& w) {
  std::vector<int> parent(static_cast<std::size_t>(w.num_vertices()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int comps = w.num_vertices();
  for (const auto& [a, b] : w.edges()) {
    const int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --comps;
    }
  }
  return comps;
}

TEST(BiWheel, Shape) {
  for (int n = 1; n <= 4; ++n) {
    const auto w = build(n, 11);
    EXPECT_EQ(w.num_vertices(), 14 * n);
    EXPECT_EQ(static_cast<int>(contacts(w).size()), 2 * n);
    EXPECT_EQ(static_cast<int>(w.edges().size()), 14 * n + 6 * n);
    const auto deg = degrees(w);
    for (int v = 0; v < w.num_vertices(); ++v) EXPECT_EQ(deg[v], w.vertex_is_contact(v) ? 2 : 3);
    EXPECT_EQ(components(w), 1);
  }
}

TEST(BiWheel, MatchingIsBijectionOnCheckers) {
  const auto w = build(3, 5);
  std::set<int> seen_u, seen_n;
  for (const auto& [pu, pn] : w.matching()) {
    EXPECT_FALSE(BiWheel::is_contact(pu));
    EXPECT_FALSE(BiWheel::is_contact(pn));
    EXPECT_EQ(w.partner(Side::U, pu), pn);
    EXPECT_EQ(w.partner(Side::N, pn), pu);
    seen_u.insert(pu);
    seen_n.insert(pn);
  }
  EXPECT_EQ(seen_u.size(), 18u);
  EXPECT_EQ(seen_n.size(), 18u);
}

TEST(BiWheel, SeedDeterminism) {
  EXPECT_EQ(build(2, 42), build(2, 42));
  EXPECT_NE(build(2, 42).matching(), build(2, 43).matching());
}

TEST(BiWheel, RejectsBadMatching) {
  EXPECT_THROW(build(0, 1), InputError);
  std::vector<std::pair<int, int>> pairs;
  for (int p = 1; p <= 6; ++p) pairs.emplace_back(p, 1);
  EXPECT_THROW(BiWheel(1, 0, pairs), InputError);
  pairs.clear();
  for (int p = 1; p <= 6; ++p) pairs.emplace_back(p, p + 1);
  EXPECT_THROW(BiWheel(1, 0, pairs), InputError);
}

TEST(CutCheck, SingleChecker) {
  const auto w = build(1, 3);
  const auto c = cut_check(w, {w.vertex(Side::U, 1)});
  EXPECT_EQ(c.cut, 3);
  EXPECT_EQ(c.contacts_inside, 0);
  EXPECT_FALSE(c.violates());
}

TEST(CutCheck, SingleContact) {
  const auto w = build(2, 3);
  const auto c = cut_check(w, {w.vertex(Side::N, 7)});
  EXPECT_EQ(c.cut, 2);
  EXPECT_EQ(c.contacts_inside, 1);
  EXPECT_EQ(c.contacts_outside, 3);
  EXPECT_FALSE(c.violates());
}

TEST(CutCheck, WholeRing) {
  const auto w = build(2, 8);
  std::vector<int> ring;
  for (int p = 1; p <= 14; ++p) ring.push_back(w.vertex(Side::U, p));
  const auto c = cut_check(w, ring);
  EXPECT_EQ(c.cut, 12);
  EXPECT_EQ(c.contacts_inside, 2);
  EXPECT_EQ(c.contacts_outside, 2);
}

TEST(Amplifier, SmallWheelsAgreeAcrossRoutes) {
  int verified = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto w = build(1, s);
    const auto a = check_amplifier(w);
    const auto b = check_amplifier_mincut(w);
    EXPECT_TRUE(a.exhaustive);
    EXPECT_EQ(a.verified, b.verified) << "seed " << s;
    if (a.violating_set) EXPECT_TRUE(cut_check(w, *a.violating_set).violates());
    if (b.violating_set) EXPECT_TRUE(cut_check(w, *b.violating_set).violates());
    verified += a.verified;
  }
  EXPECT_EQ(verified, 20);
}

TEST(Amplifier, SubsetCountIsComplementHalved) {
  // Non-empty subsets of 14 vertices with size <= 7.
  std::uint64_t expected = 0;
  std::uint64_t binom = 1;
  for (int k = 1; k <= 7; ++k) {
    binom = binom * static_cast<std::uint64_t>(14 - k + 1) / static_cast<std::uint64_t>(k);
    expected += binom;
  }
  EXPECT_EQ(check_amplifier(build(1, 0)).subsets_checked, expected);
}

TEST(Amplifier, TwoWheelBothRoutes) {
  const auto w = build(2, 7);
  const auto a = check_amplifier(w);
  const auto b = check_amplifier_mincut(w);
  EXPECT_EQ(a.verified, b.verified);
  EXPECT_TRUE(a.verified);
}

TEST(Amplifier, LargeWheelNeedsBudget) {
  const auto w = build(3, 1);
  EXPECT_THROW(check_amplifier(w), SizeGuardError);
  const auto sampled = check_amplifier(w, 2000, 9);
  EXPECT_FALSE(sampled.verified);
  EXPECT_FALSE(sampled.exhaustive);
  EXPECT_FALSE(sampled.violating_set.has_value());
  EXPECT_GT(sampled.subsets_checked, 0u);
  EXPECT_TRUE(check_amplifier_mincut(w).verified);
}

TEST(Amplifier, MinCutGuard) { EXPECT_THROW(check_amplifier_mincut(build(11, 1)), SizeGuardError); }

}  // namespace
}  // namespace forge::biwheel
