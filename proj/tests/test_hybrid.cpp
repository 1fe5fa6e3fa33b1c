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

#include <vector>

#include "forge/e3lin2.hpp"
#include "forge/hybrid.hpp"
#include "forge/random.hpp"

namespace forge::hybrid {
namespace {

struct Fixture {
  e3lin2::Planted planted;
  e3lin2::Instance balanced;
  Instance h;
};

Fixture make(int num_vars, int num_eqs, int flips, int b, std::uint64_t seed) {
  Fixture f;
  f.planted = e3lin2::generate_planted(num_vars, num_eqs, flips, seed);
  f.balanced = e3lin2::balance_negations(f.planted.instance, b);
  f.h = build(f.balanced, b, seed);
  return f;
}

TEST(Hybrid, EquationCounts) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto f = make(5, 3, 1, static_cast<int>(s % 2), s);
    const int m = static_cast<int>(f.balanced.size());
    EXPECT_EQ(f.h.m(), m);
    EXPECT_EQ(counts(f.h), (Counts{31 * m, 21 * m, 9 * m, m}));
  }
}

TEST(Hybrid, EveryVariableOccursThreeTimes) {
  const auto f = make(6, 4, 0, 0, 3);
  std::vector<int> occ(f.h.num_vars(), 0);
  for (const auto& eq : f.h.equations())
    for (int k = 0; k < eq.arity(); ++k) ++occ[eq.vars[k]];
  for (std::size_t v = 0; v < occ.size(); ++v) {
    EXPECT_EQ(occ[v], 3) << f.h.var_id(static_cast<int>(v));
    EXPECT_EQ(f.h.incident(static_cast<int>(v)).size(), 3u);
  }
}

TEST(Hybrid, WheelSizesFollowDegree) {
  const auto f = make(5, 4, 0, 1, 8);
  for (const auto& [i, w] : f.h.wheels()) EXPECT_EQ(2 * w.n(), f.balanced.occurrences(i));
}

TEST(Hybrid, WheelsAreAmplifiers) {
  const auto f = make(4, 2, 0, 0, 12);
  for (const auto& [i, w] : f.h.wheels()) {
    if (w.n() == 1) EXPECT_TRUE(biwheel::check_amplifier(w).verified);
    EXPECT_TRUE(biwheel::check_amplifier_mincut(w).verified);
  }
}

TEST(Hybrid, Deterministic) {
  const auto a = make(5, 3, 1, 0, 77);
  const auto b = make(5, 3, 1, 0, 77);
  EXPECT_EQ(a.h.wheels(), b.h.wheels());
}

TEST(Hybrid, ConsistentExtensionPreservesUnsat) {
  Rng rng(4);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const int b = static_cast<int>(s % 2);
    const auto f = make(6, 5, 2, b, s);
    for (int t = 0; t < 5; ++t) {
      e3lin2::Assignment phi(6);
      for (auto& x : phi) x = rng.coin();
      const auto a = extend_consistent(f.h, phi);
      EXPECT_TRUE(is_consistent(f.h, a));
      EXPECT_EQ(eval(f.h, a), e3lin2::eval(f.balanced, phi));
      EXPECT_EQ(eval(f.h, a), 4 * e3lin2::eval(f.planted.instance, phi));
      const auto back = project(f.h, a, 6);
      for (const auto& [i, w] : f.h.wheels()) EXPECT_EQ(back[i - 1], phi[i - 1]);
    }
  }
}

TEST(Hybrid, PlantedAssignmentCost) {
  const auto f = make(6, 5, 2, 0, 21);
  EXPECT_EQ(eval(f.h, extend_consistent(f.h, f.planted.assignment)), 8);
}

TEST(Hybrid, RoundingNeverIncreasesUnsat) {
  Rng rng(9);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto f = make(5, 4, 1, 1, s);
    for (int t = 0; t < 5; ++t) {
      Assignment a(f.h.num_vars());
      for (auto& x : a) x = rng.coin();
      const auto r = round_consistent(f.h, a);
      EXPECT_TRUE(is_consistent(f.h, r));
      EXPECT_LE(eval(f.h, r), eval(f.h, a));
      EXPECT_EQ(eval(f.h, r), e3lin2::eval(f.balanced, project(f.h, r, 5)));
    }
  }
}

TEST(Hybrid, RoundingRepairsSingleFlip) {
  const auto f = make(5, 4, 0, 0, 5);
  auto a = extend_consistent(f.h, f.planted.assignment);
  ASSERT_EQ(eval(f.h, a), 0);
  a[f.h.index(2, biwheel::Side::N, 3)] ^= 1;
  EXPECT_EQ(eval(f.h, a), 3);
  EXPECT_EQ(round_consistent(f.h, a), extend_consistent(f.h, f.planted.assignment));
}

TEST(Hybrid, ConsistentWheelUntouchedByRounding) {
  const auto f = make(5, 4, 2, 0, 6);
  const auto a = extend_consistent(f.h, f.planted.assignment);
  EXPECT_EQ(round_consistent(f.h, a), a);
}

TEST(Hybrid, VarIdRoundTrip) {
  const auto f = make(4, 2, 0, 0, 1);
  for (int v = 0; v < static_cast<int>(f.h.num_vars()); ++v) EXPECT_EQ(f.h.parse_var_id(f.h.var_id(v)), v);
  EXPECT_THROW(f.h.parse_var_id("x.1.q.3"), InputError);
  EXPECT_THROW(f.h.parse_var_id("y.1.u.3"), InputError);
  EXPECT_THROW(f.h.parse_var_id("x.1.u.999"), InputError);
  EXPECT_THROW(f.h.parse_var_id("x.99.u.7"), InputError);
  const auto r = parse_var_ref("x.12.n.35");
  EXPECT_EQ(r.source_var, 12);
  EXPECT_EQ(r.side, biwheel::Side::N);
  EXPECT_EQ(r.ring_pos, 35);
}

TEST(Hybrid, ContactsMapToAppearances) {
  const auto f = make(5, 3, 0, 0, 2);
  int k = 0;
  for (const auto& eq : f.h.equations()) {
    if (eq.kind != Kind::Size3) continue;
    const auto& orig = f.balanced.equations()[k++];
    for (int j = 0; j < 3; ++j) {
      const auto& var = f.h.variables()[eq.vars[j]];
      EXPECT_TRUE(var.is_contact);
      EXPECT_EQ(var.source_var, orig.lits[j].var);
      EXPECT_EQ(var.side, orig.lits[j].negated ? biwheel::Side::N : biwheel::Side::U);
    }
    EXPECT_EQ(eq.rhs, 0);
  }
}

TEST(Hybrid, RejectsBadInput) {
  const auto p = e3lin2::generate_planted(5, 3, 0, 1);
  EXPECT_THROW(build(p.instance, 0, 1), InputError);
  EXPECT_THROW(build(e3lin2::balance_negations(p.instance, 1), 0, 1), InputError);
  EXPECT_THROW(build(e3lin2::balance_negations(e3lin2::parse("x1 x1 x2 = 0"), 0), 0, 1), InputError);
  EXPECT_THROW(build(e3lin2::balance_negations(p.instance, 0), 2, 1), InputError);
}

TEST(Hybrid, InstanceValidatesContactUse) {
  std::map<int, BiWheel> wheels;
  for (int i = 1; i <= 3; ++i) wheels.emplace(i, biwheel::build(1, static_cast<std::uint64_t>(i)));
  using biwheel::Side;
  const std::array<ContactRef, 3> t1{ContactRef{1, Side::U, 7}, ContactRef{2, Side::U, 7}, ContactRef{3, Side::U, 7}};
  const std::array<ContactRef, 3> t2{ContactRef{1, Side::N, 7}, ContactRef{2, Side::N, 7}, ContactRef{3, Side::N, 7}};
  EXPECT_NO_THROW(Instance(0, wheels, {t1, t2}));
  EXPECT_THROW(Instance(0, wheels, {t1}), InputError);
  EXPECT_THROW(Instance(0, wheels, {t1, t1}), InputError);
  const std::array<ContactRef, 3> twice{ContactRef{1, Side::U, 7}, ContactRef{1, Side::N, 7}, ContactRef{3, Side::U, 7}};
  EXPECT_THROW(Instance(0, wheels, {twice, t2}), InputError);
  const std::array<ContactRef, 3> checker{ContactRef{1, Side::U, 3}, ContactRef{2, Side::U, 7}, ContactRef{3, Side::U, 7}};
  EXPECT_THROW(Instance(0, wheels, {checker, t2}), InputError);
}

TEST(Hybrid, ResolveGroupsPicksBestCombination) {
  const auto f = make(5, 4, 0, 0, 5);
  const auto good = extend_consistent(f.h, f.planted.assignment);
  auto a = good;
  std::vector<char> pending(f.h.num_vars(), 0);
  const int u1 = f.h.index(1, biwheel::Side::U, 1);
  const int u2 = f.h.index(1, biwheel::Side::U, 2);
  a[u1] ^= 1;
  a[u2] ^= 1;
  pending[u1] = pending[u2] = 1;
  resolve_groups(f.h, a, pending, {{u1, u2}});
  EXPECT_EQ(a, good);
  EXPECT_EQ(pending[u1], 0);
  EXPECT_EQ(pending[u2], 0);
}

}  // namespace
}  // namespace forge::hybrid
