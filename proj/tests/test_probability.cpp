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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "forge/errors.hpp"
#include "forge/wheel_probability.hpp"

namespace forge::biwheel {
namespace {

// Fixed bound on |log P' - log P| / log(12n) over the scan grid below.
constexpr double kKappa = 0.5;

// Counts, over all perfect matchings of 12 points, the number of edges
// leaving the first u points.
void enumerate_matchings(std::vector<int>& free, int u, int cut, std::map<std::pair<int, int>, long>& hist) {
  if (free.empty()) {
    ++hist[{u, cut}];
    return;
  }
  const int a = free.back();
  free.pop_back();
  for (std::size_t i = 0; i < free.size(); ++i) {
    const int b = free[i];
    std::vector<int> rest = free;
    rest.erase(rest.begin() + static_cast<long>(i));
    const int crossing = ((a < u) != (b < u)) ? 1 : 0;
    enumerate_matchings(rest, u, cut + crossing, hist);
  }
  free.push_back(a);
}

TEST(Standard, MatchesEnumerationForOneWheel) {
  for (int u = 0; u <= 12; ++u) {
    std::vector<int> pts(12);
    std::iota(pts.begin(), pts.end(), 0);
    std::map<std::pair<int, int>, long> hist;
    enumerate_matchings(pts, u, 0, hist);
    long total = 0;
    for (const auto& [key, cnt] : hist) total += cnt;
    ASSERT_EQ(total, 10395);
    for (int c = 0; c <= u; ++c) {
      const auto it = hist.find({u, c});
      const double expect = it == hist.end() ? 0.0 : static_cast<double>(it->second) / 10395.0;
      EXPECT_NEAR(std::exp(prob_cut_standard(1, u, c)), expect, 1e-12) << "u=" << u << " c=" << c;
    }
  }
}

// Bipartite matchings between 6 left and 6 right checkers; S takes the first
// a left and first b right checkers.
TEST(Bipartite, MatchesEnumerationForOneWheel) {
  std::vector<int> perm(6);
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      if ((a + b) % 2 != 0) continue;
      std::iota(perm.begin(), perm.end(), 0);
      std::map<int, long> hist;
      do {
        int cut = 0;
        for (int i = 0; i < 6; ++i) cut += ((i < a) != (perm[i] < b)) ? 1 : 0;
        ++hist[cut];
      } while (std::next_permutation(perm.begin(), perm.end()));
      const int u = a + b;
      const int k = std::abs(a - b) / 2;
      for (int c = 0; c <= 12; c += 2) {
        const double expect = hist.count(c) ? static_cast<double>(hist[c]) / 720.0 : 0.0;
        if (2 * k > c) {
          EXPECT_EQ(expect, 0.0);
          continue;
        }
        const double got = std::exp(prob_cut_unbalanced(1, u, c, k));
        EXPECT_NEAR(got, expect, 1e-12) << "a=" << a << " b=" << b << " c=" << c;
      }
    }
  }
}

TEST(Standard, Trivial) {
  EXPECT_EQ(prob_cut_standard(1, 3, 0), kNegInf);
  EXPECT_NEAR(std::exp(prob_cut_standard(1, 12, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::exp(prob_cut_standard(1, 0, 0)), 1.0, 1e-12);
  EXPECT_THROW(prob_cut_standard(1, 3, 4), InputError);
  EXPECT_THROW(prob_cut_standard(1, 13, 1), InputError);
  EXPECT_THROW(prob_cut_standard(0, 0, 0), InputError);
}

TEST(Standard, SumsToOne) {
  for (int n = 1; n <= 6; ++n) {
    for (int u = 0; u <= 12 * n; ++u) {
      double sum = 0.0;
      for (int c = u % 2; c <= u; c += 2) sum += std::exp(prob_cut_standard(n, u, c));
      EXPECT_NEAR(sum, 1.0, 1e-9) << "n=" << n << " u=" << u;
    }
  }
}

TEST(Balanced, SumsToOne) {
  for (int n = 1; n <= 6; ++n) {
    for (int u = 0; u <= 12 * n; u += 2) {
      double sum = 0.0;
      for (int c = 0; c <= u; c += 2) sum += std::exp(prob_cut_balanced(n, u, c));
      EXPECT_NEAR(sum, 1.0, 1e-9) << "n=" << n << " u=" << u;
    }
  }
}

TEST(Balanced, Trivial) {
  EXPECT_EQ(prob_cut_balanced(2, 4, 6), kNegInf);
  EXPECT_THROW(prob_cut_balanced(2, 3, 2), InputError);
  EXPECT_THROW(prob_cut_balanced(2, 4, 1), InputError);
  EXPECT_THROW(prob_cut_balanced(1, 14, 0), InputError);
}

TEST(Unbalanced, KZeroIsBalanced) {
  for (int n = 1; n <= 8; ++n)
    for (int u = 0; u <= 12 * n; u += 2)
      for (int c = 0; c <= u; c += 2) {
        const double a = prob_cut_unbalanced(n, u, c, 0);
        const double b = prob_cut_balanced(n, u, c);
        if (b == kNegInf) EXPECT_EQ(a, kNegInf);
        else EXPECT_NEAR(a, b, 1e-9);
      }
}

TEST(Unbalanced, BoundaryIsFinite) {
  EXPECT_TRUE(std::isfinite(prob_cut_unbalanced(3, 12, 4, 2)));
  EXPECT_THROW(prob_cut_unbalanced(3, 12, 4, 3), InputError);
}

TEST(Balanced, CloseToStandardOnGrid) {
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n)
    for (int u = 0; u <= 6 * n; u += 2)
      for (int c = 0; 6 * c <= u; c += 2) {
        const double d = std::abs(prob_cut_balanced(n, u, c) - prob_cut_standard(n, u, c));
        worst = std::max(worst, d / std::log(12.0 * n));
      }
  EXPECT_LE(worst, kKappa);
}

TEST(Ratio, DecreasingOnGrid) {
  int cases = 0;
  for (int n = 2; n <= 8; ++n)
    for (int u = 0; u <= 6 * n; u += 2)
      for (int c = 0; 6 * c <= u; c += 2)
        for (int k = 0; 2 * k <= c; ++k) {
          const auto v = ratio_check(n, u, c, k);
          EXPECT_TRUE(v.decreasing) << n << ' ' << u << ' ' << c << ' ' << k;
          EXPECT_NEAR(v.closed_form.to_double(), v.direct, 1e-9);
          ++cases;
        }
  EXPECT_GT(cases, 100);
}

TEST(Ratio, KZeroAlwaysDecreasing) {
  for (int n = 1; n <= 10; ++n)
    for (int u = 0; u <= 6 * n; u += 2)
      for (int c = 0; 6 * c <= u; c += 2) EXPECT_TRUE(ratio_check(n, u, c, 0).decreasing);
}

TEST(Ratio, ClosedFormValue) {
  const auto v = ratio_check(2, 12, 2, 0);
  EXPECT_EQ(v.closed_form, Rational(1, 2) * Rational(7, 6) * Rational(7, 6));
}

TEST(Ratio, RefusesOutOfRange) {
  EXPECT_THROW(ratio_check(2, 12, 4, 0), InputError);
  EXPECT_THROW(ratio_check(2, 14, 2, 0), InputError);
  EXPECT_THROW(ratio_check(2, 12, 2, 2), InputError);
}

}  // namespace
}  // namespace forge::biwheel
