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
#ifndef FORGE_WHEEL_PROBABILITY_HPP_
#define FORGE_WHEEL_PROBABILITY_HPP_

#include <cmath>
#include <limits>
#include <string>

#include "forge/errors.hpp"
#include "forge/rational.hpp"

// Log-space probabilities that a checker set S of size u has exactly c
// matching edges leaving it, for wheels with 12n checkers. All values are
// natural logs; an impossible event is -infinity.
namespace forge::biwheel {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_factorial(long long n) {
  if (n < 0) return kNegInf;
  return std::lgamma(static_cast<double>(n) + 1.0);
}

inline double log_binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) return kNegInf;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// Product of all odd naturals <= n (1 for n < 1). For even n this counts the
// perfect matchings on n points. Uses m!! = m! / (2^((m-1)/2) ((m-1)/2)!)
// for the largest odd m <= n.
inline double log_odd_product(long long n) {
  const long long m = (n % 2 == 0) ? n - 1 : n;
  if (m < 1) return 0.0;
  const long long h = (m - 1) / 2;
  return log_factorial(m) - static_cast<double>(h) * std::log(2.0) - log_factorial(h);
}

// Standard wheel: a uniform perfect matching on all 12n checkers.
inline double prob_cut_standard(int n, int u, int c) {
  require(n >= 1, "prob_cut_standard: n must be >= 1");
  require(0 <= c && c <= u && u <= 12 * n,
          "prob_cut_standard: need 0 <= c <= u <= 12n");
  if ((u - c) % 2 != 0) return kNegInf;
  const long long rest = 12LL * n - u;
  if (c > rest) return kNegInf;
  return log_binomial(u, c) + log_binomial(rest, c) + log_factorial(c) +
         log_odd_product(u - c) + log_odd_product(rest - c) - log_odd_product(12LL * n);
}

// Bipartite matching between the two checker halves, S holding u/2 checkers
// on each side.
inline double prob_cut_balanced(int n, int u, int c) {
  require(n >= 1, "prob_cut_balanced: n must be >= 1");
  require(u >= 0 && c >= 0, "prob_cut_balanced: u and c must be non-negative");
  require(u % 2 == 0 && c % 2 == 0, "prob_cut_balanced: u and c must be even");
  require(u / 2 <= 6 * n, "prob_cut_balanced: need u/2 <= 6n");
  if (c > u) return kNegInf;
  const long long hu = u / 2;
  const long long hc = c / 2;
  const long long hr = (12LL * n - u) / 2;
  if (hc > hr) return kNegInf;
  const double b1 = log_binomial(hu, hc);
  const double b2 = log_binomial(hr, hc);
  const double f = log_factorial(hc);
  return b1 + b1 + b2 + b2 + f + f + log_factorial((u - c) / 2) +
         log_factorial((12LL * n - u - c) / 2) - log_factorial(6LL * n);
}

namespace detail {

// P''(u, c, k) without range checks; any vanishing term gives -infinity.
inline double log_unbalanced_raw(int n, int u, int c, int k) {
  const long long hu = u / 2;
  const long long hc = c / 2;
  const long long hr = (12LL * n - u) / 2;
  if (hc - k < 0 || hu - k < 0 || hr - k < 0 || u < c || 12LL * n - u - c < 0) return kNegInf;
  return log_binomial(hu + k, hc + k) + log_binomial(hu - k, hc - k) +
         log_binomial(hr - k, hc - k) + log_binomial(hr + k, hc + k) +
         log_factorial(hc + k) + log_factorial(hc - k) + log_factorial((u - c) / 2) +
         log_factorial((12LL * n - u - c) / 2) - log_factorial(6LL * n);
}

}  // namespace detail

// S holds u/2 + k checkers on one side and u/2 - k on the other.
inline double prob_cut_unbalanced(int n, int u, int c, int k) {
  require(n >= 1, "prob_cut_unbalanced: n must be >= 1");
  require(u >= 0 && c >= 0 && k >= 0, "prob_cut_unbalanced: arguments must be non-negative");
  require(u % 2 == 0 && c % 2 == 0, "prob_cut_unbalanced: u and c must be even");
  require(u / 2 <= 6 * n, "prob_cut_unbalanced: need u/2 <= 6n");
  require(2 * k <= c, "prob_cut_unbalanced: need k <= c/2");
  return detail::log_unbalanced_raw(n, u, c, k);
}

struct RatioVerdict {
  bool decreasing = false;     // P''(u,c,k+1) / P''(u,c,k) < 1
  Rational closed_form;        // exact value of the three-factor product
  double direct = 0.0;         // exp of the log-space difference
  bool sufficient_condition = false;  // the exponential-bound inequality
};

// Checks that P'' strictly decreases from k to k+1 in the range u <= 6n,
// 6c <= u, k <= c/2, using the log formulas and the exact three-factor
// closed form. Outside that range the claim is not made and the call fails.
inline RatioVerdict ratio_check(int n, int u, int c, int k) {
  require(n >= 1, "ratio_check: n must be >= 1");
  require(u >= 0 && c >= 0 && k >= 0, "ratio_check: arguments must be non-negative");
  require(u % 2 == 0 && c % 2 == 0, "ratio_check: u and c must be even");
  require(u <= 6 * n, "ratio_check: out of range, need u <= 6n");
  require(6 * c <= u, "ratio_check: out of range, need c <= u/6");
  require(2 * k <= c, "ratio_check: out of range, need k <= c/2");

  const std::int64_t hu = u / 2;
  const std::int64_t hc = c / 2;
  const std::int64_t hr = (12LL * n - u) / 2;
  RatioVerdict v;
  if (hc == k) {
    // The c/2 - k - 1 binomials vanish: P''(u,c,k+1) = 0.
    v.closed_form = Rational(0);
  } else {
    v.closed_form = Rational(hc - k, hc + k + 1) * Rational(hu + k + 1, hu - k) *
                    Rational(hr + k + 1, hr - k);
  }
  const double lo = detail::log_unbalanced_raw(n, u, c, k);
  const double hi = detail::log_unbalanced_raw(n, u, c, k + 1);
  v.direct = (hi == kNegInf) ? 0.0 : std::exp(hi - lo);

  const bool closed = v.closed_form < Rational(1);
  const bool direct = v.direct < 1.0;
  ensure(closed == direct, "ratio_check: closed form and direct evaluation disagree at n=" +
                               std::to_string(n) + " u=" + std::to_string(u) +
                               " c=" + std::to_string(c) + " k=" + std::to_string(k));
  v.decreasing = closed;

  if (hu - k > 0) {
    const Rational t(2 * k + 1);
    v.sufficient_condition =
        t / Rational(hc + k + 1) > t / Rational(hu - k) + t / Rational(hr - k);
  }
  return v;
}

}  // namespace forge::biwheel

#endif  // FORGE_WHEEL_PROBABILITY_HPP_
