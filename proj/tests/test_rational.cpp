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

#include "forge/rational.hpp"

namespace forge {
namespace {

TEST(Rational, NormalizesSignAndGcd) {
  const Rational r(6, -4);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(Rational(4, 2).str(), "2");
}

TEST(Rational, Arithmetic) {
  EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
  EXPECT_EQ(Rational(1, 2) - Rational(3, 4), Rational(-1, 4));
  EXPECT_EQ(Rational(2, 3) * Rational(9, 4), Rational(3, 2));
  EXPECT_EQ(Rational(1, 8) / Rational(1, 4), Rational(1, 2));
  EXPECT_LT(Rational(61), Rational(123, 2));
}

TEST(Rational, Parse) {
  EXPECT_EQ(Rational::parse("1/8"), Rational(1, 8));
  EXPECT_EQ(Rational::parse("-7"), Rational(-7));
  EXPECT_EQ(Rational::parse("1.5"), Rational(3, 2));
  EXPECT_EQ(Rational::parse("0.25"), Rational(1, 4));
  EXPECT_THROW(Rational::parse("1/0"), InputError);
  EXPECT_THROW(Rational::parse("abc"), InputError);
  EXPECT_THROW(Rational::parse(""), InputError);
}

TEST(Rational, ClaimedRatios) {
  EXPECT_EQ(Rational(123, 2) / Rational(61), Rational(123, 122));
  EXPECT_EQ(Rational(75, 2) / Rational(37), Rational(75, 74));
}

TEST(Rational, DivisionByZeroThrows) { EXPECT_THROW(Rational(1) / Rational(0), std::domain_error); }

}  // namespace
}  // namespace forge
