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
#ifndef FORGE_RATIONAL_HPP_
#define FORGE_RATIONAL_HPP_

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "forge/errors.hpp"

namespace forge {

// Exact rational number on 64-bit numerator/denominator. Intermediate
// products are formed in 128 bits; a result that does not fit after
// reduction throws std::overflow_error instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // "p/q", "p", or a finite decimal such as "1.5" or "-0.125".
  static Rational parse(std::string_view text);

  // Canonical form: "p" for integers, otherwise "p/q".
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rational operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const __int128 n = static_cast<__int128>(a.num_) * b.den_ +
                       static_cast<__int128>(b.num_) * a.den_;
    const __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    const __int128 n = static_cast<__int128>(a.num_) * b.den_ -
                       static_cast<__int128>(b.num_) * a.den_;
    const __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_,
                     static_cast<__int128>(a.den_) * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 kMax = INT64_MAX;
    if (n > kMax || n < -kMax || d > kMax) {
      throw std::overflow_error("Rational: value out of 64-bit range");
    }
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    if (r.num_ == 0) r.den_ = 1;
    return r;
  }

  void assign(std::int64_t num, std::int64_t den) { *this = from_wide(num, den); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational Rational::parse(std::string_view text) {
  auto bad = [&]() -> InputError {
    return InputError("not a rational number: '" + std::string(text) + "'");
  };
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) throw bad();
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw bad();
    __int128 v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw bad();
      v = v * 10 + (s[i] - '0');
      if (v > INT64_MAX) throw bad();
    }
    return static_cast<std::int64_t>(neg ? -v : v);
  };

  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw bad();

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::int64_t n = parse_int(text.substr(0, slash));
    const std::int64_t d = parse_int(text.substr(slash + 1));
    if (d == 0) throw bad();
    return Rational(n, d);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 18) throw bad();
    const bool neg = !whole.empty() && whole[0] == '-';
    const std::int64_t w =
        (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::int64_t f = parse_int(frac);
    if (f < 0) throw bad();
    const Rational mag = Rational(w < 0 ? -w : w) + Rational(f, scale);
    return neg ? -mag : mag;
  }
  return Rational(parse_int(text));
}

inline std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
  const __int128 l = static_cast<__int128>(a / std::gcd(a, b)) * b;
  if (l > INT64_MAX) throw std::overflow_error("lcm out of 64-bit range");
  return static_cast<std::int64_t>(l);
}

}  // namespace forge

#endif  // FORGE_RATIONAL_HPP_
