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
#ifndef FORGE_E3LIN2_HPP_
#define FORGE_E3LIN2_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/errors.hpp"
#include "forge/random.hpp"

namespace forge::e3lin2 {

struct Literal {
  int var = 1;  // 1-based
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

// lits[0] xor lits[1] xor lits[2] = rhs
struct Equation {
  std::array<Literal, 3> lits{};
  int rhs = 0;

  bool has_repeated_var() const {
    return lits[0].var == lits[1].var || lits[0].var == lits[2].var ||
           lits[1].var == lits[2].var;
  }

  friend bool operator==(const Equation&, const Equation&) = default;
};

// Values of x_1..x_nu stored at indices 0..nu-1, each 0 or 1.
using Assignment = std::vector<std::uint8_t>;

class Instance {
 public:
  Instance() = default;
  Instance(int num_vars, std::vector<Equation> equations)
      : num_vars_(num_vars), equations_(std::move(equations)) {
    require(num_vars_ >= 0, "negative variable count");
    negated_.assign(static_cast<std::size_t>(num_vars_) + 1, 0);
    unnegated_.assign(static_cast<std::size_t>(num_vars_) + 1, 0);
    for (std::size_t k = 0; k < equations_.size(); ++k) {
      const Equation& eq = equations_[k];
      require(eq.rhs == 0 || eq.rhs == 1,
              "equation " + std::to_string(k + 1) + ": rhs must be 0 or 1");
      for (const Literal& lit : eq.lits) {
        require(lit.var >= 1 && lit.var <= num_vars_,
                "equation " + std::to_string(k + 1) + ": variable x" +
                    std::to_string(lit.var) + " out of range");
        (lit.negated ? negated_ : unnegated_)[lit.var]++;
      }
    }
  }

  int num_vars() const { return num_vars_; }
  const std::vector<Equation>& equations() const { return equations_; }
  std::size_t size() const { return equations_.size(); }
  bool empty() const { return equations_.empty(); }

  // d(i): appearances of x_i counted with multiplicity.
  int occurrences(int var) const { return negated(var) + unnegated(var); }
  int negated(int var) const { return negated_.at(static_cast<std::size_t>(var)); }
  int unnegated(int var) const { return unnegated_.at(static_cast<std::size_t>(var)); }

  bool is_balanced() const {
    for (int i = 1; i <= num_vars_; ++i)
      if (negated(i) != unnegated(i)) return false;
    return true;
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.num_vars_ == b.num_vars_ && a.equations_ == b.equations_;
  }

 private:
  int num_vars_ = 0;
  std::vector<Equation> equations_;
  std::vector<int> negated_{0};
  std::vector<int> unnegated_{0};
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline Literal parse_literal(std::string_view tok, int line_no) {
  auto fail = [&]() -> InputError {
    return InputError("line " + std::to_string(line_no) + ": bad literal '" +
                      std::string(tok) + "'");
  };
  Literal lit;
  if (!tok.empty() && tok[0] == '-') {
    lit.negated = true;
    tok.remove_prefix(1);
  }
  if (tok.size() < 2 || tok[0] != 'x') throw fail();
  long long v = 0;
  for (std::size_t i = 1; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9') throw fail();
    v = v * 10 + (tok[i] - '0');
    if (v > 1'000'000'000) throw fail();
  }
  if (v < 1) throw fail();
  lit.var = static_cast<int>(v);
  return lit;
}

}  // namespace detail

// One equation per line: "[-]x<k> [-]x<k> [-]x<k> = <0|1>". '#' starts a
// comment, blank lines are skipped. nu is the largest variable index seen.
inline Instance parse(std::string_view text) {
  std::vector<Equation> eqs;
  int max_var = 0;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const auto toks = detail::split_ws(line);
    if (toks.empty()) continue;

    const std::string where = "line " + std::to_string(line_no) + ": ";
    std::size_t eq_at = toks.size();
    for (std::size_t i = 0; i < toks.size(); ++i)
      if (toks[i] == "=") eq_at = i;
    if (eq_at == toks.size()) throw InputError(where + "missing '='");
    if (eq_at != 3)
      throw InputError(where + "expected exactly 3 literals, got " + std::to_string(eq_at));
    if (toks.size() != 5) throw InputError(where + "expected a single rhs after '='");
    if (toks[4] != "0" && toks[4] != "1")
      throw InputError(where + "rhs must be 0 or 1, got '" + std::string(toks[4]) + "'");

    Equation eq;
    for (std::size_t i = 0; i < 3; ++i) {
      eq.lits[i] = detail::parse_literal(toks[i], line_no);
      max_var = std::max(max_var, eq.lits[i].var);
    }
    eq.rhs = toks[4] == "1" ? 1 : 0;
    eqs.push_back(eq);
  }
  return Instance(max_var, std::move(eqs));
}

inline std::string format(const Instance& inst) {
  std::ostringstream os;
  for (const Equation& eq : inst.equations()) {
    for (const Literal& lit : eq.lits) os << (lit.negated ? "-x" : "x") << lit.var << ' ';
    os << "= " << eq.rhs << '\n';
  }
  return os.str();
}

// Number of equations whose literal xor differs from the rhs.
inline int eval(const Instance& inst, const Assignment& a) {
  require(a.size() == static_cast<std::size_t>(inst.num_vars()),
          "assignment has " + std::to_string(a.size()) + " values, instance has " +
              std::to_string(inst.num_vars()) + " variables");
  int unsat = 0;
  for (const Equation& eq : inst.equations()) {
    int x = 0;
    for (const Literal& lit : eq.lits) x ^= (a[lit.var - 1] & 1) ^ (lit.negated ? 1 : 0);
    if (x != eq.rhs) ++unsat;
  }
  return unsat;
}

struct Planted {
  Instance instance;
  Assignment assignment;
  std::vector<int> flipped;  // indices of equations the planted assignment violates
};

// Random instance with three distinct variables per equation whose rhs is
// chosen so the planted assignment violates exactly the flipped equations.
inline Planted generate_planted(int num_vars, int num_eqs, int flips, std::uint64_t seed) {
  require(num_vars >= 3, "generate_planted: need at least 3 variables");
  require(num_eqs >= 0, "generate_planted: negative equation count");
  require(flips >= 0 && flips <= num_eqs, "generate_planted: flips must be in [0, num_eqs]");
  Rng rng(derive_seed(seed, 0xe3));
  Planted out;
  out.assignment.resize(static_cast<std::size_t>(num_vars));
  for (auto& v : out.assignment) v = rng.coin() ? 1 : 0;

  std::vector<Equation> eqs;
  eqs.reserve(static_cast<std::size_t>(num_eqs));
  for (int k = 0; k < num_eqs; ++k) {
    Equation eq;
    std::array<int, 3> vars{};
    for (int i = 0; i < 3; ++i) {
      int v;
      do {
        v = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(num_vars)));
      } while ((i > 0 && v == vars[0]) || (i > 1 && v == vars[1]));
      vars[i] = v;
    }
    int x = 0;
    for (int i = 0; i < 3; ++i) {
      eq.lits[i] = Literal{vars[i], rng.coin()};
      x ^= out.assignment[vars[i] - 1] ^ (eq.lits[i].negated ? 1 : 0);
    }
    eq.rhs = x;
    eqs.push_back(eq);
  }

  std::vector<int> order(static_cast<std::size_t>(num_eqs));
  for (int k = 0; k < num_eqs; ++k) order[k] = k;
  rng.shuffle(order);
  order.resize(static_cast<std::size_t>(flips));
  std::sort(order.begin(), order.end());
  for (int k : order) eqs[k].rhs ^= 1;
  out.flipped = order;
  out.instance = Instance(num_vars, std::move(eqs));
  return out;
}

// Rewrites every equation to rhs b by negating its first literal where
// needed, then emits it together with the three copies that negate each pair
// of literals. Each copy is equivalent to the original, and every variable
// ends up negated exactly as often as unnegated.
inline Instance balance_negations(const Instance& inst, int b) {
  require(b == 0 || b == 1, "balance_negations: b must be 0 or 1");
  std::vector<Equation> out;
  out.reserve(inst.size() * 4);
  static constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (Equation eq : inst.equations()) {
    if (eq.rhs != b) {
      eq.lits[0].negated = !eq.lits[0].negated;
      eq.rhs = b;
    }
    out.push_back(eq);
    for (const auto& pair : kPairs) {
      Equation copy = eq;
      copy.lits[pair[0]].negated = !copy.lits[pair[0]].negated;
      copy.lits[pair[1]].negated = !copy.lits[pair[1]].negated;
      out.push_back(copy);
    }
  }
  return Instance(inst.num_vars(), std::move(out));
}

inline Instance pad_repeat(const Instance& inst, int reps) {
  require(reps >= 1, "pad_repeat: reps must be at least 1");
  std::vector<Equation> out;
  out.reserve(inst.size() * static_cast<std::size_t>(reps));
  for (const Equation& eq : inst.equations())
    for (int r = 0; r < reps; ++r) out.push_back(eq);
  return Instance(inst.num_vars(), std::move(out));
}

struct Optimum {
  Assignment assignment;
  int unsat = 0;
};

inline constexpr int kBruteForceMaxVars = 24;

// Exhaustive minimum of eval over all 2^nu assignments. The first optimum in
// lexicographic order of (x_1, ..., x_nu) is returned.
inline Optimum brute_opt(const Instance& inst) {
  const int nu = inst.num_vars();
  if (nu > kBruteForceMaxVars)
    throw SizeGuardError("brute_opt: " + std::to_string(nu) + " variables exceeds limit " +
                         std::to_string(kBruteForceMaxVars));
  // x_1 is the most significant bit so numeric order is lexicographic order.
  struct Packed {
    std::uint32_t mask;
    int parity;
  };
  std::vector<Packed> packed;
  packed.reserve(inst.size());
  for (const Equation& eq : inst.equations()) {
    Packed p{0, eq.rhs};
    for (const Literal& lit : eq.lits) {
      p.mask ^= std::uint32_t{1} << (nu - lit.var);
      if (lit.negated) p.parity ^= 1;
    }
    packed.push_back(p);
  }
  const std::uint64_t total = std::uint64_t{1} << nu;
  int best = static_cast<int>(inst.size()) + 1;
  std::uint32_t best_mask = 0;
  for (std::uint64_t m = 0; m < total; ++m) {
    const auto mask = static_cast<std::uint32_t>(m);
    int unsat = 0;
    for (const Packed& p : packed) {
      if ((std::popcount(mask & p.mask) & 1) != p.parity && ++unsat >= best) break;
    }
    if (unsat < best) {
      best = unsat;
      best_mask = mask;
      if (best == 0) break;
    }
  }
  Optimum opt;
  opt.unsat = inst.empty() ? 0 : best;
  opt.assignment.resize(static_cast<std::size_t>(nu));
  for (int v = 1; v <= nu; ++v) opt.assignment[v - 1] = (best_mask >> (nu - v)) & 1;
  return opt;
}

}  // namespace forge::e3lin2

#endif  // FORGE_E3LIN2_HPP_
