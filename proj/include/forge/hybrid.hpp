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
#ifndef FORGE_HYBRID_HPP_
#define FORGE_HYBRID_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/biwheel.hpp"
#include "forge/e3lin2.hpp"
#include "forge/errors.hpp"
#include "forge/random.hpp"

namespace forge::hybrid {

using biwheel::BiWheel;
using biwheel::Side;

struct Variable {
  int source_var = 0;  // original variable i
  Side side = Side::U;
  int ring_pos = 0;    // 1..7n
  bool is_contact = false;
};

enum class Kind { Cycle, Matching, Size3 };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Cycle: return "cycle";
    case Kind::Matching: return "matching";
    case Kind::Size3: return "size3";
  }
  return "?";
}

struct Equation {
  Kind kind = Kind::Cycle;
  std::array<int, 3> vars{-1, -1, -1};  // hybrid variable indices; arity 2 leaves vars[2] = -1
  int rhs = 0;

  int arity() const { return kind == Kind::Size3 ? 3 : 2; }
};

using Assignment = std::vector<std::uint8_t>;

struct Counts {
  int total = 0;
  int cycle = 0;
  int matching = 0;
  int size3 = 0;

  friend bool operator==(const Counts&, const Counts&) = default;
};

// One (x, y, z) contact triple per size-3 equation, each contact given as
// (source variable, side, ring position).
struct ContactRef {
  int source_var = 0;
  Side side = Side::U;
  int ring_pos = 0;
};

class Instance {
 public:
  Instance() = default;

  // Assembles the equation system from the wheels and the size-3 contact
  // triples: per wheel, u-ring cycle equations, n-ring cycle equations, then
  // matching equations by u position; size-3 equations come last.
  Instance(int b, std::map<int, BiWheel> wheels,
           const std::vector<std::array<ContactRef, 3>>& triples)
      : b_(b), wheels_(std::move(wheels)) {
    require(b_ == 0 || b_ == 1, "hybrid: b must be 0 or 1");
    for (const auto& [i, w] : wheels_) {
      require(i >= 1, "hybrid: wheel variable index must be >= 1");
      base_[i] = static_cast<int>(vars_.size());
      for (Side s : {Side::U, Side::N})
        for (int p = 1; p <= w.ring_size(); ++p)
          vars_.push_back(Variable{i, s, p, BiWheel::is_contact(p)});
    }
    for (const auto& [i, w] : wheels_) {
      for (Side s : {Side::U, Side::N})
        for (int p = 1; p <= w.ring_size(); ++p)
          eqs_.push_back(Equation{Kind::Cycle, {index(i, s, p), index(i, s, w.next_pos(p)), -1}, 0});
      for (const auto& [pu, pn] : w.matching())
        eqs_.push_back(Equation{Kind::Matching, {index(i, Side::U, pu), index(i, Side::N, pn), -1}, 1});
    }
    std::vector<int> contact_uses(vars_.size(), 0);
    for (const auto& t : triples) {
      Equation eq{Kind::Size3, {}, b_};
      for (int k = 0; k < 3; ++k) {
        require(wheels_.count(t[k].source_var) != 0,
                "hybrid: size-3 equation references variable without a wheel");
        require(BiWheel::is_contact(t[k].ring_pos), "hybrid: size-3 equation must use contacts");
        eq.vars[k] = index(t[k].source_var, t[k].side, t[k].ring_pos);
        ++contact_uses[eq.vars[k]];
      }
      require(t[0].source_var != t[1].source_var && t[0].source_var != t[2].source_var &&
                  t[1].source_var != t[2].source_var,
              "hybrid: size-3 equation uses a wheel twice");
      eqs_.push_back(eq);
      ++m_;
    }
    for (std::size_t v = 0; v < vars_.size(); ++v)
      if (vars_[v].is_contact)
        require(contact_uses[v] == 1, "hybrid: contact " + var_id(static_cast<int>(v)) +
                                          " must appear in exactly one size-3 equation");
    incident_.assign(vars_.size(), {});
    for (std::size_t e = 0; e < eqs_.size(); ++e)
      for (int k = 0; k < eqs_[e].arity(); ++k) incident_[eqs_[e].vars[k]].push_back(static_cast<int>(e));
  }

  int b() const { return b_; }
  int m() const { return m_; }
  const std::map<int, BiWheel>& wheels() const { return wheels_; }
  const BiWheel& wheel(int source_var) const { return wheels_.at(source_var); }
  int num_wheels() const { return static_cast<int>(wheels_.size()); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Equation>& equations() const { return eqs_; }
  std::size_t num_vars() const { return vars_.size(); }
  const std::vector<int>& incident(int var) const { return incident_.at(var); }

  int index(int source_var, Side side, int pos) const {
    const auto it = base_.find(source_var);
    require(it != base_.end(), "hybrid: no wheel for variable x" + std::to_string(source_var));
    const BiWheel& w = wheels_.at(source_var);
    require(pos >= 1 && pos <= w.ring_size(), "hybrid: ring position out of range");
    return it->second + w.vertex(side, pos);
  }

  // First variable index of a wheel; its 14n variables are contiguous and
  // ordered like BiWheel::vertex.
  int wheel_base(int source_var) const { return base_.at(source_var); }

  std::string var_id(int v) const {
    const Variable& x = vars_.at(v);
    return "x." + std::to_string(x.source_var) + "." + biwheel::side_char(x.side) + "." +
           std::to_string(x.ring_pos);
  }

  // Inverse of var_id.
  int parse_var_id(std::string_view id) const;

 private:
  int b_ = 0;
  int m_ = 0;
  std::map<int, BiWheel> wheels_;
  std::map<int, int> base_;
  std::vector<Variable> vars_;
  std::vector<Equation> eqs_;
  std::vector<std::vector<int>> incident_;
};

// Splits "x.<i>.<u|n>.<pos>" without checking it against any wheel.
inline ContactRef parse_var_ref(std::string_view id) {
  auto fail = [&]() { return InputError("bad hybrid variable id '" + std::string(id) + "'"); };
  if (id.size() < 7 || id.substr(0, 2) != "x.") throw fail();
  const auto d1 = id.find('.', 2);
  if (d1 == std::string_view::npos || d1 + 3 >= id.size() || id[d1 + 2] != '.') throw fail();
  const char sc = id[d1 + 1];
  if (sc != 'u' && sc != 'n') throw fail();
  auto to_int = [&](std::string_view s) {
    if (s.empty() || s.size() > 9) throw fail();
    int v = 0;
    for (char ch : s) {
      if (ch < '0' || ch > '9') throw fail();
      v = v * 10 + (ch - '0');
    }
    return v;
  };
  return ContactRef{to_int(id.substr(2, d1 - 2)), sc == 'u' ? Side::U : Side::N, to_int(id.substr(d1 + 3))};
}

inline int Instance::parse_var_id(std::string_view id) const {
  const ContactRef r = parse_var_ref(id);
  return index(r.source_var, r.side, r.ring_pos);
}

struct Options {
  // Wheels with at most this many contacts are checked exactly (min-cut
  // route) and redrawn until they are amplifiers.
  int verify_max_contacts = 12;
  int max_redraws = 64;
};

// Replaces every original variable by a bi-wheel with d(i)/2 contacts per
// ring. The j-th unnegated appearance of x_i becomes the u-ring contact at
// position 7j, the j-th negated appearance the n-ring contact at 7j.
inline Instance build(const e3lin2::Instance& inst, int b, std::uint64_t seed,
                      const Options& opts = {}) {
  require(b == 0 || b == 1, "build_hybrid: b must be 0 or 1");
  require(inst.is_balanced(),
          "build_hybrid: instance is not balanced (run balance_negations first)");
  for (std::size_t k = 0; k < inst.size(); ++k) {
    const auto& eq = inst.equations()[k];
    require(!eq.has_repeated_var(),
            "build_hybrid: equation " + std::to_string(k + 1) + " repeats a variable");
    require(eq.rhs == b, "build_hybrid: equation " + std::to_string(k + 1) +
                             " has rhs " + std::to_string(eq.rhs) + ", expected b = " +
                             std::to_string(b));
  }

  std::map<int, BiWheel> wheels;
  for (int i = 1; i <= inst.num_vars(); ++i) {
    const int d = inst.occurrences(i);
    if (d == 0) continue;
    const int n = d / 2;
    const std::uint64_t wheel_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    BiWheel w = biwheel::build(n, wheel_seed);
    if (2 * n <= opts.verify_max_contacts) {
      int attempt = 0;
      while (!biwheel::check_amplifier_mincut(w).verified) {
        ensure(++attempt <= opts.max_redraws,
               "build_hybrid: no amplifier found for x" + std::to_string(i));
        w = biwheel::build(n, derive_seed(wheel_seed, static_cast<std::uint64_t>(attempt)));
      }
    }
    wheels.emplace(i, std::move(w));
  }

  std::vector<int> next_u(static_cast<std::size_t>(inst.num_vars()) + 1, 0);
  std::vector<int> next_n(static_cast<std::size_t>(inst.num_vars()) + 1, 0);
  std::vector<std::array<ContactRef, 3>> triples;
  triples.reserve(inst.size());
  for (const auto& eq : inst.equations()) {
    std::array<ContactRef, 3> t{};
    for (int k = 0; k < 3; ++k) {
      const auto& lit = eq.lits[k];
      const int j = ++(lit.negated ? next_n : next_u)[lit.var];
      t[k] = ContactRef{lit.var, lit.negated ? Side::N : Side::U, 7 * j};
    }
    triples.push_back(t);
  }
  return Instance(b, std::move(wheels), triples);
}

inline Counts counts(const Instance& h) {
  Counts c;
  for (const auto& eq : h.equations()) {
    ++c.total;
    switch (eq.kind) {
      case Kind::Cycle: ++c.cycle; break;
      case Kind::Matching: ++c.matching; break;
      case Kind::Size3: ++c.size3; break;
    }
  }
  return c;
}

inline bool satisfied(const Equation& eq, const Assignment& a) {
  int x = 0;
  for (int k = 0; k < eq.arity(); ++k) x ^= a[eq.vars[k]] & 1;
  return x == eq.rhs;
}

inline int eval(const Instance& h, const Assignment& a) {
  require(a.size() == h.num_vars(), "eval_hybrid: assignment has " + std::to_string(a.size()) +
                                        " entries, instance has " + std::to_string(h.num_vars()) +
                                        " variables");
  int unsat = 0;
  for (const auto& eq : h.equations())
    if (!satisfied(eq, a)) ++unsat;
  return unsat;
}

// Value of the u-ring of a consistent wheel, or -1 when the wheel is not
// consistent (u-ring all v, n-ring all 1 - v).
inline int wheel_value(const Instance& h, const Assignment& a, int source_var) {
  const int base = h.wheel_base(source_var);
  const int nv = h.wheel(source_var).num_vertices();
  const int ring = nv / 2;
  const int v = a[base] & 1;
  for (int k = 0; k < nv; ++k)
    if ((a[base + k] & 1) != (k < ring ? v : 1 - v)) return -1;
  return v;
}

inline bool is_consistent(const Instance& h, const Assignment& a) {
  for (const auto& [i, w] : h.wheels())
    if (wheel_value(h, a, i) < 0) return false;
  return true;
}

// phi holds x_1.. of the original instance; variables without a wheel are
// ignored.
inline Assignment extend_consistent(const Instance& h, const e3lin2::Assignment& phi) {
  Assignment a(h.num_vars(), 0);
  for (const auto& [i, w] : h.wheels()) {
    require(static_cast<std::size_t>(i) <= phi.size(),
            "extend_consistent: assignment does not cover x" + std::to_string(i));
    const int base = h.wheel_base(i);
    const int v = phi[i - 1] & 1;
    for (int k = 0; k < w.num_vertices(); ++k) a[base + k] = k < w.ring_size() ? v : 1 - v;
  }
  return a;
}

// Reads the original-variable assignment off a consistent hybrid assignment.
inline e3lin2::Assignment project(const Instance& h, const Assignment& a, int num_vars) {
  e3lin2::Assignment phi(static_cast<std::size_t>(num_vars), 0);
  for (const auto& [i, w] : h.wheels()) {
    const int v = wheel_value(h, a, i);
    require(v >= 0, "project: wheel of x" + std::to_string(i) + " is not consistent");
    if (i <= num_vars) phi[i - 1] = static_cast<std::uint8_t>(v);
  }
  return phi;
}

// Per wheel in variable order: a consistent wheel is kept; otherwise both
// consistent completions are scored against the current values of every
// other variable and the one leaving fewer unsatisfied equations wins (ties:
// fewer changed values, then u-ring = 1). The final unsat count is checked
// against the input.
inline Assignment round_consistent(const Instance& h, const Assignment& a) {
  const int before = eval(h, a);
  Assignment out = a;
  for (const auto& [i, w] : h.wheels()) {
    if (wheel_value(h, out, i) >= 0) continue;
    const int base = h.wheel_base(i);
    const int nv = w.num_vertices();
    std::vector<int> local;
    for (int k = 0; k < nv; ++k)
      for (int e : h.incident(base + k)) local.push_back(e);
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());

    int best_unsat = -1;
    int best_changes = 0;
    int best_value = 1;
    for (int v : {1, 0}) {
      Assignment trial = out;
      int changes = 0;
      for (int k = 0; k < nv; ++k) {
        const std::uint8_t want = static_cast<std::uint8_t>(k < w.ring_size() ? v : 1 - v);
        if ((trial[base + k] & 1) != want) ++changes;
        trial[base + k] = want;
      }
      int unsat = 0;
      for (int e : local)
        if (!satisfied(h.equations()[e], trial)) ++unsat;
      if (best_unsat < 0 || unsat < best_unsat ||
          (unsat == best_unsat && changes < best_changes)) {
        best_unsat = unsat;
        best_changes = changes;
        best_value = v;
      }
    }
    for (int k = 0; k < nv; ++k)
      out[base + k] = static_cast<std::uint8_t>(k < w.ring_size() ? best_value : 1 - best_value);
  }
  ensure(eval(h, out) <= before, "round_consistent: rounding increased the unsatisfied count from " +
                                     std::to_string(before) + " to " + std::to_string(eval(h, out)));
  return out;
}

// Assigns the variables flagged in pending, one group at a time: every value
// combination of the group's pending variables is tried and the one
// satisfying the most equations incident to them wins (ties: fewer ones,
// then lower index bits). Unresolved pending variables elsewhere keep their
// current values while a group is scored.
inline void resolve_groups(const Instance& h, Assignment& a, std::vector<char>& pending,
                           const std::vector<std::vector<int>>& groups) {
  for (const auto& group : groups) {
    std::vector<int> free;
    for (int v : group)
      if (pending.at(v)) free.push_back(v);
    if (free.empty()) continue;
    ensure(free.size() <= 16, "resolve_groups: group too large");
    std::vector<int> local;
    for (int v : free)
      for (int e : h.incident(v)) local.push_back(e);
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
    int best_sat = -1;
    int best_ones = 0;
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << free.size()); ++mask) {
      for (std::size_t k = 0; k < free.size(); ++k) a[free[k]] = static_cast<std::uint8_t>((mask >> k) & 1);
      int sat = 0;
      for (int e : local)
        if (satisfied(h.equations()[e], a)) ++sat;
      const int ones = std::popcount(mask);
      if (sat > best_sat || (sat == best_sat && ones < best_ones)) {
        best_sat = sat;
        best_ones = ones;
        best_mask = mask;
      }
    }
    for (std::size_t k = 0; k < free.size(); ++k) {
      a[free[k]] = static_cast<std::uint8_t>((best_mask >> k) & 1);
      pending[free[k]] = 0;
    }
  }
}

}  // namespace forge::hybrid

#endif  // FORGE_HYBRID_HPP_
