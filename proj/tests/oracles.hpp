// Test-only reference implementations, kept independent of the library's
// algorithms so they can serve as oracles.
#pragma once

#include <map>
#include <set>
#include <vector>

#include "specsynth/alphabet.hpp"
#include "specsynth/ltl.hpp"
#include "specsynth/product.hpp"
#include "specsynth/rng.hpp"

namespace specsynth::testing {

// Top-down LTL evaluation on a lasso: temporal operators are decided by
// walking the successor chain for |positions| steps (enough to cover every
// reachable position once), the opposite mechanism to the library's
// bottom-up fixpoint iteration.
class NaiveEvaluator {
public:
  NaiveEvaluator(const Lasso& w, const Alphabet& ap) : w_(w), ap_(ap) {}

  bool sat(const Formula& f, std::size_t pos) {
    auto key = std::make_pair(&f, pos);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = false;
    switch (f.op) {
      case LtlOp::True: v = true; break;
      case LtlOp::Atom: v = (w_.at(pos) >> ap_.index_of(f.atom)) & 1; break;
      case LtlOp::Not: v = !sat(*f.lhs, pos); break;
      case LtlOp::And: v = sat(*f.lhs, pos) && sat(*f.rhs, pos); break;
      case LtlOp::Or: v = sat(*f.lhs, pos) || sat(*f.rhs, pos); break;
      case LtlOp::Next: v = sat(*f.lhs, w_.succ(pos)); break;
      case LtlOp::Until: {
        std::size_t i = pos;
        for (std::size_t steps = 0; steps <= w_.positions(); ++steps) {
          if (sat(*f.rhs, i)) { v = true; break; }
          if (!sat(*f.lhs, i)) { v = false; break; }
          i = w_.succ(i);
        }
        break;
      }
      case LtlOp::Eventually: {
        std::size_t i = pos;
        for (std::size_t steps = 0; steps <= w_.positions(); ++steps) {
          if (sat(*f.lhs, i)) { v = true; break; }
          i = w_.succ(i);
        }
        break;
      }
      case LtlOp::Always: {
        v = true;
        std::size_t i = pos;
        for (std::size_t steps = 0; steps <= w_.positions(); ++steps) {
          if (!sat(*f.lhs, i)) { v = false; break; }
          i = w_.succ(i);
        }
        break;
      }
    }
    memo_.emplace(key, v);
    return v;
  }

private:
  const Lasso& w_;
  const Alphabet& ap_;
  std::map<std::pair<const Formula*, std::size_t>, bool> memo_;
};

inline bool naive_holds(const Formula& f, const Lasso& w, const Alphabet& ap) {
  return NaiveEvaluator(w, ap).sat(f, 0);
}

// The same word with the loop unrolled k extra times; used to confirm the
// fixpoint is insensitive to unrolling.
inline Lasso unrolled(const Lasso& w, int k) {
  Lasso out;
  out.prefix = w.prefix;
  for (int i = 0; i < k; ++i)
    out.prefix.insert(out.prefix.end(), w.period.begin(), w.period.end());
  out.period = w.period;
  return out;
}

inline Lasso random_lasso(Rng& rng, const Alphabet& ap, std::size_t max_len = 6) {
  Lasso w;
  const Label top = ap.full_mask();
  const std::size_t prefix_len = rng.below(max_len + 1);
  const std::size_t period_len = 1 + rng.below(max_len);
  for (std::size_t i = 0; i < prefix_len; ++i)
    w.prefix.push_back(static_cast<Label>(rng.below(std::uint64_t(top) + 1)));
  for (std::size_t i = 0; i < period_len; ++i)
    w.period.push_back(static_cast<Label>(rng.below(std::uint64_t(top) + 1)));
  return w;
}

inline FormulaPtr random_formula(Rng& rng, const std::vector<std::string>& atoms, int depth) {
  if (depth <= 0 || rng.below(5) == 0) {
    if (rng.below(8) == 0) return Formula::make_true();
    return Formula::make_atom(atoms[rng.below(atoms.size())]);
  }
  switch (rng.below(8)) {
    case 0: return Formula::make_not(random_formula(rng, atoms, depth - 1));
    case 1: return Formula::make_and(random_formula(rng, atoms, depth - 1),
                                     random_formula(rng, atoms, depth - 1));
    case 2: return Formula::make_or(random_formula(rng, atoms, depth - 1),
                                    random_formula(rng, atoms, depth - 1));
    case 3: return Formula::make_next(random_formula(rng, atoms, depth - 1));
    case 4: return Formula::make_until(random_formula(rng, atoms, depth - 1),
                                       random_formula(rng, atoms, depth - 1));
    case 5: return Formula::make_eventually(random_formula(rng, atoms, depth - 1));
    case 6: return Formula::make_always(random_formula(rng, atoms, depth - 1));
    default: return Formula::make_atom(atoms[rng.below(atoms.size())]);
  }
}

// Brute-force maximal end components by subset enumeration; usable up to
// ~16 product states.
inline std::vector<std::set<std::uint32_t>> brute_force_mecs(const ExplicitProduct& p) {
  const std::uint32_t n = static_cast<std::uint32_t>(p.size());
  std::vector<std::set<std::uint32_t>> ecs;

  for (std::uint64_t bits = 1; bits < (std::uint64_t(1) << n); ++bits) {
    std::set<std::uint32_t> states;
    for (std::uint32_t s = 0; s < n; ++s)
      if (bits & (std::uint64_t(1) << s)) states.insert(s);

    // Every member needs an action fully inside; the restricted graph must be
    // strongly connected.
    std::vector<std::vector<std::uint32_t>> adj;
    std::vector<std::uint32_t> members(states.begin(), states.end());
    bool ok = true;
    for (std::uint32_t s : members) {
      std::vector<std::uint32_t> succ;
      bool has_inner_action = false;
      for (const auto& act : p.actions[s]) {
        bool inside = true;
        for (const auto& [t, pr] : act.succ)
          if (pr > 0 && !states.count(t)) inside = false;
        if (inside) {
          has_inner_action = true;
          for (const auto& [t, pr] : act.succ)
            if (pr > 0) succ.push_back(t);
        }
      }
      if (!has_inner_action) { ok = false; break; }
      adj.push_back(std::move(succ));
    }
    if (!ok) continue;

    // Strong connectivity by double reachability from members[0].
    auto reach = [&](bool reverse) {
      std::set<std::uint32_t> seen{members[0]};
      std::vector<std::uint32_t> stack{members[0]};
      while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        for (std::size_t i = 0; i < members.size(); ++i) {
          for (std::uint32_t t : adj[i]) {
            std::uint32_t a = members[i], b = t;
            if (reverse) std::swap(a, b);
            if (a == v && states.count(b) && !seen.count(b)) {
              seen.insert(b);
              stack.push_back(b);
            }
          }
        }
      }
      return seen;
    };
    if (reach(false) != states || reach(true) != states) continue;
    ecs.push_back(states);
  }

  // Keep only maximal end components.
  std::vector<std::set<std::uint32_t>> mecs;
  for (const auto& ec : ecs) {
    bool maximal = true;
    for (const auto& other : ecs)
      if (other != ec && std::includes(other.begin(), other.end(), ec.begin(), ec.end()))
        maximal = false;
    if (maximal) mecs.push_back(ec);
  }
  return mecs;
}

}  // namespace specsynth::testing
