#include "specsynth/verifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <ostream>

#include <json.hpp>

#include "specsynth/errors.hpp"

namespace specsynth {

namespace {

struct SccResult {
  std::vector<std::uint32_t> comp;
  std::uint32_t count = 0;
};

// Iterative Tarjan on a successor callback over the node ids in `nodes`.
SccResult scc_decompose(const std::vector<std::uint32_t>& nodes, std::uint32_t n_total,
                        const std::function<void(std::uint32_t, std::vector<std::uint32_t>&)>& succ) {
  SccResult res;
  res.comp.assign(n_total, UINT32_MAX);
  std::vector<std::uint32_t> index(n_total, UINT32_MAX), low(n_total, 0);
  std::vector<bool> on_stack(n_total, false), in_scope(n_total, false);
  for (std::uint32_t v : nodes) in_scope[v] = true;
  std::vector<std::uint32_t> stack;
  std::uint32_t next_index = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t edge;
    std::vector<std::uint32_t> succ;
  };
  std::vector<Frame> call;

  for (std::uint32_t root : nodes) {
    if (index[root] != UINT32_MAX) continue;
    call.push_back({root, 0, {}});
    succ(root, call.back().succ);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < f.succ.size()) {
        std::uint32_t w = f.succ[f.edge++];
        if (!in_scope[w]) continue;
        if (index[w] == UINT32_MAX) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0, {}});
          succ(w, call.back().succ);
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        std::uint32_t v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        if (low[v] == index[v]) {
          while (true) {
            std::uint32_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            res.comp[w] = res.count;
            if (w == v) break;
          }
          ++res.count;
        }
      }
    }
  }
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------
// MEC decomposition: iterated SCC refinement with action pruning.
// ---------------------------------------------------------------------------

std::vector<Mec> mec_decomposition(const ExplicitProduct& p) {
  const auto n = static_cast<std::uint32_t>(p.size());

  // allowed[s] = action indices still admissible for s within its candidate.
  std::vector<std::vector<std::uint32_t>> allowed(n);
  for (std::uint32_t s = 0; s < n; ++s)
    for (std::uint32_t a = 0; a < p.actions[s].size(); ++a) allowed[s].push_back(a);

  std::deque<std::vector<std::uint32_t>> work;
  {
    std::vector<std::uint32_t> all(n);
    for (std::uint32_t s = 0; s < n; ++s) all[s] = s;
    work.push_back(std::move(all));
  }

  std::vector<Mec> out;
  std::vector<bool> member(n, false);

  while (!work.empty()) {
    std::vector<std::uint32_t> cand = std::move(work.front());
    work.pop_front();
    if (cand.empty()) continue;

    member.assign(n, false);
    for (std::uint32_t s : cand) member[s] = true;

    // Prune actions whose support leaves the candidate; drop states with no
    // action left, repeating until stable.
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::uint32_t> keep;
      keep.reserve(cand.size());
      for (std::uint32_t s : cand) {
        auto& acts = allowed[s];
        acts.erase(std::remove_if(acts.begin(), acts.end(),
                                  [&](std::uint32_t a) {
                                    for (const auto& [t, pr] : p.actions[s][a].succ)
                                      if (pr > 0 && !member[t]) return true;
                                    return false;
                                  }),
                   acts.end());
        if (acts.empty()) {
          member[s] = false;
          changed = true;
        } else {
          keep.push_back(s);
        }
      }
      cand = std::move(keep);
    }
    if (cand.empty()) continue;

    auto succ = [&](std::uint32_t s, std::vector<std::uint32_t>& outv) {
      for (std::uint32_t a : allowed[s])
        for (const auto& [t, pr] : p.actions[s][a].succ)
          if (pr > 0) outv.push_back(t);
    };
    SccResult scc = scc_decompose(cand, n, succ);

    // Group candidate states per component.
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> groups;
    for (std::uint32_t s : cand) groups[scc.comp[s]].push_back(s);

    if (groups.size() == 1) {
      // Single component closed under the allowed actions: it is an MEC if it
      // retains an internal move (a singleton needs a self-loop action).
      std::vector<std::uint32_t>& states = groups.begin()->second;
      std::sort(states.begin(), states.end());
      bool has_action = false;
      for (std::uint32_t s : states) has_action |= !allowed[s].empty();
      if (!has_action) continue;
      Mec mec;
      mec.states = states;
      for (std::uint32_t s : states) {
        mec.actions.push_back(allowed[s]);
        mec.accept_mask |= p.accept_mask[s];
      }
      out.push_back(std::move(mec));
    } else {
      for (auto& [comp, states] : groups) work.push_back(std::move(states));
    }
  }

  std::sort(out.begin(), out.end(),
            [](const Mec& a, const Mec& b) { return a.states.front() < b.states.front(); });
  return out;
}

std::vector<std::size_t> accepting_mecs(const ExplicitProduct& p, const std::vector<Mec>& mecs) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mecs.size(); ++i)
    if (mecs[i].accept_mask == p.full_accept_mask) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Reachability value iteration
// ---------------------------------------------------------------------------

ValueIterationResult max_satisfaction_probability(
    const ExplicitProduct& p, const VerifyOptions& options,
    const std::function<void(const std::vector<double>&)>& observer) {
  const auto n = static_cast<std::uint32_t>(p.size());
  const auto mecs = mec_decomposition(p);

  std::vector<bool> target(n, false);
  for (std::size_t i : accepting_mecs(p, mecs))
    for (std::uint32_t s : mecs[i].states) target[s] = true;

  ValueIterationResult res;
  res.values.assign(n, 0.0);
  for (std::uint32_t s = 0; s < n; ++s)
    if (target[s]) res.values[s] = 1.0;

  std::vector<double> next(n);
  for (res.sweeps = 0; res.sweeps < options.max_sweeps; ++res.sweeps) {
    double diff = 0.0;
    for (std::uint32_t s = 0; s < n; ++s) {
      if (target[s]) {
        next[s] = 1.0;
        continue;
      }
      double best = 0.0;
      for (const auto& act : p.actions[s]) {
        double v = 0.0;
        for (const auto& [t, pr] : act.succ) v += pr * res.values[t];
        best = std::max(best, v);
      }
      next[s] = best;
      diff = std::max(diff, std::abs(next[s] - res.values[s]));
    }
    res.values.swap(next);
    if (observer) observer(res.values);
    if (diff < options.tolerance) break;
  }

  res.policy.assign(n, 0);
  for (std::uint32_t s = 0; s < n; ++s) {
    double best = -1.0;
    for (std::uint32_t a = 0; a < p.actions[s].size(); ++a) {
      double v = 0.0;
      for (const auto& [t, pr] : p.actions[s][a].succ) v += pr * res.values[t];
      if (v > best + 1e-15) {
        best = v;
        res.policy[s] = a;
      }
    }
  }

  res.at_initial = 0.0;
  for (const auto& [s, pr] : p.initial_dist) res.at_initial += pr * res.values[s];
  return res;
}

// ---------------------------------------------------------------------------
// Policy evaluation on the induced chain
// ---------------------------------------------------------------------------

std::vector<std::uint32_t> resolve_policy(const ExplicitProduct& p, const Policy& policy) {
  std::vector<std::uint32_t> out(p.size(), kUnresolvedAction);
  for (std::uint32_t s = 0; s < p.size(); ++s) {
    auto it = policy.choice.find(p.states[s]);
    if (it != policy.choice.end()) {
      for (std::uint32_t a = 0; a < p.actions[s].size(); ++a)
        if (p.actions[s][a].ref == it->second) {
          out[s] = a;
          break;
        }
      if (out[s] == kUnresolvedAction)
        throw ValidationError("policy action not enabled at its product state");
    } else if (policy.fallback_to_first && !p.actions[s].empty()) {
      out[s] = 0;
    }
  }
  return out;
}

PolicyEvaluation policy_satisfaction_probability(const ExplicitProduct& p,
                                                 const std::vector<std::uint32_t>& policy,
                                                 const VerifyOptions& options) {
  const auto n = static_cast<std::uint32_t>(p.size());
  if (policy.size() != n) throw ValidationError("policy vector does not match the product size");

  // Reachable states under the policy.
  std::vector<bool> reach(n, false);
  std::vector<std::uint32_t> order;
  std::deque<std::uint32_t> queue;
  for (const auto& [s, pr] : p.initial_dist)
    if (pr > 0 && !reach[s]) {
      reach[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    std::uint32_t s = queue.front();
    queue.pop_front();
    order.push_back(s);
    if (policy[s] == kUnresolvedAction)
      throw ValidationError("policy gap on reachable product state " + std::to_string(s));
    if (p.actions[s].empty())
      throw ValidationError("product state without actions reached");
    for (const auto& [t, pr] : p.actions[s][policy[s]].succ)
      if (pr > 0 && !reach[t]) {
        reach[t] = true;
        queue.push_back(t);
      }
  }

  auto succ = [&](std::uint32_t s, std::vector<std::uint32_t>& outv) {
    for (const auto& [t, pr] : p.actions[s][policy[s]].succ)
      if (pr > 0) outv.push_back(t);
  };
  SccResult scc = scc_decompose(order, n, succ);

  // A bottom component (no edge leaving) is a recurrent class.
  std::vector<bool> bottom(scc.count, true);
  for (std::uint32_t s : order)
    for (const auto& [t, pr] : p.actions[s][policy[s]].succ)
      if (pr > 0 && scc.comp[t] != scc.comp[s]) bottom[scc.comp[s]] = false;

  PolicyEvaluation eval;
  std::vector<std::uint32_t> class_of(n, UINT32_MAX);
  std::unordered_map<std::uint32_t, std::size_t> class_index;
  for (std::uint32_t s : order) {
    const std::uint32_t c = scc.comp[s];
    if (!bottom[c]) {
      eval.chain.transient.push_back(s);
      continue;
    }
    auto [it, fresh] = class_index.try_emplace(c, eval.chain.classes.size());
    if (fresh) eval.chain.classes.push_back({});
    auto& cls = eval.chain.classes[it->second];
    cls.states.push_back(s);
    cls.accept_mask |= p.accept_mask[s];
    class_of[s] = static_cast<std::uint32_t>(it->second);
  }
  std::sort(eval.chain.transient.begin(), eval.chain.transient.end());
  for (auto& cls : eval.chain.classes) std::sort(cls.states.begin(), cls.states.end());

  // Absorption probabilities: one pass per target predicate, by value
  // iteration on the chain restricted to reachable states.
  auto absorption = [&](const std::function<bool(std::size_t)>& is_target) {
    std::vector<double> v(n, 0.0);
    for (std::uint32_t s : order)
      if (class_of[s] != UINT32_MAX && is_target(class_of[s])) v[s] = 1.0;
    std::vector<double> nv = v;
    for (std::uint64_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
      double diff = 0.0;
      for (std::uint32_t s : order) {
        if (class_of[s] != UINT32_MAX) continue;  // recurrent: fixed 0/1
        double sum = 0.0;
        for (const auto& [t, pr] : p.actions[s][policy[s]].succ) sum += pr * v[t];
        nv[s] = sum;
        diff = std::max(diff, std::abs(nv[s] - v[s]));
      }
      v.swap(nv);
      if (diff < options.tolerance) break;
    }
    double total = 0.0;
    for (const auto& [s, pr] : p.initial_dist) total += pr * v[s];
    return total;
  };

  for (std::size_t i = 0; i < eval.chain.classes.size(); ++i)
    eval.chain.classes[i].reach_probability = absorption([i](std::size_t c) { return c == i; });

  eval.probability = absorption([&](std::size_t c) {
    return eval.chain.classes[c].accept_mask == p.full_accept_mask;
  });
  return eval;
}

int closeness(const ExplicitProduct& p, const std::vector<std::uint32_t>& policy,
              const VerifyOptions& options) {
  const PolicyEvaluation eval = policy_satisfaction_probability(p, policy, options);
  int best = 0;
  for (const auto& cls : eval.chain.classes)
    if (cls.reach_probability > 0)
      best = std::max(best, static_cast<int>(std::popcount(cls.accept_mask)));
  return best;
}

// ---------------------------------------------------------------------------
// Counter-example closed forms
// ---------------------------------------------------------------------------

CounterexampleReturns counterexample_returns(double gamma, double nu, double r, std::uint64_t n) {
  if (gamma < 0.0 || gamma > 1.0) throw ValidationError("gamma must lie in [0,1]");
  if (nu < 0.0 || nu > 1.0) throw ValidationError("nu must lie in [0,1]");
  if (r <= 0.0) throw ValidationError("reward must be positive");
  if (n == 0) throw ValidationError("n must be at least 1");

  if (n == kInfiniteHorizon) {
    if (gamma == 1.0)
      throw ValidationError("undiscounted infinite-horizon returns diverge (gamma = 1, n = inf)");
    const double g3 = gamma * gamma * gamma;
    return {(1.0 - nu) * r / (1.0 - gamma), gamma * gamma * r / (1.0 - g3)};
  }
  const double dn = static_cast<double>(n);
  if (gamma == 1.0) return {dn * (1.0 - nu) * r, dn * r};
  const double g3 = gamma * gamma * gamma;
  return {(1.0 - nu) * r * (1.0 - std::pow(gamma, dn)) / (1.0 - gamma),
          gamma * gamma * r * (1.0 - std::pow(g3, dn)) / (1.0 - g3)};
}

double counterexample_preference_margin(double gamma, double nu) {
  // U_left - U_right at n = inf equals r/(1-gamma) times this expression;
  // the positive common factor is cancelled so the sign extends across
  // gamma = 1.
  return gamma * gamma / (1.0 + gamma + gamma * gamma) - (1.0 - nu);
}

double counterexample_preference_threshold(double nu) {
  if (nu <= 0.0 || nu > 1.0)
    throw ValidationError("threshold defined for nu in (0,1]");
  return ((std::sqrt(1.0 / (nu * nu) + 2.0 / nu - 3.0) - 1.0) * nu + 1.0) / (2.0 * nu);
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

void report_to_json(const VerifyReport& report, std::ostream& out) {
  nlohmann::json doc;
  doc["product_states"] = report.product_states;
  doc["amec_count"] = report.amec_count;
  doc["max_prob"] = report.max_prob;
  doc["policy_prob"] = report.policy_prob ? nlohmann::json(*report.policy_prob)
                                          : nlohmann::json(nullptr);
  doc["closeness"] = report.closeness ? nlohmann::json(*report.closeness)
                                      : nlohmann::json(nullptr);
  auto& classes = doc["recurrent_class_summary"] = nlohmann::json::array();
  for (const auto& cls : report.chain.classes) {
    nlohmann::json c;
    c["size"] = cls.states.size();
    std::vector<std::uint32_t> sets;
    for (std::uint32_t j = 0; j < 32; ++j)
      if (cls.accept_mask & (std::uint32_t{1} << j)) sets.push_back(j);
    c["accepting_sets"] = sets;
    c["reach_prob"] = cls.reach_probability;
    classes.push_back(std::move(c));
  }
  out << doc.dump(2) << "\n";
}

}  // namespace specsynth
