#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "specsynth/product.hpp"

namespace specsynth {

// Action-value estimates and visit counts for one product state, indexed by
// position in the state's enabled-action list.
struct StateValues {
  std::vector<double> q;
  std::vector<std::uint32_t> c;
};

class QTable {
public:
  using Map = std::unordered_map<ProductState, StateValues, ProductStateHash>;

  StateValues& at_or_create(const ProductState& s, std::size_t n_actions) {
    auto [it, fresh] = table_.try_emplace(s);
    if (fresh) {
      it->second.q.assign(n_actions, 0.0);
      it->second.c.assign(n_actions, 0);
    }
    return it->second;
  }

  const StateValues* find(const ProductState& s) const {
    auto it = table_.find(s);
    return it == table_.end() ? nullptr : &it->second;
  }

  // U(s) = max_a Q(s, a); 0 for unseen states.
  double state_value(const ProductState& s) const {
    const StateValues* v = find(s);
    if (!v || v->q.empty()) return 0.0;
    double best = v->q[0];
    for (double x : v->q) best = std::max(best, x);
    return best;
  }

  const Map& entries() const { return table_; }
  std::size_t size() const { return table_.size(); }

private:
  Map table_;
};

struct LearnConfig {
  double gamma = 0.999;
  double reward = 1.0;
  std::uint32_t horizon = 400;          // per-episode iteration cap (tau)
  std::uint64_t max_episodes = 100000;
  std::uint32_t window = 1000;          // convergence window, in episodes
  double tolerance = 1e-3;              // sup-norm threshold on Q deltas
  std::uint64_t seed = 0;
  bool frontier_reset_per_episode = true;
  double epsilon_floor = 0.01;          // 0 = literal 1/episode schedule
  bool preread_initial_label = false;
  // When set, verify that within each episode every revisit of an automaton
  // state observes the frontier that the first visit recorded (after the
  // visit's own update). Violations are counted, not thrown.
  bool check_frontier_invariance = false;
  std::uint32_t curve_stride = 100;
};

struct CurvePoint {
  std::uint64_t episode;
  double u_s0;
};

struct LearnResult {
  QTable table;
  std::vector<CurvePoint> curve;
  std::uint64_t episodes = 0;
  bool converged = false;
  std::uint64_t frontier_violations = 0;
};

// Algorithm: per episode, reset to a sampled initial product state, follow an
// epsilon-greedy policy (epsilon = 1/episode, floored) until the automaton
// enters a non-accepting sink or the horizon is reached; update
// Q <- Q + (1/C) [R - Q + gamma max_a' Q(s', a')] with the visit counter C.
// Stops early when the largest Q delta over `window` consecutive episodes
// drops below `tolerance`.
LearnResult run_learning(const Plmdp& model, const Ldba& automaton, const LearnConfig& cfg);

// Greedy argmax over the enabled actions, ties broken by lowest index.
ActionRef greedy_action(const QTable& table, const ProductRuntime& rt, const ProductState& s);

// Deterministic product policy. States outside `choice` fall back to the
// first enabled action; executions flag how often that happened.
struct Policy {
  std::unordered_map<ProductState, ActionRef, ProductStateHash> choice;
  std::string automaton_formula;  // metadata
  bool fallback_to_first = true;
};

Policy extract_policy(const QTable& table, const ProductRuntime& rt);

struct TraceStep {
  std::uint32_t x;
  Label label;
  ActionRef action;
  std::uint32_t q;
  double reward;
};

struct Trace {
  std::vector<TraceStep> steps;               // steps[0] holds the initial state
  std::vector<std::uint64_t> frontier_events; // step indices that earned reward
  std::uint64_t fallback_uses = 0;
};

// Simulates the projected finite-memory policy on the model for `horizon`
// steps (or until an automaton sink).
Trace execute_policy(const Policy& policy, const Plmdp& model, const Ldba& automaton, Rng& rng,
                     std::uint32_t horizon, const RewardConfig& reward = {},
                     bool preread_initial_label = false);

// CSV with header "episode,u_s0"; doubles are printed with enough digits to
// round-trip bit-exactly.
void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& out);
std::vector<CurvePoint> read_curve_csv(std::istream& in);

// JSON export keyed by (x, label, q) triples; actions are stored by name.
void policy_to_json(const Policy& policy, const Plmdp& model, std::ostream& out);
Policy policy_from_json(const Plmdp& model, std::istream& in);

}  // namespace specsynth
