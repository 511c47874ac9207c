#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "specsynth/alphabet.hpp"
#include "specsynth/ldba.hpp"
#include "specsynth/plmdp.hpp"
#include "specsynth/rng.hpp"

namespace specsynth {

// State of the product MDP: model state, the label set observed there, and
// the automaton state after reading that label.
struct ProductState {
  std::uint32_t x = 0;
  Label label = 0;
  std::uint32_t q = 0;

  bool operator==(const ProductState& o) const {
    return x == o.x && label == o.label && q == o.q;
  }
};

struct ProductStateHash {
  std::size_t operator()(const ProductState& s) const {
    std::uint64_t v = (std::uint64_t(s.x) << 40) ^ (std::uint64_t(s.label) << 20) ^ s.q;
    return static_cast<std::size_t>(Rng::splitmix64(v));
  }
};

// Either a model action (index into the state's action list) or a synthetic
// epsilon action jumping the automaton to state `id`.
struct ActionRef {
  bool epsilon = false;
  std::uint32_t id = 0;

  bool operator==(const ActionRef& o) const { return epsilon == o.epsilon && id == o.id; }

  static ActionRef model(std::uint32_t a) { return {false, a}; }
  static ActionRef eps(std::uint32_t q) { return {true, q}; }
};

std::string action_name(const ActionRef& a, const Plmdp& m, std::uint32_t x);
ActionRef action_from_name(const std::string& name, const Plmdp& m, std::uint32_t x);

struct RewardConfig {
  double r = 1.0;
  double gamma = 0.999;
};

// On-the-fly product of a PL-MDP with an LDBA. Stateless apart from caches;
// callers own the run state (ProductState, Frontier, Rng).
class ProductRuntime {
public:
  // Requires every automaton atom to be declared in the model alphabet.
  // When preread_initial_label is set, the initial automaton state consumes
  // the sampled initial label (off by default: the first label the automaton
  // reads is the one observed after the first move).
  ProductRuntime(const Plmdp& model, const Ldba& automaton, bool preread_initial_label = false);

  const Plmdp& model() const { return *model_; }
  const Ldba& automaton() const { return *automaton_; }

  ProductState initial_state(Rng& rng) const;

  // Model actions in their declared order, then one epsilon action per
  // epsilon-successor of q in ascending target order.
  std::vector<ActionRef> enabled_actions(const ProductState& s) const {
    return enabled_actions(s.x, s.q);
  }
  std::vector<ActionRef> enabled_actions(std::uint32_t x, std::uint32_t q) const;

  ProductState step(const ProductState& s, ActionRef a, Rng& rng) const;

  // Reward of the transition that produced s_next, judged against the
  // frontier before the move: r when the new automaton state belongs to an
  // accepting set still in the frontier, else 0. The frontier advances only
  // when the reward fires.
  std::pair<double, Frontier> reward_and_update(const ProductState& s, ActionRef a,
                                                const ProductState& s_next, Frontier frontier,
                                                double r) const;

  // Translates a model label mask to the automaton's atom order.
  Label automaton_label(Label model_label) const;

private:
  const Plmdp* model_;
  const Ldba* automaton_;
  bool preread_;
  std::vector<int> atom_map_;  // automaton atom bit -> model atom bit
};

// Fully enumerated product for the verification oracle.
struct ExplicitProduct {
  struct Action {
    ActionRef ref;
    std::vector<std::pair<std::uint32_t, double>> succ;  // (state index, probability)
  };

  std::vector<ProductState> states;
  std::unordered_map<ProductState, std::uint32_t, ProductStateHash> index;
  std::vector<std::vector<Action>> actions;                    // per state
  std::vector<std::uint32_t> accept_mask;                      // per state, over F_j
  std::vector<std::pair<std::uint32_t, double>> initial_dist;  // over initial labels
  std::uint32_t num_acc_sets = 0;
  std::uint32_t full_accept_mask = 0;

  std::size_t size() const { return states.size(); }
};

struct EnumerateOptions {
  std::size_t state_cap = 1'000'000;
  bool preread_initial_label = false;
};

// Breadth-first reachable construction. Throws ValidationError when the
// reachable state count exceeds options.state_cap.
ExplicitProduct enumerate_product(const Plmdp& model, const Ldba& automaton,
                                  const EnumerateOptions& options = {});

}  // namespace specsynth
