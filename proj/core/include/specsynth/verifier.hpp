#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "specsynth/learner.hpp"
#include "specsynth/product.hpp"

namespace specsynth {

// Maximal end component: a set of product states together with the action
// indices (into ExplicitProduct::actions[state]) under which the set is
// closed and strongly connected.
struct Mec {
  std::vector<std::uint32_t> states;                  // sorted
  std::vector<std::vector<std::uint32_t>> actions;    // parallel to states
  std::uint32_t accept_mask = 0;                      // union over member states
};

std::vector<Mec> mec_decomposition(const ExplicitProduct& p);

// Indices of MECs that intersect every accepting set.
std::vector<std::size_t> accepting_mecs(const ExplicitProduct& p, const std::vector<Mec>& mecs);

struct VerifyOptions {
  double tolerance = 1e-10;
  std::uint64_t max_sweeps = 1'000'000;
};

struct ValueIterationResult {
  std::vector<double> values;          // per product state
  std::vector<std::uint32_t> policy;   // argmax action index per state
  std::uint64_t sweeps = 0;
  double at_initial = 0.0;             // expectation over the initial distribution
};

// Maximum probability of reaching the union of accepting MECs, by value
// iteration from the 0/1 initialization; the iterates increase monotonically
// toward the fixpoint. `observer`, when set, receives each sweep's values.
ValueIterationResult max_satisfaction_probability(
    const ExplicitProduct& p, const VerifyOptions& options = {},
    const std::function<void(const std::vector<double>&)>& observer = nullptr);

// A product policy resolved to one action index per explicit state.
// kUnresolved marks states the policy does not cover.
inline constexpr std::uint32_t kUnresolvedAction = std::numeric_limits<std::uint32_t>::max();

std::vector<std::uint32_t> resolve_policy(const ExplicitProduct& p, const Policy& policy);

struct ChainDecomposition {
  struct RecurrentClass {
    std::vector<std::uint32_t> states;
    std::uint32_t accept_mask = 0;
    double reach_probability = 0.0;  // absorption mass from the initial distribution
  };
  std::vector<std::uint32_t> transient;  // reachable transient states
  std::vector<RecurrentClass> classes;   // reachable recurrent classes
};

struct PolicyEvaluation {
  double probability = 0.0;
  ChainDecomposition chain;
};

// Builds the Markov chain induced by the policy, decomposes it into
// transient states and recurrent classes, marks each class with the
// accepting sets it intersects, and solves for the absorption probability
// into fully-accepting classes from the initial distribution. Throws
// ValidationError when the policy leaves a reachable state unresolved.
PolicyEvaluation policy_satisfaction_probability(const ExplicitProduct& p,
                                                 const std::vector<std::uint32_t>& policy,
                                                 const VerifyOptions& options = {});

// Closeness to satisfaction: the largest number of distinct accepting sets
// intersected by any recurrent class reachable with positive probability.
int closeness(const ExplicitProduct& p, const std::vector<std::uint32_t>& policy,
              const VerifyOptions& options = {});

// Closed-form expected discounted returns of the two first actions of the
// six-state counter-example chain: n is the number of reward terms
// (kInfiniteHorizon for the limit; gamma = 1 is evaluated by limit and is
// rejected together with an infinite n).
inline constexpr std::uint64_t kInfiniteHorizon = std::numeric_limits<std::uint64_t>::max();

struct CounterexampleReturns {
  double u_right;
  double u_left;
};

CounterexampleReturns counterexample_returns(double gamma, double nu, double r, std::uint64_t n);

// The discount threshold above which the patient cycle beats the risky
// branch (for nu <= 2/3 the root lies beyond 1, i.e. no admissible discount
// prefers the cycle at infinite horizon).
double counterexample_preference_threshold(double nu);

// Sign carrier of U_left - U_right at infinite horizon with the positive
// common factor cancelled; defined for any gamma > 0.
double counterexample_preference_margin(double gamma, double nu);

struct VerifyReport {
  std::size_t product_states = 0;
  std::size_t amec_count = 0;
  double max_prob = 0.0;
  std::optional<double> policy_prob;
  std::optional<int> closeness;
  ChainDecomposition chain;  // populated when a policy was evaluated
};

void report_to_json(const VerifyReport& report, std::ostream& out);

}  // namespace specsynth
