#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "specsynth/alphabet.hpp"
#include "specsynth/rng.hpp"

namespace specsynth {

struct TransitionEntry {
  std::uint32_t to;
  double p;
};

struct LabelEntry {
  Label set;
  double p;
};

// Probabilistically-labeled MDP: a finite MDP whose states emit label sets
// stochastically. Distributions are stored sparsely (positive-mass entries
// only) in document order; sampling walks them by inverse CDF, which keeps
// runs bit-reproducible for a fixed seed.
struct Plmdp {
  Alphabet ap;
  std::uint32_t n_states = 0;
  std::uint32_t initial = 0;
  std::vector<std::vector<std::string>> action_names;             // per state
  std::vector<std::vector<std::vector<TransitionEntry>>> trans;   // [x][a]
  std::vector<std::vector<LabelEntry>> labels;                    // [x]

  std::size_t num_actions(std::uint32_t x) const { return action_names[x].size(); }

  // -1 when the state has no action by that name.
  int action_index(std::uint32_t x, const std::string& name) const {
    for (std::size_t i = 0; i < action_names[x].size(); ++i)
      if (action_names[x][i] == name) return static_cast<int>(i);
    return -1;
  }
};

inline constexpr double kKernelTolerance = 1e-9;

// Throws ValidationError on: a transition row not summing to 1, a label
// distribution not summing to 1, probabilities outside [0,1], an empty
// action set, or dangling indices.
void validate_plmdp(const Plmdp& m);

// States with no path from the initial state (informational only).
std::vector<std::uint32_t> unreachable_states(const Plmdp& m);

// JSON document format: {states, initial, ap, actions, trans, labels}.
// `warnings`, when given, receives human-readable notes about unreachable
// states.
Plmdp load_plmdp(std::istream& in, std::vector<std::string>* warnings = nullptr);
Plmdp load_plmdp_file(const std::string& path, std::vector<std::string>* warnings = nullptr);
void save_plmdp(const Plmdp& m, std::ostream& out);

// Draws x' from P_C(x, a, .). Throws ValidationError when a is not enabled.
std::uint32_t sample_transition(const Plmdp& m, std::uint32_t x, std::uint32_t a, Rng& rng);

// Draws a label set from P_L(x, .).
Label sample_label(const Plmdp& m, std::uint32_t x, Rng& rng);

}  // namespace specsynth
