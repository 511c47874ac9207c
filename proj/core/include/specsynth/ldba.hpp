#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "specsynth/alphabet.hpp"
#include "specsynth/ltl.hpp"

namespace specsynth {

// One guarded transition. The guard is a propositional formula over the
// automaton's alphabet, evaluated against a label set.
struct LdbaEdge {
  FormulaPtr guard;
  std::uint32_t to;
};

// Limit-deterministic generalized Buchi automaton. States are split into an
// initial part (N) and a deterministic accepting part (D); accepting sets
// live entirely in D and epsilon-edges run only from N into D.
//
// Guards at every state are pairwise disjoint. A label with no matching
// guard moves to an implicit rejecting trap; when any such gap exists the
// trap is materialized as an extra state (tagged D, in no accepting set)
// appended after the declared states.
struct Ldba {
  Alphabet ap;
  std::uint32_t n_declared = 0;
  std::uint32_t initial = 0;
  std::vector<bool> in_deterministic_part;            // per declared state
  std::vector<std::vector<LdbaEdge>> edges;           // per declared state
  std::vector<std::vector<std::uint32_t>> eps;        // per declared state, sorted
  std::vector<std::vector<std::uint32_t>> acc_sets;   // F_1..F_f
  std::optional<std::uint32_t> trap;                  // == n_declared when present
  std::string formula_text;                           // optional metadata

  std::uint32_t total_states() const { return n_declared + (trap ? 1u : 0u); }
  std::size_t num_acc_sets() const { return acc_sets.size(); }
  bool is_trap(std::uint32_t q) const { return trap && q == *trap; }

  // Unique successor whose guard matches l, or the trap.
  std::uint32_t step(std::uint32_t q, Label l) const;

  // Declared epsilon-successors; empty for states in the deterministic part
  // and for the trap.
  const std::vector<std::uint32_t>& epsilon_successors(std::uint32_t q) const;

  // Bitmask over accepting-set indices j with q in F_j.
  std::uint32_t accept_mask_of(std::uint32_t q) const {
    return q < accept_mask_.size() ? accept_mask_[q] : 0;
  }

  std::uint32_t full_accept_mask() const {
    return acc_sets.size() == 32 ? ~std::uint32_t{0}
                                 : (std::uint32_t{1} << acc_sets.size()) - 1;
  }

  // Recomputes validation-time caches (accept masks). Called by validate_ldba.
  void rebuild_caches();

private:
  std::vector<std::uint32_t> accept_mask_;
};

// Checks all structural invariants, materializes the implicit trap when some
// (state, label) pair has no guard, and rebuilds caches. Throws
// ValidationError on: an accepting state tagged N, an epsilon-edge leaving or
// entering the wrong part, overlapping guards at one state, an undeclared
// atom or temporal operator in a guard, a transition leaving the
// deterministic part, or malformed indices/acceptance.
void validate_ldba(Ldba& a);

// Loads the JSON document format: {ap, states, initial, part, edges, eps,
// acc, formula?} and validates it.
Ldba load_ldba(std::istream& in);
Ldba load_ldba_file(const std::string& path);

// Union of all maximal SCCs that are closed under every outgoing transition
// (label and epsilon) and miss at least one accepting set. Episode
// termination checks membership of the current automaton state in this set.
std::vector<std::uint32_t> detect_sinks(const Ldba& a);

// The set of accepting-set indices still owed a visit. Always non-empty.
struct Frontier {
  std::uint32_t sets = 0;

  bool contains(std::uint32_t set_index) const { return (sets >> set_index) & 1; }
  bool operator==(const Frontier& o) const { return sets == o.sets; }
};

inline Frontier initial_frontier(const Ldba& a) { return Frontier{a.full_accept_mask()}; }

// Accepting frontier function: visiting a state of F_j removes F_j from the
// frontier; when that would empty it, the frontier resets to the full family
// minus the just-visited sets (to the full family when even that is empty,
// which keeps single-set automata rewarding on every revisit).
Frontier accepting_frontier(std::uint32_t q, Frontier a, const Ldba& ldba);

// True iff some run over prefix . period^omega (resolving epsilon choices)
// visits every accepting set infinitely often. Decided on the finite graph of
// (position, state) nodes: label edges advance the position, epsilon edges do
// not; acceptance is a reachable cycle-closed component covering all sets.
bool accepts_lasso(const Ldba& a, const Lasso& w);

}  // namespace specsynth
