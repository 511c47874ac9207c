#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "specsynth/ldba.hpp"
#include "specsynth/plmdp.hpp"

namespace specsynth {

// Grid cells are indexed row-major with row 0 at the top; Up decreases the
// row. Moves off the grid leave the agent in place.
struct GridSpec {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t start = 0;   // cell index
  double noise = 1.0;        // probability of the intended move
  // Sparse per-cell label distributions over {target1, target2, user, obs};
  // cells without an entry emit {} with probability 1.
  std::vector<std::pair<std::uint32_t, std::vector<LabelEntry>>> cell_labels;

  std::uint32_t cell(std::uint32_t row, std::uint32_t col) const { return row * width + col; }
};

enum class GridCase { I, II };

// Alphabet used by the gridworld models and the phi1 automaton.
Alphabet grid_alphabet();

GridSpec load_grid_spec(std::istream& in);
GridSpec load_grid_spec_file(const std::string& path);

// Ten actions per cell: {Up, Right, Down, Left, None} with and without the
// picture variant; both members of a pair have identical dynamics. Case I
// executes moves exactly; case II executes the intended move with
// probability 0.8 and one of the other three directions otherwise. None is
// always exact.
Plmdp make_gridworld(GridCase c, const GridSpec& spec);

struct PacmanSpec {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint32_t> walls;  // cell indices
  std::uint32_t pacman = 0;
  std::uint32_t ghost = 0;
  std::uint32_t food1 = 0;
  std::uint32_t food2 = 0;
  double p_food = 0.9;  // probability the food label is observed on its cell
  double p_g = 0.9;     // chase probability

  std::uint32_t cell(std::uint32_t row, std::uint32_t col) const { return row * width + col; }
};

Alphabet pacman_alphabet();

PacmanSpec load_pacman_spec(std::istream& in);
PacmanSpec load_pacman_spec_file(const std::string& path);

// States are all (pacman cell, ghost cell) pairs. Pacman moves are exact
// (walls and the border bounce back); the ghost then moves toward pacman's
// new cell with probability p_g (first legal strictly-distance-decreasing
// direction in Up, Right, Down, Left order; it stays put when every such
// move is blocked) and uniformly over legal directions otherwise. Labels:
// {ghost} on co-location, the food label with probability p_food on food
// cells, {neutral} elsewhere.
Plmdp make_pacman(const PacmanSpec& spec);

// The six-state chain with a risky branch (right: reward state with
// probability 1 - nu, dead-end otherwise) and a patient three-step cycle
// (left), paired with the two-state automaton for "infinitely often p".
std::pair<Plmdp, Ldba> make_counterexample(double nu);

// The two-state automaton for "G F p" alone.
Ldba make_gfp_automaton();

// Seeded random model for oracle cross-tests: every state gets `n_actions`
// actions with small random supports (action 0 always reaches the next state
// in a cycle, keeping the model connected) and a random label distribution
// over subsets of {p, q, r, ...}.
Plmdp random_plmdp(std::uint64_t seed, std::uint32_t n_states, std::uint32_t n_actions,
                   std::uint32_t n_props);

}  // namespace specsynth
