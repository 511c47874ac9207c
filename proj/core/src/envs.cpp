#include "specsynth/envs.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>

#include <json.hpp>

#include "specsynth/errors.hpp"
#include "specsynth/rng.hpp"

namespace specsynth {

namespace {

constexpr int kMoveRow[4] = {-1, 0, 1, 0};  // Up, Right, Down, Left
constexpr int kMoveCol[4] = {0, 1, 0, -1};

std::uint32_t grid_move(std::uint32_t cell, int dir, std::uint32_t width, std::uint32_t height) {
  const int row = static_cast<int>(cell / width) + kMoveRow[dir];
  const int col = static_cast<int>(cell % width) + kMoveCol[dir];
  if (row < 0 || col < 0 || row >= static_cast<int>(height) || col >= static_cast<int>(width))
    return cell;
  return static_cast<std::uint32_t>(row) * width + static_cast<std::uint32_t>(col);
}

std::vector<TransitionEntry> merged_row(const std::map<std::uint32_t, double>& mass) {
  std::vector<TransitionEntry> row;
  row.reserve(mass.size());
  for (const auto& [to, p] : mass) row.push_back({to, p});
  return row;
}

std::uint32_t parse_cell(const nlohmann::json& j, std::uint32_t width, std::uint32_t height) {
  const auto rc = j.get<std::vector<std::uint32_t>>();
  if (rc.size() != 2 || rc[0] >= height || rc[1] >= width)
    throw ValidationError("cell coordinates [row, col] out of range");
  return rc[0] * width + rc[1];
}

}  // namespace

Alphabet grid_alphabet() { return Alphabet({"target1", "target2", "user", "obs"}); }

GridSpec load_grid_spec(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("grid spec is not valid JSON: ") + e.what());
  }
  try {
    GridSpec spec;
    spec.width = doc.at("width").get<std::uint32_t>();
    spec.height = doc.at("height").get<std::uint32_t>();
    if (spec.width == 0 || spec.height == 0) throw ValidationError("empty grid");
    spec.start = parse_cell(doc.at("start"), spec.width, spec.height);
    spec.noise = doc.value("noise", 1.0);
    const Alphabet ap = grid_alphabet();
    if (doc.contains("labels"))
      for (const auto& row : doc.at("labels")) {
        const std::uint32_t cell = parse_cell(row.at("cell"), spec.width, spec.height);
        std::vector<LabelEntry> dist;
        for (const auto& e : row.at("dist"))
          dist.push_back({ap.mask_of(e.at("set").get<std::vector<std::string>>()),
                          e.at("p").get<double>()});
        spec.cell_labels.emplace_back(cell, std::move(dist));
      }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed grid spec: ") + e.what());
  }
}

GridSpec load_grid_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open grid spec: " + path);
  return load_grid_spec(in);
}

Plmdp make_gridworld(GridCase c, const GridSpec& spec) {
  if (spec.width == 0 || spec.height == 0) throw ValidationError("empty grid");
  const double noise = c == GridCase::I ? 1.0 : 0.8;

  Plmdp m;
  m.ap = grid_alphabet();
  m.n_states = spec.width * spec.height;
  m.initial = spec.start;
  if (m.initial >= m.n_states) throw ValidationError("start cell out of range");

  const std::vector<std::string> names = {"Up",      "Right",      "Down",      "Left",
                                          "None",    "Up+pic",     "Right+pic", "Down+pic",
                                          "Left+pic", "None+pic"};

  m.action_names.assign(m.n_states, names);
  m.trans.assign(m.n_states, {});
  for (std::uint32_t cell = 0; cell < m.n_states; ++cell) {
    std::vector<std::vector<TransitionEntry>> rows(10);
    for (int dir = 0; dir < 4; ++dir) {
      std::map<std::uint32_t, double> mass;
      mass[grid_move(cell, dir, spec.width, spec.height)] += noise;
      if (noise < 1.0)
        for (int other = 0; other < 4; ++other)
          if (other != dir)
            mass[grid_move(cell, other, spec.width, spec.height)] += (1.0 - noise) / 3.0;
      rows[dir] = merged_row(mass);
    }
    rows[4] = {{cell, 1.0}};  // None is exact in both cases
    for (int a = 0; a < 5; ++a) rows[a + 5] = rows[a];
    m.trans[cell] = std::move(rows);
  }

  m.labels.assign(m.n_states, {{0, 1.0}});
  for (const auto& [cell, dist] : spec.cell_labels) {
    if (cell >= m.n_states) throw ValidationError("label cell out of range");
    m.labels[cell] = dist;
  }

  validate_plmdp(m);
  return m;
}

// ---------------------------------------------------------------------------
// Pacman
// ---------------------------------------------------------------------------

Alphabet pacman_alphabet() { return Alphabet({"food1", "food2", "ghost", "neutral"}); }

PacmanSpec load_pacman_spec(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("pacman spec is not valid JSON: ") + e.what());
  }
  try {
    PacmanSpec spec;
    spec.width = doc.at("width").get<std::uint32_t>();
    spec.height = doc.at("height").get<std::uint32_t>();
    if (spec.width == 0 || spec.height == 0) throw ValidationError("empty grid");
    if (doc.contains("walls"))
      for (const auto& w : doc.at("walls"))
        spec.walls.push_back(parse_cell(w, spec.width, spec.height));
    spec.pacman = parse_cell(doc.at("pacman"), spec.width, spec.height);
    spec.ghost = parse_cell(doc.at("ghost"), spec.width, spec.height);
    spec.food1 = parse_cell(doc.at("food1"), spec.width, spec.height);
    spec.food2 = parse_cell(doc.at("food2"), spec.width, spec.height);
    spec.p_food = doc.value("p_food", 0.9);
    spec.p_g = doc.value("p_g", 0.9);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed pacman spec: ") + e.what());
  }
}

PacmanSpec load_pacman_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open pacman spec: " + path);
  return load_pacman_spec(in);
}

namespace {

int manhattan(std::uint32_t a, std::uint32_t b, std::uint32_t width) {
  const int ar = static_cast<int>(a / width), ac = static_cast<int>(a % width);
  const int br = static_cast<int>(b / width), bc = static_cast<int>(b % width);
  return std::abs(ar - br) + std::abs(ac - bc);
}

}  // namespace

Plmdp make_pacman(const PacmanSpec& spec) {
  if (spec.p_g < 0.0 || spec.p_g > 1.0) throw ValidationError("p_g must lie in [0,1]");
  if (spec.p_food < 0.0 || spec.p_food > 1.0) throw ValidationError("p_food must lie in [0,1]");
  const std::uint32_t cells = spec.width * spec.height;
  std::vector<bool> wall(cells, false);
  for (std::uint32_t w : spec.walls) {
    if (w >= cells) throw ValidationError("wall cell out of range");
    wall[w] = true;
  }
  for (std::uint32_t c : {spec.pacman, spec.ghost, spec.food1, spec.food2})
    if (c >= cells || wall[c])
      throw ValidationError("pacman, ghost and food cells must be on free cells");

  auto pac_move = [&](std::uint32_t cell, int dir) {
    if (dir == 4) return cell;
    const std::uint32_t next = grid_move(cell, dir, spec.width, spec.height);
    return wall[next] ? cell : next;  // hitting a wall keeps the position
  };

  // Ghost move distribution toward `target`, as (cell, probability) pairs.
  auto ghost_moves = [&](std::uint32_t ghost, std::uint32_t target) {
    std::map<std::uint32_t, double> mass;
    std::vector<std::uint32_t> legal;
    for (int dir = 0; dir < 4; ++dir) {
      const std::uint32_t next = grid_move(ghost, dir, spec.width, spec.height);
      if (next != ghost && !wall[next]) legal.push_back(next);
    }
    // Chase: first legal strictly-distance-decreasing direction in
    // Up, Right, Down, Left order; stay when none exists.
    std::uint32_t chase = ghost;
    const int d0 = manhattan(ghost, target, spec.width);
    for (int dir = 0; dir < 4; ++dir) {
      const std::uint32_t next = grid_move(ghost, dir, spec.width, spec.height);
      if (next != ghost && !wall[next] && manhattan(next, target, spec.width) < d0) {
        chase = next;
        break;
      }
    }
    mass[chase] += spec.p_g;
    if (spec.p_g < 1.0) {
      if (legal.empty())
        mass[ghost] += 1.0 - spec.p_g;
      else
        for (std::uint32_t next : legal) mass[next] += (1.0 - spec.p_g) / legal.size();
    }
    return mass;
  };

  Plmdp m;
  m.ap = pacman_alphabet();
  m.n_states = cells * cells;  // (pacman, ghost), including unreachable wall pairs
  m.initial = spec.pacman * cells + spec.ghost;

  const std::vector<std::string> names = {"Up", "Right", "Down", "Left", "None"};
  m.action_names.assign(m.n_states, names);
  m.trans.assign(m.n_states, {});
  m.labels.assign(m.n_states, {});

  const Label food1 = Label{1} << m.ap.index_of("food1");
  const Label food2 = Label{1} << m.ap.index_of("food2");
  const Label ghost_label = Label{1} << m.ap.index_of("ghost");
  const Label neutral = Label{1} << m.ap.index_of("neutral");

  for (std::uint32_t pac = 0; pac < cells; ++pac) {
    for (std::uint32_t gh = 0; gh < cells; ++gh) {
      const std::uint32_t state = pac * cells + gh;

      std::vector<std::vector<TransitionEntry>> rows(5);
      if (wall[pac] || wall[gh]) {
        // Unreachable filler pair: keep the state space at cells^2 with
        // self-loops so validation holds.
        for (int a = 0; a < 5; ++a) rows[a] = {{state, 1.0}};
      } else {
        for (int a = 0; a < 5; ++a) {
          const std::uint32_t pac_next = pac_move(pac, a);
          std::map<std::uint32_t, double> mass;
          for (const auto& [gh_next, p] : ghost_moves(gh, pac_next))
            mass[pac_next * cells + gh_next] += p;
          rows[a] = merged_row(mass);
        }
      }
      m.trans[state] = std::move(rows);

      if (!wall[pac] && pac == gh) {
        m.labels[state] = {{ghost_label, 1.0}};
      } else if (!wall[pac] && !wall[gh] && pac == spec.food1) {
        m.labels[state] = {{food1, spec.p_food}, {0, 1.0 - spec.p_food}};
      } else if (!wall[pac] && !wall[gh] && pac == spec.food2) {
        m.labels[state] = {{food2, spec.p_food}, {0, 1.0 - spec.p_food}};
      } else {
        m.labels[state] = {{neutral, 1.0}};
      }
      if (m.labels[state].size() == 2 && m.labels[state][1].p == 0.0) m.labels[state].pop_back();
    }
  }

  validate_plmdp(m);
  return m;
}

// ---------------------------------------------------------------------------
// Counter-example chain and its automaton
// ---------------------------------------------------------------------------

Ldba make_gfp_automaton() {
  Ldba a;
  a.ap = Alphabet({"p"});
  a.n_declared = 2;
  a.initial = 0;
  a.in_deterministic_part = {true, true};
  a.edges.resize(2);
  a.edges[0].push_back({parse_ltl("!p"), 0});
  a.edges[0].push_back({parse_ltl("p"), 1});
  a.edges[1].push_back({parse_ltl("!p"), 0});
  a.edges[1].push_back({parse_ltl("p"), 1});
  a.eps.resize(2);
  a.acc_sets = {{1}};
  a.formula_text = "G F p";
  validate_ldba(a);
  return a;
}

std::pair<Plmdp, Ldba> make_counterexample(double nu) {
  if (nu < 0.0 || nu > 1.0) throw ValidationError("nu must lie in [0,1]");

  Plmdp m;
  m.ap = Alphabet({"p", "u"});
  m.n_states = 6;
  m.initial = 0;
  m.action_names = {{"right", "left"}, {"a"}, {"a"}, {"a"}, {"a"}, {"a"}};
  m.trans.resize(6);

  std::vector<TransitionEntry> right;
  if (nu < 1.0) right.push_back({1, 1.0 - nu});
  if (nu > 0.0) right.push_back({2, nu});
  m.trans[0] = {right, {{3, 1.0}}};
  m.trans[1] = {{{1, 1.0}}};
  m.trans[2] = {{{2, 1.0}}};
  m.trans[3] = {{{4, 1.0}}};
  m.trans[4] = {{{5, 1.0}}};
  m.trans[5] = {{{3, 1.0}}};

  const Label p = 1, u = 2;
  m.labels = {{{u, 1.0}}, {{p, 1.0}}, {{u, 1.0}}, {{u, 1.0}}, {{u, 1.0}}, {{p, 1.0}}};

  validate_plmdp(m);
  return {std::move(m), make_gfp_automaton()};
}

// ---------------------------------------------------------------------------
// Random models for oracle cross-tests
// ---------------------------------------------------------------------------

Plmdp random_plmdp(std::uint64_t seed, std::uint32_t n_states, std::uint32_t n_actions,
                   std::uint32_t n_props) {
  if (n_states == 0 || n_actions == 0 || n_props == 0)
    throw ValidationError("random model needs at least one state, action and proposition");
  if (n_props > 8) throw ValidationError("random model supports at most 8 propositions");

  static const char* kProps[8] = {"p", "q", "r", "s", "t", "v", "w", "z"};
  Rng rng = Rng::substream(seed, "random-plmdp");

  Plmdp m;
  std::vector<std::string> props(kProps, kProps + n_props);
  m.ap = Alphabet(props);
  m.n_states = n_states;
  m.initial = 0;

  std::vector<std::string> actions;
  for (std::uint32_t a = 0; a < n_actions; ++a) actions.push_back("a" + std::to_string(a));
  m.action_names.assign(n_states, actions);

  m.trans.assign(n_states, {});
  for (std::uint32_t x = 0; x < n_states; ++x) {
    m.trans[x].resize(n_actions);
    for (std::uint32_t a = 0; a < n_actions; ++a) {
      std::map<std::uint32_t, double> mass;
      const std::uint32_t support = 1 + static_cast<std::uint32_t>(rng.below(std::min(3u, n_states)));
      for (std::uint32_t k = 0; k < support; ++k)
        mass[static_cast<std::uint32_t>(rng.below(n_states))] += 0.05 + rng.uniform();
      if (a == 0) mass[(x + 1) % n_states] += 0.25;  // keep a cycle through all states
      double total = 0;
      for (const auto& [to, w] : mass) total += w;
      std::vector<TransitionEntry> row;
      for (const auto& [to, w] : mass) row.push_back({to, w / total});
      m.trans[x][a] = std::move(row);
    }
  }

  m.labels.assign(n_states, {});
  const Label top = m.ap.full_mask();
  for (std::uint32_t x = 0; x < n_states; ++x) {
    const Label first = static_cast<Label>(rng.below(top + 1));
    Label second = static_cast<Label>(rng.below(top + 1));
    if (second == first) second = first ^ 1;
    const double w1 = 0.1 + rng.uniform(), w2 = 0.1 + rng.uniform();
    m.labels[x] = {{first, w1 / (w1 + w2)}, {second, w2 / (w1 + w2)}};
  }

  validate_plmdp(m);
  return m;
}

}  // namespace specsynth
