#include "specsynth/ldba.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include <json.hpp>

#include "specsynth/errors.hpp"

namespace specsynth {

namespace {
const std::vector<std::uint32_t> kNoEps;
}

std::uint32_t Ldba::step(std::uint32_t q, Label l) const {
  if (is_trap(q)) return q;
  for (const auto& e : edges[q])
    if (eval_propositional(*e.guard, l, ap)) return e.to;
  if (!trap) throw ValidationError("no matching guard and no trap state (unvalidated automaton)");
  return *trap;
}

const std::vector<std::uint32_t>& Ldba::epsilon_successors(std::uint32_t q) const {
  if (q >= n_declared) return kNoEps;
  return eps[q];
}

void Ldba::rebuild_caches() {
  accept_mask_.assign(total_states(), 0);
  for (std::size_t j = 0; j < acc_sets.size(); ++j)
    for (std::uint32_t q : acc_sets[j]) accept_mask_[q] |= std::uint32_t{1} << j;
}

void validate_ldba(Ldba& a) {
  const std::uint32_t n = a.n_declared;
  if (n == 0) throw ValidationError("automaton has no states");
  if (a.initial >= n) throw ValidationError("initial state out of range");
  if (a.in_deterministic_part.size() != n || a.edges.size() != n || a.eps.size() != n)
    throw ValidationError("per-state arrays do not match the state count");
  if (a.ap.size() > 16)
    throw ValidationError("automaton alphabet too large for explicit guard checks (max 16)");

  if (a.acc_sets.empty()) throw ValidationError("automaton needs at least one accepting set");
  if (a.acc_sets.size() > 32) throw ValidationError("too many accepting sets (max 32)");
  for (const auto& set : a.acc_sets) {
    if (set.empty()) throw ValidationError("empty accepting set");
    for (std::uint32_t q : set) {
      if (q >= n) throw ValidationError("accepting state out of range");
      if (!a.in_deterministic_part[q])
        throw ValidationError("accepting state tagged N: " + std::to_string(q));
    }
  }

  for (std::uint32_t q = 0; q < n; ++q) {
    for (const auto& e : a.edges[q]) {
      if (e.to >= n) throw ValidationError("edge target out of range");
      if (!is_propositional(*e.guard))
        throw ValidationError("temporal operator in guard at state " + std::to_string(q));
      for (const auto& atom : atoms_of(*e.guard))
        if (!a.ap.contains(atom))
          throw ValidationError("undeclared atom in guard: " + atom);
      if (a.in_deterministic_part[q] && !a.in_deterministic_part[e.to])
        throw ValidationError("transition leaves the deterministic part at state " +
                              std::to_string(q));
    }
    std::vector<std::uint32_t> sorted_eps = a.eps[q];
    std::sort(sorted_eps.begin(), sorted_eps.end());
    sorted_eps.erase(std::unique(sorted_eps.begin(), sorted_eps.end()), sorted_eps.end());
    a.eps[q] = sorted_eps;
    for (std::uint32_t t : a.eps[q]) {
      if (t >= n) throw ValidationError("epsilon target out of range");
      if (a.in_deterministic_part[q])
        throw ValidationError("epsilon-edge leaving the deterministic part at state " +
                              std::to_string(q));
      if (!a.in_deterministic_part[t])
        throw ValidationError("epsilon-edge target not in the deterministic part: " +
                              std::to_string(t));
    }
  }

  // Guard disjointness and coverage, by explicit enumeration of 2^|AP|.
  const Label top = a.ap.full_mask();
  bool gap = false;
  for (std::uint32_t q = 0; q < n; ++q) {
    for (Label l = 0;; ++l) {
      int matches = 0;
      for (const auto& e : a.edges[q])
        if (eval_propositional(*e.guard, l, a.ap)) ++matches;
      if (matches > 1)
        throw ValidationError("overlapping guards at state " + std::to_string(q) +
                              " on label " + a.ap.format(l));
      if (matches == 0) gap = true;
      if (l == top) break;
    }
  }
  a.trap = gap ? std::optional<std::uint32_t>(n) : std::nullopt;

  a.rebuild_caches();
}

// ---------------------------------------------------------------------------
// JSON loading
// ---------------------------------------------------------------------------

Ldba load_ldba(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("automaton document is not valid JSON: ") + e.what());
  }
  try {
    Ldba a;
    a.ap = Alphabet(doc.at("ap").get<std::vector<std::string>>());
    a.n_declared = doc.at("states").get<std::uint32_t>();
    a.initial = doc.at("initial").get<std::uint32_t>();

    const auto part = doc.at("part").get<std::vector<std::string>>();
    if (part.size() != a.n_declared)
      throw ValidationError("part array length mismatch");
    a.in_deterministic_part.resize(a.n_declared);
    for (std::size_t i = 0; i < part.size(); ++i) {
      if (part[i] == "N") a.in_deterministic_part[i] = false;
      else if (part[i] == "D") a.in_deterministic_part[i] = true;
      else throw ValidationError("part entries must be \"N\" or \"D\"");
    }

    a.edges.assign(a.n_declared, {});
    for (const auto& e : doc.at("edges")) {
      const auto from = e.at("from").get<std::uint32_t>();
      if (from >= a.n_declared) throw ValidationError("edge source out of range");
      LdbaEdge edge;
      try {
        edge.guard = parse_ltl(e.at("guard").get<std::string>());
      } catch (const ParseError& pe) {
        throw ValidationError(std::string("bad guard: ") + pe.what());
      }
      edge.to = e.at("to").get<std::uint32_t>();
      a.edges[from].push_back(std::move(edge));
    }

    a.eps.assign(a.n_declared, {});
    if (doc.contains("eps"))
      for (const auto& e : doc.at("eps")) {
        const auto from = e.at("from").get<std::uint32_t>();
        if (from >= a.n_declared) throw ValidationError("epsilon source out of range");
        a.eps[from].push_back(e.at("to").get<std::uint32_t>());
      }

    a.acc_sets = doc.at("acc").get<std::vector<std::vector<std::uint32_t>>>();
    if (doc.contains("formula")) a.formula_text = doc.at("formula").get<std::string>();

    validate_ldba(a);
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed automaton document: ") + e.what());
  }
}

Ldba load_ldba_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open automaton file: " + path);
  return load_ldba(in);
}

// ---------------------------------------------------------------------------
// Sinks and lasso acceptance
// ---------------------------------------------------------------------------

namespace {

// Iterative Tarjan over an adjacency list; returns the component id per node,
// components numbered in reverse topological order.
struct SccResult {
  std::vector<std::uint32_t> comp;
  std::uint32_t count = 0;
};

SccResult tarjan(const std::vector<std::vector<std::uint32_t>>& adj) {
  const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
  SccResult res;
  res.comp.assign(n, UINT32_MAX);
  std::vector<std::uint32_t> index(n, UINT32_MAX), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::uint32_t next_index = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t edge;
  };
  std::vector<Frame> call;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != UINT32_MAX) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < adj[f.v].size()) {
        std::uint32_t w = adj[f.v][f.edge++];
        if (index[w] == UINT32_MAX) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
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

std::vector<std::uint32_t> detect_sinks(const Ldba& a) {
  const std::uint32_t total = a.total_states();
  const Label top = a.ap.full_mask();

  std::vector<std::vector<std::uint32_t>> adj(total);
  for (std::uint32_t q = 0; q < total; ++q) {
    std::vector<std::uint32_t> succ;
    for (Label l = 0;; ++l) {
      succ.push_back(a.step(q, l));
      if (l == top) break;
    }
    for (std::uint32_t t : a.epsilon_successors(q)) succ.push_back(t);
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    adj[q] = std::move(succ);
  }

  SccResult scc = tarjan(adj);
  std::vector<bool> closed(scc.count, true);
  std::vector<bool> has_inner_edge(scc.count, false);
  std::vector<std::uint32_t> cover(scc.count, 0);
  for (std::uint32_t q = 0; q < total; ++q) {
    cover[scc.comp[q]] |= a.accept_mask_of(q);
    for (std::uint32_t t : adj[q]) {
      if (scc.comp[t] != scc.comp[q]) closed[scc.comp[q]] = false;
      else has_inner_edge[scc.comp[q]] = true;
    }
  }

  const std::uint32_t full = a.full_accept_mask();
  std::vector<std::uint32_t> out;
  for (std::uint32_t q = 0; q < total; ++q) {
    const std::uint32_t c = scc.comp[q];
    if (closed[c] && has_inner_edge[c] && cover[c] != full) out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Frontier accepting_frontier(std::uint32_t q, Frontier a, const Ldba& ldba) {
  const std::uint32_t visited = ldba.accept_mask_of(q);
  if (visited == 0) return a;
  const std::uint32_t full = ldba.full_accept_mask();
  std::uint32_t out = a.sets & ~visited;
  if (out == 0) {
    out = full & ~visited;
    if (out == 0) out = full;  // single-set (or all-sets) reset rule
  }
  return Frontier{out};
}

bool accepts_lasso(const Ldba& a, const Lasso& w) {
  if (w.period.empty()) throw ValidationError("lasso period must be non-empty");
  for (Label l : w.prefix)
    if (l & ~a.ap.full_mask()) throw ValidationError("lasso label outside automaton alphabet");
  for (Label l : w.period)
    if (l & ~a.ap.full_mask()) throw ValidationError("lasso label outside automaton alphabet");

  const std::uint32_t total = a.total_states();
  const std::size_t positions = w.positions();
  const std::size_t n_nodes = positions * total;
  auto id = [&](std::size_t pos, std::uint32_t q) { return pos * total + q; };

  std::vector<std::vector<std::uint32_t>> adj(n_nodes);
  for (std::size_t pos = 0; pos < positions; ++pos) {
    const Label l = w.at(pos);
    const std::size_t next = w.succ(pos);
    for (std::uint32_t q = 0; q < total; ++q) {
      adj[id(pos, q)].push_back(static_cast<std::uint32_t>(id(next, a.step(q, l))));
      for (std::uint32_t t : a.epsilon_successors(q))
        adj[id(pos, q)].push_back(static_cast<std::uint32_t>(id(pos, t)));
    }
  }

  // Reachability from (position 0, initial state).
  std::vector<bool> reach(n_nodes, false);
  std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(id(0, a.initial))};
  reach[queue[0]] = true;
  while (!queue.empty()) {
    std::uint32_t v = queue.back();
    queue.pop_back();
    for (std::uint32_t t : adj[v])
      if (!reach[t]) {
        reach[t] = true;
        queue.push_back(t);
      }
  }

  SccResult scc = tarjan(adj);
  std::vector<std::uint32_t> cover(scc.count, 0);
  std::vector<bool> nontrivial(scc.count, false);
  std::vector<bool> reachable(scc.count, false);
  for (std::size_t v = 0; v < n_nodes; ++v) {
    const std::uint32_t c = scc.comp[v];
    const std::uint32_t q = static_cast<std::uint32_t>(v % total);
    cover[c] |= a.accept_mask_of(q);
    if (reach[v]) reachable[c] = true;
    for (std::uint32_t t : adj[v])
      if (scc.comp[t] == c) nontrivial[c] = true;
  }

  const std::uint32_t full = a.full_accept_mask();
  for (std::uint32_t c = 0; c < scc.count; ++c)
    if (reachable[c] && nontrivial[c] && cover[c] == full) return true;
  return false;
}

}  // namespace specsynth
