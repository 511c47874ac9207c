#include "specsynth/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "specsynth/errors.hpp"

namespace specsynth {

namespace {

// Enabled-action lists depend only on (x, q); cache them per run.
class ActionCache {
public:
  explicit ActionCache(const ProductRuntime& rt) : rt_(rt) {}

  const std::vector<ActionRef>& get(std::uint32_t x, std::uint32_t q) {
    const std::uint64_t key = (std::uint64_t(x) << 32) | q;
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, rt_.enabled_actions(x, q)).first;
    return it->second;
  }

private:
  const ProductRuntime& rt_;
  std::unordered_map<std::uint64_t, std::vector<ActionRef>> cache_;
};

double max_q(const QTable& table, const ProductState& s, std::size_t n_actions) {
  const StateValues* v = table.find(s);
  if (!v) return 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < n_actions && i < v->q.size(); ++i) best = std::max(best, v->q[i]);
  return best;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

LearnResult run_learning(const Plmdp& model, const Ldba& automaton, const LearnConfig& cfg) {
  if (cfg.horizon < 1) throw ValidationError("horizon must be at least 1");
  if (cfg.gamma < 0.0 || cfg.gamma > 1.0) throw ValidationError("gamma must lie in [0,1]");
  if (cfg.tolerance <= 0.0) throw ValidationError("tolerance must be positive");

  ProductRuntime rt(model, automaton, cfg.preread_initial_label);
  ActionCache actions(rt);

  std::vector<bool> is_sink(automaton.total_states(), false);
  for (std::uint32_t q : detect_sinks(automaton)) is_sink[q] = true;

  Rng rng = Rng::substream(cfg.seed, "learner");

  LearnResult result;
  const Frontier full = initial_frontier(automaton);
  Frontier frontier = full;

  // Ring buffer of per-episode max |delta Q| for the convergence window.
  std::vector<double> window(cfg.window, 0.0);
  std::uint64_t windowed = 0;

  std::unordered_map<std::uint32_t, Frontier> first_seen;

  for (std::uint64_t episode = 1; episode <= cfg.max_episodes; ++episode) {
    if (cfg.frontier_reset_per_episode) frontier = full;
    const double eps = std::max(1.0 / static_cast<double>(episode), cfg.epsilon_floor);

    ProductState s = rt.initial_state(rng);
    const ProductState s0 = s;

    if (cfg.check_frontier_invariance) {
      first_seen.clear();
      first_seen.emplace(s.q, frontier);
    }

    double episode_max_delta = 0.0;
    for (std::uint32_t iter = 1; iter <= cfg.horizon && !is_sink[s.q]; ++iter) {
      const auto& acts = actions.get(s.x, s.q);
      StateValues& values = result.table.at_or_create(s, acts.size());

      std::size_t ai;
      if (rng.uniform() < eps) {
        ai = static_cast<std::size_t>(rng.below(acts.size()));
      } else {
        ai = 0;
        for (std::size_t i = 1; i < acts.size(); ++i)
          if (values.q[i] > values.q[ai]) ai = i;
      }

      const ProductState next = rt.step(s, acts[ai], rng);
      const auto [reward, updated] = rt.reward_and_update(s, acts[ai], next, frontier, cfg.reward);

      if (cfg.check_frontier_invariance) {
        auto [it, fresh] = first_seen.try_emplace(next.q, updated);
        if (!fresh && !(it->second == updated)) ++result.frontier_violations;
      }

      const auto& next_acts = actions.get(next.x, next.q);
      const double bootstrap = cfg.gamma * max_q(result.table, next, next_acts.size());

      const std::uint32_t c = ++values.c[ai];
      const double delta = (reward - values.q[ai] + bootstrap) / static_cast<double>(c);
      values.q[ai] += delta;
      episode_max_delta = std::max(episode_max_delta, std::abs(delta));

      frontier = updated;
      s = next;
    }

    result.episodes = episode;
    if (episode == 1 || episode % cfg.curve_stride == 0 || episode == cfg.max_episodes)
      result.curve.push_back({episode, result.table.state_value(s0)});

    window[windowed % cfg.window] = episode_max_delta;
    ++windowed;
    if (windowed >= cfg.window) {
      const double worst = *std::max_element(window.begin(), window.end());
      if (worst < cfg.tolerance) {
        result.converged = true;
        if (result.curve.empty() || result.curve.back().episode != episode)
          result.curve.push_back({episode, result.table.state_value(s0)});
        break;
      }
    }
  }
  return result;
}

ActionRef greedy_action(const QTable& table, const ProductRuntime& rt, const ProductState& s) {
  const auto acts = rt.enabled_actions(s);
  if (acts.empty()) throw ValidationError("no enabled action at product state");
  const StateValues* v = table.find(s);
  if (!v) return acts[0];
  std::size_t best = 0;
  for (std::size_t i = 1; i < acts.size(); ++i)
    if (v->q[i] > v->q[best]) best = i;
  return acts[best];
}

Policy extract_policy(const QTable& table, const ProductRuntime& rt) {
  Policy p;
  p.automaton_formula = rt.automaton().formula_text;
  for (const auto& [s, values] : table.entries()) {
    const auto acts = rt.enabled_actions(s);
    std::size_t best = 0;
    for (std::size_t i = 1; i < acts.size() && i < values.q.size(); ++i)
      if (values.q[i] > values.q[best]) best = i;
    p.choice.emplace(s, acts[best]);
  }
  return p;
}

Trace execute_policy(const Policy& policy, const Plmdp& model, const Ldba& automaton, Rng& rng,
                     std::uint32_t horizon, const RewardConfig& reward,
                     bool preread_initial_label) {
  ProductRuntime rt(model, automaton, preread_initial_label);
  std::vector<bool> is_sink(automaton.total_states(), false);
  for (std::uint32_t q : detect_sinks(automaton)) is_sink[q] = true;

  Trace trace;
  Frontier frontier = initial_frontier(automaton);
  ProductState s = rt.initial_state(rng);
  trace.steps.push_back({s.x, s.label, ActionRef::model(0), s.q, 0.0});

  for (std::uint32_t t = 1; t <= horizon && !is_sink[s.q]; ++t) {
    ActionRef a;
    auto it = policy.choice.find(s);
    if (it != policy.choice.end()) {
      a = it->second;
    } else {
      if (!policy.fallback_to_first)
        throw ValidationError("policy has no action for a reachable product state");
      a = rt.enabled_actions(s)[0];
      ++trace.fallback_uses;
    }
    const ProductState next = rt.step(s, a, rng);
    const auto [r, updated] = rt.reward_and_update(s, a, next, frontier, reward.r);
    trace.steps.push_back({next.x, next.label, a, next.q, r});
    if (r > 0) trace.frontier_events.push_back(t);
    frontier = updated;
    s = next;
  }
  return trace;
}

void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& out) {
  out << "episode,u_s0\n";
  for (const auto& p : curve) out << p.episode << "," << format_double(p.u_s0) << "\n";
}

std::vector<CurvePoint> read_curve_csv(std::istream& in) {
  std::vector<CurvePoint> out;
  std::string line;
  if (!std::getline(in, line) || line != "episode,u_s0")
    throw ValidationError("curve file missing 'episode,u_s0' header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("malformed curve row: " + line);
    out.push_back({std::stoull(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return out;
}

void policy_to_json(const Policy& policy, const Plmdp& model, std::ostream& out) {
  std::vector<std::pair<ProductState, ActionRef>> entries(policy.choice.begin(),
                                                          policy.choice.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.x, a.first.label, a.first.q) <
           std::tie(b.first.x, b.first.label, b.first.q);
  });

  nlohmann::json doc;
  doc["formula"] = policy.automaton_formula;
  doc["fallback"] = policy.fallback_to_first ? "first-enabled" : "none";
  auto& arr = doc["entries"] = nlohmann::json::array();
  for (const auto& [s, a] : entries) {
    nlohmann::json e;
    e["x"] = s.x;
    e["label"] = model.ap.atoms_in(s.label);
    e["q"] = s.q;
    e["action"] = action_name(a, model, s.x);
    arr.push_back(std::move(e));
  }
  out << doc.dump(2) << "\n";
}

Policy policy_from_json(const Plmdp& model, std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("policy document is not valid JSON: ") + e.what());
  }
  try {
    Policy p;
    p.automaton_formula = doc.value("formula", "");
    p.fallback_to_first = doc.value("fallback", "first-enabled") == "first-enabled";
    for (const auto& e : doc.at("entries")) {
      ProductState s;
      s.x = e.at("x").get<std::uint32_t>();
      if (s.x >= model.n_states) throw ValidationError("policy entry for unknown state");
      s.label = model.ap.mask_of(e.at("label").get<std::vector<std::string>>());
      s.q = e.at("q").get<std::uint32_t>();
      p.choice.emplace(s, action_from_name(e.at("action").get<std::string>(), model, s.x));
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed policy document: ") + e.what());
  }
}

}  // namespace specsynth
