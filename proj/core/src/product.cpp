#include "specsynth/product.hpp"

#include <algorithm>
#include <deque>

#include "specsynth/errors.hpp"

namespace specsynth {

std::string action_name(const ActionRef& a, const Plmdp& m, std::uint32_t x) {
  if (a.epsilon) return "eps:" + std::to_string(a.id);
  return m.action_names[x].at(a.id);
}

ActionRef action_from_name(const std::string& name, const Plmdp& m, std::uint32_t x) {
  if (name.rfind("eps:", 0) == 0)
    return ActionRef::eps(static_cast<std::uint32_t>(std::stoul(name.substr(4))));
  const int a = m.action_index(x, name);
  if (a < 0)
    throw ValidationError("action '" + name + "' not enabled at state " + std::to_string(x));
  return ActionRef::model(static_cast<std::uint32_t>(a));
}

ProductRuntime::ProductRuntime(const Plmdp& model, const Ldba& automaton,
                               bool preread_initial_label)
    : model_(&model), automaton_(&automaton), preread_(preread_initial_label) {
  atom_map_.reserve(automaton.ap.size());
  for (const auto& atom : automaton.ap.names()) {
    const int bit = model.ap.find(atom);
    if (bit < 0)
      throw ValidationError("alphabet mismatch: automaton atom '" + atom +
                            "' not declared by the model");
    atom_map_.push_back(bit);
  }
}

Label ProductRuntime::automaton_label(Label model_label) const {
  Label out = 0;
  for (std::size_t i = 0; i < atom_map_.size(); ++i)
    if (model_label & (Label{1} << atom_map_[i])) out |= Label{1} << i;
  return out;
}

ProductState ProductRuntime::initial_state(Rng& rng) const {
  ProductState s;
  s.x = model_->initial;
  s.label = sample_label(*model_, s.x, rng);
  s.q = preread_ ? automaton_->step(automaton_->initial, automaton_label(s.label))
                 : automaton_->initial;
  return s;
}

std::vector<ActionRef> ProductRuntime::enabled_actions(std::uint32_t x, std::uint32_t q) const {
  std::vector<ActionRef> out;
  const std::size_t n_model = model_->num_actions(x);
  out.reserve(n_model + automaton_->epsilon_successors(q).size());
  for (std::uint32_t a = 0; a < n_model; ++a) out.push_back(ActionRef::model(a));
  for (std::uint32_t t : automaton_->epsilon_successors(q)) out.push_back(ActionRef::eps(t));
  return out;
}

ProductState ProductRuntime::step(const ProductState& s, ActionRef a, Rng& rng) const {
  if (a.epsilon) {
    const auto& succ = automaton_->epsilon_successors(s.q);
    if (std::find(succ.begin(), succ.end(), a.id) == succ.end())
      throw ValidationError("epsilon action not enabled at automaton state " +
                            std::to_string(s.q));
    return ProductState{s.x, s.label, a.id};
  }
  ProductState next;
  next.x = sample_transition(*model_, s.x, a.id, rng);
  next.label = sample_label(*model_, next.x, rng);
  next.q = automaton_->step(s.q, automaton_label(next.label));
  return next;
}

std::pair<double, Frontier> ProductRuntime::reward_and_update(const ProductState&, ActionRef,
                                                              const ProductState& s_next,
                                                              Frontier frontier, double r) const {
  const std::uint32_t visited = automaton_->accept_mask_of(s_next.q);
  if (visited & frontier.sets)
    return {r, accepting_frontier(s_next.q, frontier, *automaton_)};
  return {0.0, frontier};
}

ExplicitProduct enumerate_product(const Plmdp& model, const Ldba& automaton,
                                  const EnumerateOptions& options) {
  ProductRuntime rt(model, automaton, options.preread_initial_label);
  ExplicitProduct p;
  p.num_acc_sets = static_cast<std::uint32_t>(automaton.num_acc_sets());
  p.full_accept_mask = automaton.full_accept_mask();

  auto intern = [&](const ProductState& s) -> std::uint32_t {
    auto it = p.index.find(s);
    if (it != p.index.end()) return it->second;
    if (p.states.size() >= options.state_cap)
      throw ValidationError("explicit product exceeds the state cap of " +
                            std::to_string(options.state_cap));
    const auto id = static_cast<std::uint32_t>(p.states.size());
    p.states.push_back(s);
    p.index.emplace(s, id);
    return id;
  };

  std::deque<std::uint32_t> frontier;
  for (const auto& e : model.labels[model.initial]) {
    if (e.p <= 0) continue;
    ProductState s;
    s.x = model.initial;
    s.label = e.set;
    s.q = options.preread_initial_label
              ? automaton.step(automaton.initial, rt.automaton_label(e.set))
              : automaton.initial;
    const auto before = p.states.size();
    const auto id = intern(s);
    double mass = e.p;
    bool fresh = p.states.size() > before;
    // Identical label sets can only appear once per distribution, but two
    // entries may map to the same product state under preread.
    bool merged = false;
    for (auto& [sid, prob] : p.initial_dist)
      if (sid == id) {
        prob += mass;
        merged = true;
      }
    if (!merged) p.initial_dist.emplace_back(id, mass);
    if (fresh) frontier.push_back(id);
  }

  while (!frontier.empty()) {
    const std::uint32_t sid = frontier.front();
    frontier.pop_front();
    const ProductState s = p.states[sid];

    if (p.actions.size() <= sid) p.actions.resize(p.states.size());
    std::vector<ExplicitProduct::Action> rows;
    for (const ActionRef a : rt.enabled_actions(s)) {
      ExplicitProduct::Action row;
      row.ref = a;
      if (a.epsilon) {
        ProductState next{s.x, s.label, a.id};
        const auto before = p.states.size();
        const auto nid = intern(next);
        if (p.states.size() > before) frontier.push_back(nid);
        row.succ.emplace_back(nid, 1.0);
      } else {
        std::unordered_map<std::uint32_t, double> acc;
        for (const auto& te : model.trans[s.x][a.id]) {
          if (te.p <= 0) continue;
          for (const auto& le : model.labels[te.to]) {
            if (le.p <= 0) continue;
            ProductState next;
            next.x = te.to;
            next.label = le.set;
            next.q = automaton.step(s.q, rt.automaton_label(le.set));
            const auto before = p.states.size();
            const auto nid = intern(next);
            if (p.states.size() > before) frontier.push_back(nid);
            acc[nid] += te.p * le.p;
          }
        }
        row.succ.assign(acc.begin(), acc.end());
        std::sort(row.succ.begin(), row.succ.end());
      }
      rows.push_back(std::move(row));
    }
    if (p.actions.size() <= sid) p.actions.resize(p.states.size());
    p.actions[sid] = std::move(rows);
  }

  p.actions.resize(p.states.size());
  p.accept_mask.resize(p.states.size());
  for (std::size_t i = 0; i < p.states.size(); ++i)
    p.accept_mask[i] = automaton.accept_mask_of(p.states[i].q);
  return p;
}

}  // namespace specsynth
