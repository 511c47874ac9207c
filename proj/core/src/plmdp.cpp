#include "specsynth/plmdp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "specsynth/errors.hpp"

namespace specsynth {

void validate_plmdp(const Plmdp& m) {
  if (m.n_states == 0) throw ValidationError("model has no states");
  if (m.initial >= m.n_states) throw ValidationError("initial state out of range");
  if (m.action_names.size() != m.n_states || m.trans.size() != m.n_states ||
      m.labels.size() != m.n_states)
    throw ValidationError("per-state arrays do not match the state count");

  for (std::uint32_t x = 0; x < m.n_states; ++x) {
    if (m.action_names[x].empty())
      throw ValidationError("state " + std::to_string(x) + " has no enabled actions");
    if (m.trans[x].size() != m.action_names[x].size())
      throw ValidationError("state " + std::to_string(x) +
                            " transition rows do not match its action list");
    for (std::size_t a = 0; a < m.trans[x].size(); ++a) {
      double sum = 0;
      for (const auto& e : m.trans[x][a]) {
        if (e.to >= m.n_states)
          throw ValidationError("transition target out of range at state " + std::to_string(x));
        if (e.p < 0.0 || e.p > 1.0)
          throw ValidationError("transition probability outside [0,1] at state " +
                                std::to_string(x));
        sum += e.p;
      }
      if (std::abs(sum - 1.0) > kKernelTolerance)
        throw ValidationError("transition row for state " + std::to_string(x) + " action '" +
                              m.action_names[x][a] + "' sums to " + std::to_string(sum));
    }
    double lsum = 0;
    for (const auto& e : m.labels[x]) {
      if (e.set & ~m.ap.full_mask())
        throw ValidationError("label set outside the declared alphabet at state " +
                              std::to_string(x));
      if (e.p < 0.0 || e.p > 1.0)
        throw ValidationError("label probability outside [0,1] at state " + std::to_string(x));
      lsum += e.p;
    }
    if (std::abs(lsum - 1.0) > kKernelTolerance)
      throw ValidationError("label distribution for state " + std::to_string(x) + " sums to " +
                            std::to_string(lsum));
  }
}

std::vector<std::uint32_t> unreachable_states(const Plmdp& m) {
  std::vector<bool> seen(m.n_states, false);
  std::vector<std::uint32_t> queue{m.initial};
  seen[m.initial] = true;
  while (!queue.empty()) {
    std::uint32_t x = queue.back();
    queue.pop_back();
    for (const auto& row : m.trans[x])
      for (const auto& e : row)
        if (e.p > 0 && !seen[e.to]) {
          seen[e.to] = true;
          queue.push_back(e.to);
        }
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = 0; x < m.n_states; ++x)
    if (!seen[x]) out.push_back(x);
  return out;
}

Plmdp load_plmdp(std::istream& in, std::vector<std::string>* warnings) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model document is not valid JSON: ") + e.what());
  }
  try {
    Plmdp m;
    m.ap = Alphabet(doc.at("ap").get<std::vector<std::string>>());
    m.n_states = doc.at("states").get<std::uint32_t>();
    m.initial = doc.at("initial").get<std::uint32_t>();
    m.action_names = doc.at("actions").get<std::vector<std::vector<std::string>>>();
    if (m.action_names.size() != m.n_states)
      throw ValidationError("actions array length mismatch");

    m.trans.assign(m.n_states, {});
    for (std::uint32_t x = 0; x < m.n_states; ++x)
      m.trans[x].assign(m.action_names[x].size(), {});

    for (const auto& row : doc.at("trans")) {
      const auto x = row.at("x").get<std::uint32_t>();
      if (x >= m.n_states) throw ValidationError("transition row for unknown state");
      const auto action = row.at("a").get<std::string>();
      const int a = m.action_index(x, action);
      if (a < 0)
        throw ValidationError("transition row for unknown action '" + action + "' at state " +
                              std::to_string(x));
      if (!m.trans[x][a].empty())
        throw ValidationError("duplicate transition row for state " + std::to_string(x) +
                              " action '" + action + "'");
      for (const auto& e : row.at("dist"))
        m.trans[x][a].push_back({e.at("to").get<std::uint32_t>(), e.at("p").get<double>()});
    }

    m.labels.assign(m.n_states, {});
    for (const auto& row : doc.at("labels")) {
      const auto x = row.at("x").get<std::uint32_t>();
      if (x >= m.n_states) throw ValidationError("label row for unknown state");
      if (!m.labels[x].empty())
        throw ValidationError("duplicate label row for state " + std::to_string(x));
      for (const auto& e : row.at("dist"))
        m.labels[x].push_back(
            {m.ap.mask_of(e.at("set").get<std::vector<std::string>>()), e.at("p").get<double>()});
    }

    validate_plmdp(m);
    if (warnings)
      for (std::uint32_t x : unreachable_states(m))
        warnings->push_back("state " + std::to_string(x) + " is unreachable from the initial state");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model document: ") + e.what());
  }
}

Plmdp load_plmdp_file(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file: " + path);
  return load_plmdp(in, warnings);
}

namespace {
// Shortest round-trippable representation.
nlohmann::json number(double v) { return nlohmann::json(v); }
}  // namespace

void save_plmdp(const Plmdp& m, std::ostream& out) {
  nlohmann::json doc;
  doc["states"] = m.n_states;
  doc["initial"] = m.initial;
  doc["ap"] = m.ap.names();
  doc["actions"] = m.action_names;

  auto& trans = doc["trans"] = nlohmann::json::array();
  for (std::uint32_t x = 0; x < m.n_states; ++x)
    for (std::size_t a = 0; a < m.trans[x].size(); ++a) {
      nlohmann::json row;
      row["x"] = x;
      row["a"] = m.action_names[x][a];
      auto& dist = row["dist"] = nlohmann::json::array();
      for (const auto& e : m.trans[x][a]) dist.push_back({{"to", e.to}, {"p", number(e.p)}});
      trans.push_back(std::move(row));
    }

  auto& labels = doc["labels"] = nlohmann::json::array();
  for (std::uint32_t x = 0; x < m.n_states; ++x) {
    nlohmann::json row;
    row["x"] = x;
    auto& dist = row["dist"] = nlohmann::json::array();
    for (const auto& e : m.labels[x])
      dist.push_back({{"set", m.ap.atoms_in(e.set)}, {"p", number(e.p)}});
    labels.push_back(std::move(row));
  }

  out << doc.dump(2) << "\n";
}

std::uint32_t sample_transition(const Plmdp& m, std::uint32_t x, std::uint32_t a, Rng& rng) {
  if (x >= m.n_states) throw ValidationError("state out of range");
  if (a >= m.trans[x].size())
    throw ValidationError("action not enabled at state " + std::to_string(x));
  const auto& dist = m.trans[x][a];
  const double u = rng.uniform();
  double cum = 0;
  for (const auto& e : dist) {
    cum += e.p;
    if (u < cum) return e.to;
  }
  return dist.back().to;  // guard against rounding at u ~ 1
}

Label sample_label(const Plmdp& m, std::uint32_t x, Rng& rng) {
  if (x >= m.n_states) throw ValidationError("state out of range");
  const auto& dist = m.labels[x];
  const double u = rng.uniform();
  double cum = 0;
  for (const auto& e : dist) {
    cum += e.p;
    if (u < cum) return e.set;
  }
  return dist.back().set;
}

}  // namespace specsynth
