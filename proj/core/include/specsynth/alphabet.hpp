#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specsynth/errors.hpp"

namespace specsynth {

// A set of atomic propositions observed in one step, packed as a bitmask over
// the owning Alphabet's atom order.
using Label = std::uint32_t;

// Ordered set of atomic proposition names. Bit i of a Label corresponds to
// names()[i]. Capped at 32 atoms; every model in scope is far below that.
class Alphabet {
public:
  static constexpr std::size_t kMaxAtoms = 32;

  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() > kMaxAtoms)
      throw ValidationError("alphabet exceeds " + std::to_string(kMaxAtoms) + " atoms");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw ValidationError("empty atom name in alphabet");
      for (std::size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j])
          throw ValidationError("duplicate atom name in alphabet: " + names_[i]);
    }
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t bit) const { return names_.at(bit); }

  bool contains(const std::string& name) const { return find(name) >= 0; }

  // -1 when the atom is not declared.
  int find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<int>(i);
    return -1;
  }

  std::size_t index_of(const std::string& name) const {
    int i = find(name);
    if (i < 0) throw ValidationError("undeclared atom: " + name);
    return static_cast<std::size_t>(i);
  }

  Label mask_of(const std::vector<std::string>& atoms) const {
    Label m = 0;
    for (const auto& a : atoms) m |= Label{1} << index_of(a);
    return m;
  }

  std::vector<std::string> atoms_in(Label l) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (l & (Label{1} << i)) out.push_back(names_[i]);
    return out;
  }

  std::string format(Label l) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (l & (Label{1} << i)) {
        if (!first) out += ",";
        out += names_[i];
        first = false;
      }
    }
    out += "}";
    return out;
  }

  Label full_mask() const {
    return names_.size() == kMaxAtoms ? ~Label{0} : (Label{1} << names_.size()) - 1;
  }

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }

private:
  std::vector<std::string> names_;
};

// An ultimately periodic infinite word prefix . period^omega over some
// alphabet. The period is never empty.
struct Lasso {
  std::vector<Label> prefix;
  std::vector<Label> period;

  std::size_t positions() const { return prefix.size() + period.size(); }

  // Successor in the folded position graph: the last position wraps to the
  // start of the period.
  std::size_t succ(std::size_t i) const {
    return i + 1 < positions() ? i + 1 : prefix.size();
  }

  Label at(std::size_t i) const {
    return i < prefix.size() ? prefix[i] : period[i - prefix.size()];
  }
};

}  // namespace specsynth
