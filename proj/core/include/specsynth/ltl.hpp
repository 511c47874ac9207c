#pragma once

#include <memory>
#include <string>
#include <vector>

#include "specsynth/alphabet.hpp"

namespace specsynth {

enum class LtlOp {
  True,
  Atom,
  Not,
  And,
  Or,
  Next,
  Until,
  Eventually,
  Always,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable LTL syntax tree. Eventually/Always/Or are kept as first-class
// nodes (sugar over the core grammar); their evaluation is equivalent to the
// expanded forms.
struct Formula {
  LtlOp op;
  std::string atom;   // LtlOp::Atom only
  FormulaPtr lhs;     // unary operand / left operand
  FormulaPtr rhs;     // right operand of And/Or/Until

  static FormulaPtr make_true();
  static FormulaPtr make_atom(std::string name);
  static FormulaPtr make_not(FormulaPtr f);
  static FormulaPtr make_and(FormulaPtr a, FormulaPtr b);
  static FormulaPtr make_or(FormulaPtr a, FormulaPtr b);
  static FormulaPtr make_next(FormulaPtr f);
  static FormulaPtr make_until(FormulaPtr a, FormulaPtr b);
  static FormulaPtr make_eventually(FormulaPtr f);
  static FormulaPtr make_always(FormulaPtr f);
};

// Parses the ASCII formula syntax: atoms are identifiers, operators are
// true ! & | X U F G, parentheses group. Precedence from strongest to
// weakest: unary (! X F G), U, &, |. U associates to the right.
// Throws ParseError with a character position on bad input.
FormulaPtr parse_ltl(const std::string& text);

// Precedence-aware printing; parse_ltl(to_string(f)) reproduces the tree.
std::string to_string(const Formula& f);
inline std::string to_string(const FormulaPtr& f) { return to_string(*f); }

bool equal(const Formula& a, const Formula& b);
inline bool equal(const FormulaPtr& a, const FormulaPtr& b) { return equal(*a, *b); }

// Atom names appearing in f, without duplicates, in first-occurrence order.
std::vector<std::string> atoms_of(const Formula& f);

// Top-level conjuncts of a chain of And nodes (the formula itself if not And).
std::vector<FormulaPtr> conjuncts_of(const FormulaPtr& f);

// True when f contains no temporal operator, i.e. it can serve as an edge
// guard.
bool is_propositional(const Formula& f);

// Evaluates a propositional formula on one label set.
bool eval_propositional(const Formula& f, Label l, const Alphabet& ap);

// Decides prefix . period^omega |= f by position-indexed evaluation over the
// folded positions with fixpoint iteration for the temporal operators.
// Every atom of f must be declared in `ap`.
bool holds_on_lasso(const Formula& f, const Lasso& w, const Alphabet& ap);
inline bool holds_on_lasso(const FormulaPtr& f, const Lasso& w, const Alphabet& ap) {
  return holds_on_lasso(*f, w, ap);
}

}  // namespace specsynth
