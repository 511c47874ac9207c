#include "specsynth/ltl.hpp"

#include <algorithm>
#include <cctype>

#include "specsynth/errors.hpp"

namespace specsynth {

namespace {

FormulaPtr node(LtlOp op, std::string atom, FormulaPtr lhs, FormulaPtr rhs) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->atom = std::move(atom);
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}

}  // namespace

FormulaPtr Formula::make_true() { return node(LtlOp::True, {}, nullptr, nullptr); }
FormulaPtr Formula::make_atom(std::string name) {
  return node(LtlOp::Atom, std::move(name), nullptr, nullptr);
}
FormulaPtr Formula::make_not(FormulaPtr f) {
  return node(LtlOp::Not, {}, std::move(f), nullptr);
}
FormulaPtr Formula::make_and(FormulaPtr a, FormulaPtr b) {
  return node(LtlOp::And, {}, std::move(a), std::move(b));
}
FormulaPtr Formula::make_or(FormulaPtr a, FormulaPtr b) {
  return node(LtlOp::Or, {}, std::move(a), std::move(b));
}
FormulaPtr Formula::make_next(FormulaPtr f) {
  return node(LtlOp::Next, {}, std::move(f), nullptr);
}
FormulaPtr Formula::make_until(FormulaPtr a, FormulaPtr b) {
  return node(LtlOp::Until, {}, std::move(a), std::move(b));
}
FormulaPtr Formula::make_eventually(FormulaPtr f) {
  return node(LtlOp::Eventually, {}, std::move(f), nullptr);
}
FormulaPtr Formula::make_always(FormulaPtr f) {
  return node(LtlOp::Always, {}, std::move(f), nullptr);
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok { True, Ident, Not, And, Or, Next, Until, Ev, Alw, LPar, RPar, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    std::size_t start = i_;
    if (i_ >= text_.size()) {
      cur_ = {Tok::End, "", start};
      return;
    }
    char c = text_[i_];
    if (c == '!') { cur_ = {Tok::Not, "!", start}; ++i_; return; }
    if (c == '&') { cur_ = {Tok::And, "&", start}; ++i_; return; }
    if (c == '|') { cur_ = {Tok::Or, "|", start}; ++i_; return; }
    if (c == '(') { cur_ = {Tok::LPar, "(", start}; ++i_; return; }
    if (c == ')') { cur_ = {Tok::RPar, ")", start}; ++i_; return; }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
        ++j;
      std::string word = text_.substr(i_, j - i_);
      i_ = j;
      if (word == "true") { cur_ = {Tok::True, word, start}; return; }
      if (word == "false")
        throw ParseError("reserved word 'false' (write !true)", start);
      if (word == "X") { cur_ = {Tok::Next, word, start}; return; }
      if (word == "U") { cur_ = {Tok::Until, word, start}; return; }
      if (word == "F") { cur_ = {Tok::Ev, word, start}; return; }
      if (word == "G") { cur_ = {Tok::Alw, word, start}; return; }
      cur_ = {Tok::Ident, word, start};
      return;
    }
    throw ParseError(std::string("unknown token '") + c + "'", start);
  }

  const std::string& text_;
  std::size_t i_ = 0;
  Token cur_;
};

class Parser {
public:
  explicit Parser(const std::string& text) : lex_(text) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_or();
    const Token& t = lex_.peek();
    if (t.kind != Tok::End)
      throw ParseError("unexpected token '" + t.text + "'", t.pos);
    return f;
  }

private:
  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      f = Formula::make_or(std::move(f), parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_until();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      f = Formula::make_and(std::move(f), parse_until());
    }
    return f;
  }

  // Right-associative: a U b U c == a U (b U c).
  FormulaPtr parse_until() {
    FormulaPtr f = parse_unary();
    if (lex_.peek().kind == Tok::Until) {
      lex_.take();
      return Formula::make_until(std::move(f), parse_until());
    }
    return f;
  }

  FormulaPtr parse_unary() {
    const Token t = lex_.peek();
    switch (t.kind) {
      case Tok::Not:
        lex_.take();
        return Formula::make_not(parse_unary());
      case Tok::Next:
        lex_.take();
        return Formula::make_next(parse_unary());
      case Tok::Ev:
        lex_.take();
        return Formula::make_eventually(parse_unary());
      case Tok::Alw:
        lex_.take();
        return Formula::make_always(parse_unary());
      case Tok::True:
        lex_.take();
        return Formula::make_true();
      case Tok::Ident:
        lex_.take();
        return Formula::make_atom(t.text);
      case Tok::LPar: {
        lex_.take();
        FormulaPtr f = parse_or();
        const Token& close = lex_.peek();
        if (close.kind != Tok::RPar) throw ParseError("expected ')'", close.pos);
        lex_.take();
        return f;
      }
      case Tok::End:
        throw ParseError("unexpected end of formula", t.pos);
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.pos);
    }
  }

  Lexer lex_;
};

int precedence(LtlOp op) {
  switch (op) {
    case LtlOp::Or: return 0;
    case LtlOp::And: return 1;
    case LtlOp::Until: return 2;
    default: return 3;  // unary and leaves
  }
}

void print(const Formula& f, std::string& out) {
  auto child = [&out](const Formula& c, int min_prec) {
    if (precedence(c.op) < min_prec) {
      out += '(';
      print(c, out);
      out += ')';
    } else {
      print(c, out);
    }
  };
  switch (f.op) {
    case LtlOp::True: out += "true"; return;
    case LtlOp::Atom: out += f.atom; return;
    case LtlOp::Not: out += '!'; child(*f.lhs, 3); return;
    case LtlOp::Next: out += "X "; child(*f.lhs, 3); return;
    case LtlOp::Eventually: out += "F "; child(*f.lhs, 3); return;
    case LtlOp::Always: out += "G "; child(*f.lhs, 3); return;
    case LtlOp::Until:
      // Right-associative: the left child needs parens at equal precedence.
      child(*f.lhs, 3);
      out += " U ";
      child(*f.rhs, 2);
      return;
    case LtlOp::And:
      child(*f.lhs, 1);
      out += " & ";
      child(*f.rhs, 2);
      return;
    case LtlOp::Or:
      child(*f.lhs, 0);
      out += " | ";
      child(*f.rhs, 1);
      return;
  }
}

}  // namespace

FormulaPtr parse_ltl(const std::string& text) { return Parser(text).parse(); }

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

bool equal(const Formula& a, const Formula& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case LtlOp::True: return true;
    case LtlOp::Atom: return a.atom == b.atom;
    case LtlOp::Not:
    case LtlOp::Next:
    case LtlOp::Eventually:
    case LtlOp::Always:
      return equal(*a.lhs, *b.lhs);
    default:
      return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
}

namespace {
void collect_atoms(const Formula& f, std::vector<std::string>& out) {
  switch (f.op) {
    case LtlOp::True: return;
    case LtlOp::Atom:
      if (std::find(out.begin(), out.end(), f.atom) == out.end()) out.push_back(f.atom);
      return;
    default:
      if (f.lhs) collect_atoms(*f.lhs, out);
      if (f.rhs) collect_atoms(*f.rhs, out);
  }
}
}  // namespace

std::vector<std::string> atoms_of(const Formula& f) {
  std::vector<std::string> out;
  collect_atoms(f, out);
  return out;
}

std::vector<FormulaPtr> conjuncts_of(const FormulaPtr& f) {
  if (f->op != LtlOp::And) return {f};
  auto out = conjuncts_of(f->lhs);
  auto right = conjuncts_of(f->rhs);
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

bool is_propositional(const Formula& f) {
  switch (f.op) {
    case LtlOp::True:
    case LtlOp::Atom:
      return true;
    case LtlOp::Not:
      return is_propositional(*f.lhs);
    case LtlOp::And:
    case LtlOp::Or:
      return is_propositional(*f.lhs) && is_propositional(*f.rhs);
    default:
      return false;
  }
}

bool eval_propositional(const Formula& f, Label l, const Alphabet& ap) {
  switch (f.op) {
    case LtlOp::True: return true;
    case LtlOp::Atom: return (l >> ap.index_of(f.atom)) & 1;
    case LtlOp::Not: return !eval_propositional(*f.lhs, l, ap);
    case LtlOp::And:
      return eval_propositional(*f.lhs, l, ap) && eval_propositional(*f.rhs, l, ap);
    case LtlOp::Or:
      return eval_propositional(*f.lhs, l, ap) || eval_propositional(*f.rhs, l, ap);
    default:
      throw ValidationError("temporal operator in propositional context");
  }
}

// ---------------------------------------------------------------------------
// Lasso semantics
// ---------------------------------------------------------------------------

namespace {

using Valuation = std::vector<char>;

// Bottom-up evaluation: each node gets a truth value per folded position.
// Until/Eventually iterate a least fixpoint from all-false, Always a greatest
// fixpoint from all-true; both stabilize within |positions|+1 passes because
// the valuation lattice is finite and the updates are monotone.
Valuation evaluate(const Formula& f, const Lasso& w, const Alphabet& ap) {
  const std::size_t n = w.positions();
  switch (f.op) {
    case LtlOp::True:
      return Valuation(n, 1);
    case LtlOp::Atom: {
      const Label bit = Label{1} << ap.index_of(f.atom);
      Valuation v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = (w.at(i) & bit) != 0;
      return v;
    }
    case LtlOp::Not: {
      Valuation v = evaluate(*f.lhs, w, ap);
      for (auto& x : v) x = !x;
      return v;
    }
    case LtlOp::And: {
      Valuation a = evaluate(*f.lhs, w, ap);
      Valuation b = evaluate(*f.rhs, w, ap);
      for (std::size_t i = 0; i < n; ++i) a[i] = a[i] && b[i];
      return a;
    }
    case LtlOp::Or: {
      Valuation a = evaluate(*f.lhs, w, ap);
      Valuation b = evaluate(*f.rhs, w, ap);
      for (std::size_t i = 0; i < n; ++i) a[i] = a[i] || b[i];
      return a;
    }
    case LtlOp::Next: {
      Valuation s = evaluate(*f.lhs, w, ap);
      Valuation v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = s[w.succ(i)];
      return v;
    }
    case LtlOp::Until: {
      Valuation a = evaluate(*f.lhs, w, ap);
      Valuation b = evaluate(*f.rhs, w, ap);
      Valuation v(n, 0);
      for (std::size_t pass = 0; pass <= n; ++pass) {
        bool changed = false;
        Valuation next(n);
        for (std::size_t i = 0; i < n; ++i) {
          next[i] = b[i] || (a[i] && v[w.succ(i)]);
          changed |= next[i] != v[i];
        }
        v.swap(next);
        if (!changed) break;
      }
      return v;
    }
    case LtlOp::Eventually: {
      Valuation s = evaluate(*f.lhs, w, ap);
      Valuation v(n, 0);
      for (std::size_t pass = 0; pass <= n; ++pass) {
        bool changed = false;
        Valuation next(n);
        for (std::size_t i = 0; i < n; ++i) {
          next[i] = s[i] || v[w.succ(i)];
          changed |= next[i] != v[i];
        }
        v.swap(next);
        if (!changed) break;
      }
      return v;
    }
    case LtlOp::Always: {
      Valuation s = evaluate(*f.lhs, w, ap);
      Valuation v(n, 1);
      for (std::size_t pass = 0; pass <= n; ++pass) {
        bool changed = false;
        Valuation next(n);
        for (std::size_t i = 0; i < n; ++i) {
          next[i] = s[i] && v[w.succ(i)];
          changed |= next[i] != v[i];
        }
        v.swap(next);
        if (!changed) break;
      }
      return v;
    }
  }
  throw ValidationError("corrupt formula node");
}

}  // namespace

bool holds_on_lasso(const Formula& f, const Lasso& w, const Alphabet& ap) {
  if (w.period.empty()) throw ValidationError("lasso period must be non-empty");
  for (const auto& a : atoms_of(f)) ap.index_of(a);  // precondition: atoms declared
  return evaluate(f, w, ap)[0] != 0;
}

}  // namespace specsynth
