#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specsynth/errors.hpp"
#include "specsynth/ltl.hpp"
#include "specsynth/rng.hpp"

#include "oracles.hpp"

using namespace specsynth;

namespace {
const Alphabet kGridAp({"target1", "target2", "user", "obs"});
const char* kPhi1 = "F target1 & G F target2 & G F user & (!user U target2) & G !obs";

Lasso lasso(std::vector<std::vector<std::string>> prefix,
            std::vector<std::vector<std::string>> period, const Alphabet& ap) {
  Lasso w;
  for (auto& s : prefix) w.prefix.push_back(ap.mask_of(s));
  for (auto& s : period) w.period.push_back(ap.mask_of(s));
  return w;
}
}  // namespace

TEST_CASE("parse: literals and atoms") {
  CHECK(parse_ltl("true")->op == LtlOp::True);
  auto f = parse_ltl("a U b");
  CHECK(f->op == LtlOp::Until);
  CHECK(f->lhs->op == LtlOp::Atom);
  CHECK(f->lhs->atom == "a");
  CHECK(f->rhs->atom == "b");
  CHECK(equal(parse_ltl(to_string(f)), f));
}

TEST_CASE("parse: phi1 is a five-conjunct tree") {
  auto f = parse_ltl(kPhi1);
  auto parts = conjuncts_of(f);
  REQUIRE(parts.size() == 5);
  CHECK(parts[0]->op == LtlOp::Eventually);
  CHECK(parts[1]->op == LtlOp::Always);
  CHECK(parts[3]->op == LtlOp::Until);
  CHECK(parts[3]->lhs->op == LtlOp::Not);
  CHECK(parts[4]->op == LtlOp::Always);
  CHECK(equal(parse_ltl(to_string(f)), f));
}

TEST_CASE("parse: precedence and associativity") {
  // unary > U > & > |
  CHECK(equal(parse_ltl("a U b & c"), parse_ltl("(a U b) & c")));
  CHECK(equal(parse_ltl("a & b | c"), parse_ltl("(a & b) | c")));
  CHECK(equal(parse_ltl("!a U b"), parse_ltl("(!a) U b")));
  CHECK(equal(parse_ltl("F a & G b"), parse_ltl("(F a) & (G b)")));
  // U is right-associative
  CHECK(equal(parse_ltl("a U b U c"), parse_ltl("a U (b U c)")));
  CHECK_FALSE(equal(parse_ltl("a U b U c"), parse_ltl("(a U b) U c")));
}

TEST_CASE("parse: errors carry positions") {
  CHECK_THROWS_AS(parse_ltl("a U"), ParseError);
  CHECK_THROWS_AS(parse_ltl("(a & b"), ParseError);
  CHECK_THROWS_AS(parse_ltl("a @ b"), ParseError);
  CHECK_THROWS_AS(parse_ltl(""), ParseError);
  CHECK_THROWS_AS(parse_ltl("a b"), ParseError);
  CHECK_THROWS_AS(parse_ltl("false"), ParseError);
  try {
    parse_ltl("a @ b");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
  }
}

TEST_CASE("parse: roundtrip on random formulas") {
  Rng rng(41);
  const std::vector<std::string> atoms = {"a", "b", "c"};
  for (int i = 0; i < 300; ++i) {
    auto f = testing::random_formula(rng, atoms, 5);
    CAPTURE(to_string(f));
    CHECK(equal(parse_ltl(to_string(f)), f));
  }
}

TEST_CASE("holds_on_lasso: basic examples") {
  const Alphabet ap({"a", "p"});
  CHECK(holds_on_lasso(parse_ltl("F a"), lasso({{}}, {{"a"}}, ap), ap));
  CHECK(holds_on_lasso(parse_ltl("G F p"), lasso({}, {{"p"}, {}}, ap), ap));
  CHECK_FALSE(holds_on_lasso(parse_ltl("G p"), lasso({}, {{"p"}, {}}, ap), ap));
  CHECK_FALSE(holds_on_lasso(parse_ltl("F a"), lasso({{"a"}}, {{}}, ap), ap) ==
              false);  // a in the prefix satisfies F a
}

TEST_CASE("holds_on_lasso: phi1 witness") {
  auto phi1 = parse_ltl(kPhi1);
  // Visit target1 once, then alternate target2 and user with no obstacle.
  Lasso w = lasso({{"target1"}}, {{"target2"}, {"user"}}, kGridAp);
  CHECK(holds_on_lasso(phi1, w, kGridAp));
  CHECK(testing::naive_holds(*phi1, w, kGridAp));
  // The verdict is stable under extra unrollings of the loop.
  CHECK(testing::naive_holds(*phi1, testing::unrolled(w, 1), kGridAp));
  CHECK(testing::naive_holds(*phi1, testing::unrolled(w, 2), kGridAp));
  CHECK(holds_on_lasso(phi1, testing::unrolled(w, 2), kGridAp));

  // user strictly before the first target2 breaks the until.
  Lasso bad = lasso({{"target1"}, {"user"}}, {{"target2"}, {"user"}}, kGridAp);
  CHECK_FALSE(holds_on_lasso(phi1, bad, kGridAp));
  // user at the same instant as the first target2 is fine.
  Lasso same = lasso({{"target1"}}, {{"target2", "user"}}, kGridAp);
  CHECK(holds_on_lasso(phi1, same, kGridAp));
  // an obstacle anywhere kills it.
  Lasso obs = lasso({{"target1"}, {"obs"}}, {{"target2"}, {"user"}}, kGridAp);
  CHECK_FALSE(holds_on_lasso(phi1, obs, kGridAp));
}

TEST_CASE("holds_on_lasso: undeclared atom is rejected") {
  const Alphabet ap({"a"});
  CHECK_THROWS_AS(holds_on_lasso(parse_ltl("F zz"), lasso({}, {{}}, ap), ap),
                  ValidationError);
}

TEST_CASE("holds_on_lasso: agrees with the naive evaluator on random inputs") {
  Rng rng(7);
  const Alphabet ap({"a", "b", "c"});
  const std::vector<std::string> atoms = {"a", "b", "c"};
  for (int i = 0; i < 600; ++i) {
    auto f = testing::random_formula(rng, atoms, 4);
    Lasso w = testing::random_lasso(rng, ap);
    CAPTURE(to_string(f));
    CHECK(holds_on_lasso(f, w, ap) == testing::naive_holds(*f, w, ap));
  }
}

TEST_CASE("holds_on_lasso: sugar expansions are semantics-preserving") {
  Rng rng(11);
  const Alphabet ap({"a", "b"});
  const std::vector<std::string> atoms = {"a", "b"};
  for (int i = 0; i < 300; ++i) {
    auto f = testing::random_formula(rng, atoms, 3);
    Lasso w = testing::random_lasso(rng, ap);
    auto ev = Formula::make_eventually(f);
    auto ev_expanded = Formula::make_until(Formula::make_true(), f);
    CHECK(holds_on_lasso(ev, w, ap) == holds_on_lasso(ev_expanded, w, ap));
    auto alw = Formula::make_always(f);
    auto alw_expanded = Formula::make_not(
        Formula::make_eventually(Formula::make_not(f)));
    CHECK(holds_on_lasso(alw, w, ap) == holds_on_lasso(alw_expanded, w, ap));
  }
}

TEST_CASE("holds_on_lasso: stuttering and rotating the period") {
  Rng rng(13);
  const Alphabet ap({"a", "b"});
  const std::vector<std::string> atoms = {"a", "b"};
  for (int i = 0; i < 200; ++i) {
    auto f = testing::random_formula(rng, atoms, 3);
    Lasso w = testing::random_lasso(rng, ap);
    const bool base = holds_on_lasso(f, w, ap);

    Lasso stutter = w;
    for (int k = 0; k < 2; ++k)
      stutter.period.insert(stutter.period.end(), w.period.begin(), w.period.end());
    CHECK(holds_on_lasso(f, stutter, ap) == base);

    const std::size_t rot = rng.below(w.period.size());
    Lasso rotated = w;
    for (std::size_t r = 0; r < rot; ++r) {
      rotated.prefix.push_back(rotated.period.front());
      rotated.period.erase(rotated.period.begin());
      rotated.period.push_back(rotated.prefix.back());
    }
    CHECK(holds_on_lasso(f, rotated, ap) == base);
  }
}

TEST_CASE("propositional evaluation and classification") {
  const Alphabet ap({"a", "b"});
  CHECK(is_propositional(*parse_ltl("a & !b | true")));
  CHECK_FALSE(is_propositional(*parse_ltl("a U b")));
  CHECK(eval_propositional(*parse_ltl("a & !b"), ap.mask_of({"a"}), ap));
  CHECK_FALSE(eval_propositional(*parse_ltl("a & !b"), ap.mask_of({"a", "b"}), ap));
  CHECK_THROWS_AS(eval_propositional(*parse_ltl("F a"), 0, ap), ValidationError);
}
