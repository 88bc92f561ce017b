#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "attn/logic.hpp"
#include "attn/models.hpp"
#include "support/generators.hpp"

using namespace attn;
using attn::testing::Rng;

namespace {

SignaturePtr sig_ab() { return Signature::make({"a", "b"}, 3, {"p", "q"}); }

Formula P(const std::string& s) { return parse_formula(s, *sig_ab()); }

}  // namespace

TEST_CASE("signature rejects bad names and duplicates") {
  CHECK_THROWS_AS(Signature::make({"a", "a"}, 1, {"p"}), ValidationError);
  CHECK_THROWS_AS(Signature::make({"K_x"}, 1, {"p"}), ValidationError);
  CHECK_THROWS_AS(Signature::make({}, 1, {"p"}), ValidationError);
  auto sig = Signature::make({"i"}, 15, {"p", "q"});
  CHECK(sig->full_atom_count() == 2 + 32);
  CHECK(sig->att_eq_slot(0, 0) == 2);
  CHECK(sig->att_less_slot(0, 0) == 18);
}

TEST_CASE("parser builds the expected trees") {
  CHECK(P("p & q") == Formula::conjunction(Formula::prop("p"), Formula::prop("q")));
  CHECK(P("~p | q") == Formula::disjunction(Formula::negation(Formula::prop("p")), Formula::prop("q")));
  CHECK(P("K_a p & q") == Formula::conjunction(Formula::know("a", Formula::prop("p")), Formula::prop("q")));
  CHECK(P("(att_a = 2)") == Formula::att_eq("a", 2));
  CHECK(P("(att_b < 3)") == Formula::att_less("b", 3));
  CHECK(P("(att_b > 1)") == Formula::att_greater("b", 1));
  CHECK(P("(att_b >= 1)") == Formula::att_geq("b", 1));
  CHECK(P("F") == Formula::bottom());
  // & binds tighter than |, and implication nests to the right.
  CHECK(P("p | q & p") == P("p | (q & p)"));
  CHECK(P("p -> q -> p") == P("p -> (q -> p)"));
  CHECK(P("p <-> q <-> p") == P("p <-> (q <-> p)"));
  CHECK(P("p & q -> q") == P("(p & q) -> q"));
}

TEST_CASE("parse errors carry a position") {
  auto sig = sig_ab();
  try {
    (void)parse_formula("p & & q", *sig);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse_formula("(p", *sig), ParseError);
  CHECK_THROWS_AS(parse_formula("p q", *sig), ParseError);
  CHECK_THROWS_AS(parse_formula("(att_a = )", *sig), ParseError);
  CHECK_THROWS_AS(parse_formula("", *sig), ParseError);
}

TEST_CASE("validation against the signature") {
  auto sig = sig_ab();
  CHECK_THROWS_AS(parse_formula("r", *sig), ValidationError);
  CHECK_THROWS_AS(parse_formula("K_z p", *sig), ValidationError);
  CHECK_THROWS_AS(parse_formula("(att_a = 4)", *sig), ValidationError);
  CHECK_NOTHROW(parse_formula("(att_a = 3)", *sig));
  CHECK_NOTHROW(parse_formula("(att_a < 0)", *sig));
  const Formula unchecked = parse_formula("K_z r");
  CHECK(validation_errors(unchecked, *sig).size() == 2);
}

TEST_CASE("modal depth") {
  CHECK(modal_depth(P("p")) == 0);
  CHECK(modal_depth(P("K_a K_b p")) == 2);
  CHECK(modal_depth(P("K_a p & p")) == 1);
  CHECK(modal_depth(P("K_a (p & K_b q) | K_b p")) == 2);
}

TEST_CASE("printing round-trips through the parser") {
  auto sig = sig_ab();
  Rng rng(11);
  for (int k = 0; k < 500; ++k) {
    const Formula f = attn::testing::random_formula(rng, *sig, 3, 8);
    const std::string text = to_string(f);
    INFO(text);
    CHECK(parse_formula(text, *sig) == f);
  }
}

TEST_CASE("validity examples") {
  auto sig = sig_ab();
  CHECK(is_valid(*sig, P("p & q -> p")));
  CHECK(is_valid(*sig, P("(att_a = 2) -> (att_a < 3)")));
  CHECK_FALSE(is_valid(*sig, P("T -> K_a p")));
  CHECK(is_valid(*sig, P("(att_a = 3) -> K_a (att_a = 3)")));
  CHECK_FALSE(is_valid(*sig, P("(att_a = 3) -> K_b (att_a = 3)")));
  CHECK(is_valid(*sig, P("~(att_a < 0)")));
  CHECK(is_valid(*sig, P("(att_a < 3) | ~(att_a < 3)")));
  CHECK(is_valid(*sig, P("K_a p | ~K_a p")));
  CHECK_FALSE(is_valid(*sig, P("K_a p -> K_b p")));
}

TEST_CASE("entailment examples") {
  auto sig = Signature::make({"i"}, 15, {"p", "q"});
  auto f = [&](const char* s) { return parse_formula(s, *sig); };
  CHECK(entails(*sig, f("(p -> q) & (K_i p | K_i ~p)"), f("p -> q")));
  CHECK_FALSE(entails(*sig, f("p & ~q"), f("p -> q")));
  CHECK(entails(*sig, f("K_i p"), f("T")));
  CHECK(entails(*sig, f("F"), f("p")));
  CHECK_FALSE(entails(*sig, f("(p -> q) & (K_i p | K_i ~p)"), f("p")));
}

TEST_CASE("every axiom instance is valid") {
  for (unsigned bound : {0u, 1u, 2u, 3u}) {
    auto sig = Signature::make({"a", "b"}, bound, {"p", "q"});
    for (const Formula& ax : attn::testing::axiom_instances(*sig)) {
      INFO(to_string(ax));
      CHECK(is_valid(*sig, ax));
    }
  }
}

TEST_CASE("tableau models satisfy their formula") {
  auto sig = Signature::make({"a", "b"}, 2, {"p", "q"});
  Rng rng(5);
  int satisfiable = 0;
  for (int k = 0; k < 300; ++k) {
    const Formula f = attn::testing::random_formula(rng, *sig, 2, 7);
    auto m = find_model(*sig, f);
    if (!m) continue;
    ++satisfiable;
    const AttentionState s = from_tableau_model(sig, *m);
    INFO(to_string(f));
    REQUIRE(validate_state(s).empty());
    CHECK(check(s, f));
  }
  CHECK(satisfiable > 100);
}

TEST_CASE("small countermodels refute validity") {
  auto sig = Signature::make({"a", "b"}, 2, {"p", "q"});
  Rng rng(17);
  for (int k = 0; k < 150; ++k) {
    const Formula f = attn::testing::random_formula(rng, *sig, 2, 6);
    attn::testing::SmallModelOracle oracle(*sig, f);
    INFO(to_string(f));
    if (oracle.has_countermodel()) CHECK_FALSE(is_valid(*sig, f));
  }
}

TEST_CASE("entailment is safe to query concurrently") {
  auto sig = sig_ab();
  std::vector<Formula> fs;
  Rng rng(3);
  for (int k = 0; k < 64; ++k) fs.push_back(attn::testing::random_formula(rng, *sig, 1, 5));
  std::vector<char> serial(fs.size()), parallel(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k) serial[k] = entails(*sig, fs[k], fs[(k + 1) % fs.size()]);
#pragma omp parallel for
  for (long k = 0; k < static_cast<long>(fs.size()); ++k) {
    const auto u = static_cast<std::size_t>(k);
    parallel[u] = entails(*sig, fs[u], fs[(u + 1) % fs.size()]);
  }
  CHECK(serial == parallel);
}
