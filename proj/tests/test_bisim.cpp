#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "attn/bisim.hpp"
#include "attn/document.hpp"
#include "support/generators.hpp"

using namespace attn;
using attn::testing::Rng;

namespace {

const TaskDocument& muddy() {
  static const TaskDocument doc = load_document(attn::testing::fixture("muddy.task"));
  return doc;
}

AttentionState pointed(AttentionState s, std::size_t at) {
  s.actual = at;
  return s;
}

}  // namespace

TEST_CASE("every state is bisimilar to itself") {
  auto sig = attn::testing::small_signature(2, 2, 2);
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const AttentionState s = attn::testing::random_state(rng, sig, 5);
    auto z = bisimilar(s, s);
    REQUIRE(z);
    for (std::size_t w = 0; w < s.world_count(); ++w) {
      CHECK(std::find(z->pairs.begin(), z->pairs.end(), std::make_pair(w, w)) != z->pairs.end());
    }
  }
}

TEST_CASE("attention values separate worlds") {
  auto sig = Signature::make({"i"}, 3, {"p"});
  AttentionState a;
  a.sig = sig;
  a.worlds = {"w"};
  a.relations = {Partition::total(1)};
  a.valuation = {{true}};
  a.attention = {{1}};
  AttentionState b = a;
  b.attention = {{2}};
  CHECK_FALSE(bisimilar(a, b));
  CHECK_FALSE(kripke_bisimilar(kripke_rendition(a), kripke_rendition(b)));
  CHECK(bisimilar(a, a));
  CHECK_THROWS_AS(bisimilar(a, [&] {
                    AttentionState c = a;
                    c.sig = Signature::make({"j"}, 3, {"p"});
                    return c;
                  }()),
                  SignatureMismatch);
}

TEST_CASE("duplicate worlds collapse") {
  auto sig = Signature::make({"a", "b"}, 2, {"p"});
  AttentionState s;
  s.sig = sig;
  s.worlds = {"w1", "w0"};
  s.relations = {Partition::total(2), Partition::total(2)};
  s.valuation = {{true}, {true}};
  s.attention = {{1, 1}, {2, 2}};
  const AttentionState c = contract(s);
  CHECK(c.world_count() == 1);
  CHECK(c.worlds[0] == "w0");
  CHECK(bisimilar(s, c));
}

TEST_CASE("muddy children state has no redundant world") {
  const AttentionState& s = muddy().state("muddy");
  CHECK(contract(s).world_count() == 7);
}

TEST_CASE("contraction is minimal, idempotent and truth preserving") {
  auto sig = attn::testing::small_signature(2, 2, 2);
  Rng rng(4);
  for (int k = 0; k < 60; ++k) {
    const AttentionState s = attn::testing::blow_up(rng, attn::testing::random_state(rng, sig, 4));
    const AttentionState c = contract(s);
    REQUIRE(validate_state(c).empty());
    auto z = bisimilar(s, c);
    REQUIRE(z);
    // Every world maps to exactly one class.
    std::vector<int> images(s.world_count(), 0);
    for (auto [u, v] : z->pairs) ++images[u];
    CHECK(std::all_of(images.begin(), images.end(), [](int n) { return n == 1; }));
    for (std::size_t u = 0; u < c.world_count(); ++u) {
      for (std::size_t v = u + 1; v < c.world_count(); ++v) CHECK_FALSE(bisimilar(pointed(c, u), pointed(c, v)));
    }
    const AttentionState cc = contract(c);
    CHECK(cc.worlds == c.worlds);
    CHECK(cc.relations == c.relations);
    CHECK(cc.attention == c.attention);
    for (int j = 0; j < 30; ++j) {
      const Formula f = attn::testing::random_formula(rng, *sig, 3, 7);
      CHECK(check(s, f) == check(c, f));
    }
  }
}

TEST_CASE("bisimilar states satisfy the same formulas") {
  auto sig = attn::testing::small_signature(2, 2, 2);
  Rng rng(9);
  for (int k = 0; k < 30; ++k) {
    const AttentionState s = attn::testing::random_state(rng, sig, 4);
    const AttentionState t = attn::testing::blow_up(rng, s);
    REQUIRE(bisimilar(s, t));
    REQUIRE(kripke_bisimilar(kripke_rendition(s), kripke_rendition(t)));
    for (int j = 0; j < 200; ++j) {
      const Formula f = attn::testing::random_formula(rng, *sig, 3, 8);
      CHECK(check(s, f) == check(t, f));
    }
  }
}

TEST_CASE("witnesses satisfy the atoms and forth clauses") {
  auto sig = attn::testing::small_signature(2, 1, 1);
  Rng rng(12);
  for (int k = 0; k < 200; ++k) {
    const AttentionState s = attn::testing::random_state(rng, sig, 3);
    const AttentionState t = attn::testing::random_state(rng, sig, 3);
    auto z = bisimilar(s, t);
    if (!z) continue;
    for (auto [u, v] : z->pairs) {
      CHECK(s.valuation[u] == t.valuation[v]);
      for (std::size_t a = 0; a < 2; ++a) {
        CHECK(s.attention[a][u] == t.attention[a][v]);
        for (std::size_t u2 = 0; u2 < s.world_count(); ++u2) {
          if (!s.relations[a].related(u, u2)) continue;
          bool forth = false;
          for (auto [x, y] : z->pairs) forth |= (x == u2 && t.relations[a].related(v, y));
          CHECK(forth);
        }
      }
    }
  }
}

TEST_CASE("updates respect bisimilarity") {
  auto sig = attn::testing::small_signature(2, 2, 2);
  Rng rng(31);
  int compared = 0;
  for (int k = 0; k < 300; ++k) {
    const AttentionState s = attn::testing::random_state(rng, sig, 4);
    const AttentionState t = attn::testing::blow_up(rng, s);
    const AttentionAction x = attn::testing::random_action(rng, sig, {});
    if (!applicable(s, x)) continue;
    AttentionState us, ut;
    try {
      us = attention_update(s, x);
    } catch (const IllFormedResult&) {
      CHECK_THROWS_AS(attention_update(t, x), IllFormedResult);
      continue;
    }
    ut = attention_update(t, x);
    CHECK(bisimilar(us, ut));
    ++compared;
  }
  CHECK(compared > 100);
}

TEST_CASE("kripke bisimulation notices attention atoms") {
  const AttentionState& s = muddy().state("muddy");
  const EpistemicState k = kripke_rendition(s);
  CHECK(kripke_bisimilar(k, k));
  EpistemicState changed = k;
  changed.valuation[k.actual][s.sig->att_eq_slot(0, 2)] = true;
  CHECK_FALSE(kripke_bisimilar(k, changed));
}
