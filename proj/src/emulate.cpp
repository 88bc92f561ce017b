#include "attn/emulate.hpp"

#include <algorithm>
#include <exception>
#include <set>

#include "attn/bisim.hpp"

namespace attn {

AttentionAction from_nopost(const EpistemicAction& y) {
  if (!y.without_postconditions()) throw Error("action '" + y.name + "' has postconditions");
  if (y.actual.size() != 1) throw Error("action '" + y.name + "' must designate exactly one event");
  const Signature& sig = *y.sig;
  auto model = std::make_shared<AttentionActionModel>();
  model->sig = y.sig;
  model->events = y.events;
  model->pre = y.pre;
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    auto p = y.relations[a].as_partition();
    if (!p) throw Error("relation of agent '" + sig.agents[a] + "' in '" + y.name + "' is not an equivalence");
    model->q.push_back(std::move(*p));
    model->qstar.push_back(Partition::discrete(y.events.size()));
  }
  model->costs = CostTable::uniform(sig.agent_count(), 0);
  AttentionAction x;
  x.model = std::move(model);
  x.questions.assign(sig.agent_count(), Formula::top());
  x.actual = y.actual.front();
  x.name = y.name;
  return x;
}

Formula next_value(const std::string& agent, unsigned n, unsigned cost, unsigned bound) {
  const Formula now = Formula::att_eq(agent, n);
  const Formula stays =
      Formula::conjunction(now, Formula::att_eq(agent, n > cost ? n - cost : 0));
  // Coming down from n + cost is only possible when that value exists.
  if (std::size_t{n} + cost > bound) return stays;
  const Formula drops = Formula::conjunction(Formula::negation(now), Formula::att_eq(agent, n + cost));
  return Formula::disjunction(stays, drops);
}

namespace {

enum class Answer : std::uint8_t { Yes, No, Unknown };

Answer answer_of(const Signature& sig, const Formula& pre, const Formula& question) {
  if (entails(sig, pre, question)) return Answer::Yes;
  if (entails(sig, pre, Formula::negation(question))) return Answer::No;
  return Answer::Unknown;
}

}  // namespace

EpistemicAction to_post(const AttentionAction& x) {
  const AttentionActionModel& m = *x.model;
  const Signature& sig = *m.sig;
  const std::size_t agents = sig.agent_count();
  const std::size_t ne = m.events.size();
  const std::size_t profiles = std::size_t{1} << agents;
  const unsigned bound = sig.attention_bound;
  const auto comps = m.components();

  std::vector<std::vector<unsigned>> cost(agents, std::vector<unsigned>(ne));
  std::vector<std::vector<Answer>> answer(agents, std::vector<Answer>(ne));
  for (std::size_t a = 0; a < agents; ++a) {
    for (std::size_t e = 0; e < ne; ++e) {
      auto c = m.costs.lookup(a, x.questions[a], comps[a].block_of(e));
      if (!c) throw CostLookupMiss(sig.agents[a], x.questions[a], m.events[e]);
      cost[a][e] = *c;
      answer[a][e] = answer_of(sig, m.pre[e], x.questions[a]);
    }
  }
  // Agent a is in profile p iff bit (agents - 1 - a) is set, so profile
  // strings enumerate in lexicographic order.
  auto in = [&](std::size_t p, std::size_t a) { return ((p >> (agents - 1 - a)) & 1u) != 0; };

  // An agent can afford its question when its attention reaches
  // threshold = max(cost, 1); at attention 0 nobody learns.
  auto threshold = [&](std::size_t a, std::size_t e) { return std::max(cost[a][e], 1u); };

  EpistemicAction y;
  y.sig = m.sig;
  y.name = x.name;
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t p = 0; p < profiles; ++p) {
      std::string bits;
      std::vector<Formula> conj{m.pre[e]};
      for (std::size_t a = 0; a < agents; ++a) {
        bits += in(p, a) ? '1' : '0';
        const unsigned t = threshold(a, e);
        const std::string& name = sig.agents[a];
        if (in(p, a)) {
          conj.push_back(t > bound ? Formula::bottom() : Formula::att_geq(name, t));
        } else if (t <= bound) {
          conj.push_back(Formula::att_less(name, t));
        }
      }
      if (e == x.actual) y.actual.push_back(y.events.size());
      y.events.push_back(m.events[e] + "_" + bits);
      y.pre.push_back(Formula::all_of(conj));

      std::vector<std::pair<Formula, Formula>> post;
      for (std::size_t a = 0; a < agents; ++a) {
        const std::string& name = sig.agents[a];
        const unsigned c = cost[a][e];
        std::vector<Formula> zero;
        for (unsigned k = 0; k <= std::min(c, bound); ++k) zero.push_back(Formula::att_eq(name, k));
        const Formula becomes_zero = Formula::any_of(zero);
        post.emplace_back(Formula::att_less(name, 0), Formula::bottom());
        post.emplace_back(Formula::att_eq(name, 0), becomes_zero);
        for (unsigned n = 1; n <= bound; ++n) post.emplace_back(Formula::att_eq(name, n), next_value(name, n, c, bound));
        for (unsigned n = 1; n <= bound; ++n) {
          std::vector<Formula> below{becomes_zero};
          for (unsigned j = 1; j < n; ++j) below.push_back(next_value(name, j, c, bound));
          post.emplace_back(Formula::att_less(name, n), Formula::any_of(below));
        }
      }
      y.post.push_back(std::move(post));
    }
  }

  const std::size_t total = ne * profiles;
  for (std::size_t a = 0; a < agents; ++a) {
    EventRelation rel(total);
    for (std::size_t u = 0; u < total; ++u) {
      const std::size_t f = u / profiles;
      const std::size_t pu = u % profiles;
      for (std::size_t v = 0; v < total; ++v) {
        const std::size_t g = v / profiles;
        const std::size_t pv = v % profiles;
        bool related = m.q[a].related(f, g);
        if (!related && m.qstar[a].related(f, g)) {
          related = (!in(pu, a) && !in(pv, a)) || answer[a][f] == answer[a][g];
        }
        rel.set(u, v, related);
      }
    }
    y.relations.push_back(std::move(rel));
  }
  return y;
}

// ---------------------------------------------------------------------------

namespace {

/// Characteristic formulas of every world of s up to the given depth, using
/// only the listed atom slots.
std::vector<Formula> characteristic(const EpistemicState& s, const std::vector<std::size_t>& slots,
                                    std::size_t depth) {
  const Signature& sig = *s.sig;
  std::vector<Formula> chi(s.world_count());
  for (std::size_t w = 0; w < s.world_count(); ++w) {
    std::vector<Formula> lits;
    for (std::size_t slot : slots) {
      Formula a = slot_atom(sig, slot);
      lits.push_back(s.valuation[w][slot] ? a : Formula::negation(a));
    }
    chi[w] = Formula::all_of(lits);
  }
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<Formula> next(s.world_count());
    for (std::size_t w = 0; w < s.world_count(); ++w) {
      std::vector<Formula> parts{chi[w]};
      for (std::size_t a = 0; a < sig.agent_count(); ++a) {
        const Partition& rel = s.relations[a];
        std::set<Formula> seen;
        std::vector<Formula> options;
        for (std::size_t v = 0; v < s.world_count(); ++v) {
          if (rel.related(w, v) && seen.insert(chi[v]).second) options.push_back(chi[v]);
        }
        for (const auto& o : options) {
          parts.push_back(Formula::negation(Formula::know(sig.agents[a], Formula::negation(o))));
        }
        parts.push_back(Formula::know(sig.agents[a], Formula::any_of(options)));
      }
      next[w] = Formula::all_of(parts);
    }
    chi = std::move(next);
  }
  return chi;
}

std::vector<std::size_t> varying_slots(const EpistemicState& a, const EpistemicState& b) {
  std::vector<std::size_t> out;
  const std::size_t width = a.sig->full_atom_count();
  for (std::size_t slot = 0; slot < width; ++slot) {
    const bool first = a.valuation.front()[slot];
    bool varies = false;
    for (const auto& row : a.valuation) varies = varies || row[slot] != first;
    for (const auto& row : b.valuation) varies = varies || row[slot] != first;
    if (varies) out.push_back(slot);
  }
  return out;
}

}  // namespace

std::optional<Formula> distinguishing_formula(const EpistemicState& a, const EpistemicState& b, std::size_t depth) {
  if (!(*a.sig == *b.sig)) throw SignatureMismatch();
  const auto slots = varying_slots(a, b);
  for (std::size_t k = 0; k <= depth; ++k) {
    const Formula fa = characteristic(a, slots, k)[a.actual];
    if (!check_epistemic(b, fa)) return fa;
    const Formula fb = characteristic(b, slots, k)[b.actual];
    if (!check_epistemic(a, fb)) return Formula::negation(fb);
  }
  return std::nullopt;
}

std::vector<EquivalenceResult> check_equivalent_on(const std::vector<AttentionState>& states,
                                                   const AttentionAction& x, const EpistemicAction& y,
                                                   bool parallel) {
  if (!(*x.model->sig == *y.sig)) throw SignatureMismatch();
  std::vector<EquivalenceResult> results(states.size());
  std::vector<std::exception_ptr> errors(states.size());
  auto one = [&](std::size_t k) {
    const AttentionState& s = states[k];
    EquivalenceResult& r = results[k];
    try {
      const EpistemicState ks = kripke_rendition(s);
      const bool x_ok = applicable(s, x);
      bool y_ok = false;
      try {
        y_ok = applicable_event(ks, y).has_value();
      } catch (const SignatureMismatch&) {
        throw;
      } catch (const Error& e) {
        r = {Verdict::NotEquivalent, e.what(), std::nullopt};
        return;
      }
      if (x_ok != y_ok) {
        r = {Verdict::NotEquivalent,
             x_ok ? "attention action applicable, epistemic action not" : "epistemic action applicable, attention action not",
             std::nullopt};
        return;
      }
      if (!x_ok) return;
      AttentionState ux;
      try {
        ux = attention_update(s, x);
      } catch (const IllFormedResult& e) {
        r = {Verdict::Undefined, e.what(), std::nullopt};
        return;
      }
      EpistemicState uy;
      try {
        uy = product_update(ks, y);
      } catch (const IllFormedResult& e) {
        r = {Verdict::NotEquivalent, e.what(), std::nullopt};
        return;
      }
      const EpistemicState kx = kripke_rendition(ux);
      if (kripke_bisimilar(kx, uy)) return;
      r.verdict = Verdict::NotEquivalent;
      r.reason = "results are not bisimilar";
      r.distinguishing = distinguishing_formula(kx, uy);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  const auto n = static_cast<long>(states.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < n; ++k) one(static_cast<std::size_t>(k));
  } else {
    for (long k = 0; k < n; ++k) one(static_cast<std::size_t>(k));
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace attn
