#pragma once

// Random instances and brute-force oracles shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "attn/actions.hpp"
#include "attn/bisim.hpp"
#include "attn/document.hpp"
#include "attn/models.hpp"
#include "attn/planner.hpp"

namespace attn::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline std::string fixture(const std::string& name) { return std::string(ATTN_FIXTURE_DIR) + "/" + name; }

inline SignaturePtr small_signature(std::size_t agents, unsigned bound, std::size_t atoms) {
  const std::vector<std::string> agent_names{"a", "b", "c"};
  const std::vector<std::string> atom_names{"p", "q", "r"};
  return Signature::make({agent_names.begin(), agent_names.begin() + static_cast<long>(agents)}, bound,
                         {atom_names.begin(), atom_names.begin() + static_cast<long>(atoms)});
}

/// Random formula of modal depth at most `depth`.
inline Formula random_formula(Rng& rng, const Signature& sig, std::size_t depth, std::size_t size = 4) {
  if (size <= 1 || coin(rng, 0.25)) {
    const std::size_t k = pick(rng, 10);
    if (k == 0) return Formula::top();
    if (k <= 5 && sig.prop_count() > 0) return Formula::prop(sig.atoms[pick(rng, sig.prop_count())]);
    const std::string& ag = sig.agents[pick(rng, sig.agent_count())];
    const auto n = static_cast<unsigned>(pick(rng, sig.attention_bound + 1));
    return coin(rng) ? Formula::att_eq(ag, n) : Formula::att_less(ag, n);
  }
  const std::size_t k = pick(rng, depth > 0 ? 5 : 3);
  switch (k) {
    case 0:
      return Formula::negation(random_formula(rng, sig, depth, size - 1));
    case 1:
    case 2: {
      const std::size_t left = 1 + pick(rng, size - 1);
      Formula l = random_formula(rng, sig, depth, left);
      Formula r = random_formula(rng, sig, depth, size - left);
      return coin(rng) ? Formula::conjunction(l, r) : Formula::disjunction(l, r);
    }
    default:
      return Formula::know(sig.agents[pick(rng, sig.agent_count())], random_formula(rng, sig, depth - 1, size - 1));
  }
}

/// Random proposition-only formula (no attention atoms).
inline Formula random_prop_formula(Rng& rng, const Signature& sig, std::size_t depth, std::size_t size = 4) {
  if (size <= 1 || coin(rng, 0.3)) {
    if (coin(rng, 0.1)) return Formula::top();
    return Formula::prop(sig.atoms[pick(rng, sig.prop_count())]);
  }
  const std::size_t k = pick(rng, depth > 0 ? 4 : 3);
  if (k == 0) return Formula::negation(random_prop_formula(rng, sig, depth, size - 1));
  if (k == 3) return Formula::know(sig.agents[pick(rng, sig.agent_count())], random_prop_formula(rng, sig, depth - 1, size - 1));
  const std::size_t left = 1 + pick(rng, size - 1);
  return Formula::conjunction(random_prop_formula(rng, sig, depth, left), random_prop_formula(rng, sig, depth, size - left));
}

inline Partition random_partition(Rng& rng, std::size_t n) {
  std::vector<std::size_t> labels(n);
  for (auto& l : labels) l = pick(rng, n);
  return Partition::from_labels(labels);
}

inline AttentionState random_state(Rng& rng, const SignaturePtr& sig, std::size_t max_worlds) {
  AttentionState s;
  s.sig = sig;
  const std::size_t n = 1 + pick(rng, max_worlds);
  for (std::size_t w = 0; w < n; ++w) s.worlds.push_back("w" + std::to_string(w));
  for (std::size_t a = 0; a < sig->agent_count(); ++a) {
    Partition p = random_partition(rng, n);
    std::vector<unsigned> per_block(p.block_count());
    for (auto& v : per_block) v = static_cast<unsigned>(pick(rng, sig->attention_bound + 1));
    std::vector<unsigned> att(n);
    for (std::size_t w = 0; w < n; ++w) att[w] = per_block[p.block_of(w)];
    s.relations.push_back(std::move(p));
    s.attention.push_back(std::move(att));
  }
  for (std::size_t w = 0; w < n; ++w) {
    std::vector<bool> row(sig->prop_count());
    for (std::size_t p = 0; p < row.size(); ++p) row[p] = coin(rng);
    s.valuation.push_back(std::move(row));
  }
  s.actual = pick(rng, n);
  return s;
}

/// A state bisimilar to s: every world is copied 1..3 times (copies share
/// all blocks) and the result is shuffled.
inline AttentionState blow_up(Rng& rng, const AttentionState& s) {
  std::vector<std::size_t> origin;
  for (std::size_t w = 0; w < s.world_count(); ++w) {
    const std::size_t copies = 1 + pick(rng, 3);
    for (std::size_t c = 0; c < copies; ++c) origin.push_back(w);
  }
  std::shuffle(origin.begin(), origin.end(), rng);
  AttentionState out;
  out.sig = s.sig;
  for (std::size_t k = 0; k < origin.size(); ++k) {
    out.worlds.push_back("v" + std::to_string(k));
    out.valuation.push_back(s.valuation[origin[k]]);
  }
  for (std::size_t a = 0; a < s.relations.size(); ++a) {
    std::vector<std::size_t> labels;
    std::vector<unsigned> att;
    for (std::size_t w : origin) {
      labels.push_back(s.relations[a].block_of(w));
      att.push_back(s.attention[a][w]);
    }
    out.relations.push_back(Partition::from_labels(labels));
    out.attention.push_back(std::move(att));
  }
  for (std::size_t k = 0; k < origin.size(); ++k) {
    if (origin[k] == s.actual) {
      out.actual = k;
      break;
    }
  }
  return out;
}

struct ActionShape {
  std::size_t max_events = 3;
  bool nfl = false;
  bool all_top_questions = false;
  /// Keep Q_i ∪ Q*_i transitive for every agent.
  bool transitive_union = true;
};

/// Random attention action whose preconditions are propositional or
/// attention literals and their Boolean combinations, with occasional
/// knowledge operators.
inline AttentionAction random_action(Rng& rng, const SignaturePtr& sig, const ActionShape& shape,
                                     const std::string& name = "X") {
  auto m = std::make_shared<AttentionActionModel>();
  m->sig = sig;
  const std::size_t ne = 1 + pick(rng, shape.max_events);
  for (std::size_t e = 0; e < ne; ++e) {
    m->events.push_back("e" + std::to_string(e));
    m->pre.push_back(coin(rng, 0.15) ? Formula::top() : random_formula(rng, *sig, 1, 3));
  }
  for (std::size_t a = 0; a < sig->agent_count(); ++a) {
    for (;;) {
      Partition q = random_partition(rng, ne);
      Partition qs = shape.nfl ? Partition::total(ne) : random_partition(rng, ne);
      bool ok = true;
      if (shape.transitive_union) {
        const Partition j = join(q, qs);
        for (std::size_t x = 0; x < ne && ok; ++x) {
          for (std::size_t y = 0; y < ne && ok; ++y) {
            if (j.related(x, y) && !q.related(x, y) && !qs.related(x, y)) ok = false;
          }
        }
      }
      if (!ok) continue;
      m->q.push_back(std::move(q));
      m->qstar.push_back(std::move(qs));
      break;
    }
  }
  const unsigned hi = sig->attention_bound + 1;
  m->costs = CostTable::uniform(sig->agent_count(), shape.nfl ? 1 + static_cast<unsigned>(pick(rng, hi))
                                                              : static_cast<unsigned>(pick(rng, hi + 1)));
  AttentionAction x;
  x.name = name;
  for (std::size_t a = 0; a < sig->agent_count(); ++a) {
    if (shape.all_top_questions || coin(rng, 0.2)) {
      x.questions.push_back(Formula::top());
    } else {
      x.questions.push_back(random_formula(rng, *sig, 1, 3));
      if (coin(rng, 0.5)) {
        const unsigned lo = shape.nfl ? 1 : 0;
        m->costs.entries[a].push_back({x.questions.back(), std::nullopt, lo + static_cast<unsigned>(pick(rng, hi))});
      }
    }
  }
  x.model = std::move(m);
  x.actual = pick(rng, ne);
  return x;
}

/// Random task over NFL actions named x0, x1, ... with a random goal.
inline PlanningTask random_nfl_task(Rng& rng, const SignaturePtr& sig, std::size_t max_worlds, std::size_t max_actions) {
  PlanningTask t;
  t.initial = random_state(rng, sig, max_worlds);
  ActionShape shape;
  shape.nfl = true;
  const std::size_t n = 1 + pick(rng, max_actions);
  for (std::size_t k = 0; k < n; ++k) t.actions.push_back(random_action(rng, sig, shape, "x" + std::to_string(k)));
  t.goal = random_formula(rng, *sig, 2, 5);
  return t;
}

/// Random epistemic action without postconditions and with equivalence
/// relations.
inline EpistemicAction random_nopost_action(Rng& rng, const SignaturePtr& sig, std::size_t max_events) {
  EpistemicAction y;
  y.sig = sig;
  y.name = "Y";
  const std::size_t ne = 1 + pick(rng, max_events);
  for (std::size_t e = 0; e < ne; ++e) {
    y.events.push_back("e" + std::to_string(e));
    y.pre.push_back(coin(rng, 0.15) ? Formula::top() : random_formula(rng, *sig, 1, 3));
    y.post.emplace_back();
  }
  for (std::size_t a = 0; a < sig->agent_count(); ++a) y.relations.push_back(EventRelation::from_partition(random_partition(rng, ne)));
  y.actual = {pick(rng, ne)};
  return y;
}

// ---------------------------------------------------------------------------
// Exhaustive countermodel search over attention states with at most three
// worlds. Formulas are compiled to postfix code over world bitmasks.

class SmallModelOracle {
 public:
  SmallModelOracle(const Signature& sig, const Formula& f) : sig_(sig) {
    compile(f);
    std::set<std::string> atoms, agents;
    collect(f, atoms, agents);
    for (const auto& a : atoms) props_.push_back(*sig.atom_index(a));
    for (const auto& a : agents) agents_.push_back(*sig.agent_index(a));
  }

  /// True if some attention state with at most max_worlds worlds falsifies
  /// the formula at some world.
  bool has_countermodel(std::size_t max_worlds = 3) {
    for (std::size_t n = 1; n <= max_worlds; ++n) {
      n_ = n;
      block_.assign(sig_.agent_count(), std::vector<std::size_t>(n, 0));
      att_.assign(sig_.agent_count(), std::vector<unsigned>(n, 0));
      val_.assign(sig_.prop_count(), 0);
      if (partitions(0)) return true;
    }
    return false;
  }

 private:
  enum class Op : std::uint8_t { Top, Prop, Eq, Less, Not, And, Know };
  struct Ins {
    Op op;
    std::size_t arg;
    unsigned n;
  };

  void compile(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Top: code_.push_back({Op::Top, 0, 0}); break;
      case FormulaKind::Prop: code_.push_back({Op::Prop, *sig_.atom_index(f.name()), 0}); break;
      case FormulaKind::AttEq: code_.push_back({Op::Eq, *sig_.agent_index(f.name()), f.value()}); break;
      case FormulaKind::AttLess: code_.push_back({Op::Less, *sig_.agent_index(f.name()), f.value()}); break;
      case FormulaKind::Not:
        compile(f.lhs());
        code_.push_back({Op::Not, 0, 0});
        break;
      case FormulaKind::And:
        compile(f.lhs());
        compile(f.rhs());
        code_.push_back({Op::And, 0, 0});
        break;
      case FormulaKind::Know:
        compile(f.lhs());
        code_.push_back({Op::Know, *sig_.agent_index(f.name()), 0});
        break;
    }
  }

  static void collect(const Formula& f, std::set<std::string>& atoms, std::set<std::string>& agents) {
    switch (f.kind()) {
      case FormulaKind::Prop: atoms.insert(f.name()); return;
      case FormulaKind::Top: return;
      case FormulaKind::Not: collect(f.lhs(), atoms, agents); return;
      case FormulaKind::And:
        collect(f.lhs(), atoms, agents);
        collect(f.rhs(), atoms, agents);
        return;
      default:
        agents.insert(f.name());
        if (f.kind() == FormulaKind::Know) collect(f.lhs(), atoms, agents);
        return;
    }
  }

  // Restricted-growth strings enumerate the partitions of n worlds.
  bool partitions(std::size_t k) {
    if (k == agents_.size()) return attention(0, 0);
    auto& labels = block_[agents_[k]];
    std::function<bool(std::size_t, std::size_t)> rgs = [&](std::size_t w, std::size_t used) -> bool {
      if (w == n_) return partitions(k + 1);
      for (std::size_t b = 0; b <= used && b < n_; ++b) {
        labels[w] = b;
        if (rgs(w + 1, std::max(used, b + 1))) return true;
      }
      return false;
    };
    labels[0] = 0;
    return rgs(1, 1);
  }

  bool attention(std::size_t k, std::size_t block) {
    if (k == agents_.size()) return valuations(0);
    const std::size_t ag = agents_[k];
    const std::size_t blocks = *std::max_element(block_[ag].begin(), block_[ag].end()) + 1;
    if (block == blocks) return attention(k + 1, 0);
    for (unsigned v = 0; v <= sig_.attention_bound; ++v) {
      for (std::size_t w = 0; w < n_; ++w) {
        if (block_[ag][w] == block) att_[ag][w] = v;
      }
      if (attention(k, block + 1)) return true;
    }
    return false;
  }

  bool valuations(std::size_t k) {
    if (k == props_.size()) return falsified();
    for (unsigned mask = 0; mask < (1u << n_); ++mask) {
      val_[props_[k]] = mask;
      if (valuations(k + 1)) return true;
    }
    return false;
  }

  bool falsified() {
    const unsigned all = (1u << n_) - 1;
    unsigned stack[64];
    std::size_t top = 0;
    for (const Ins& i : code_) {
      switch (i.op) {
        case Op::Top: stack[top++] = all; break;
        case Op::Prop: stack[top++] = val_[i.arg]; break;
        case Op::Eq:
        case Op::Less: {
          unsigned m = 0;
          for (std::size_t w = 0; w < n_; ++w) {
            const unsigned v = att_[i.arg][w];
            if (i.op == Op::Eq ? v == i.n : v < i.n) m |= 1u << w;
          }
          stack[top++] = m;
          break;
        }
        case Op::Not: stack[top - 1] = ~stack[top - 1] & all; break;
        case Op::And:
          --top;
          stack[top - 1] &= stack[top];
          break;
        case Op::Know: {
          const unsigned body = stack[top - 1];
          unsigned m = 0;
          for (std::size_t w = 0; w < n_; ++w) {
            unsigned block = 0;
            for (std::size_t v = 0; v < n_; ++v) {
              if (block_[i.arg][v] == block_[i.arg][w]) block |= 1u << v;
            }
            if ((body & block) == block) m |= 1u << w;
          }
          stack[top - 1] = m;
          break;
        }
      }
    }
    return stack[0] != all;
  }

  const Signature& sig_;
  std::vector<Ins> code_;
  std::vector<std::size_t> props_;
  std::vector<std::size_t> agents_;
  std::size_t n_ = 0;
  std::vector<std::vector<std::size_t>> block_;
  std::vector<std::vector<unsigned>> att_;
  std::vector<unsigned> val_;
};

/// Formulas that must be valid in multi-agent S5 with attention atoms.
inline std::vector<Formula> axiom_instances(const Signature& sig) {
  std::vector<Formula> out;
  const Formula p = Formula::prop(sig.atoms.at(0));
  const Formula q = sig.prop_count() > 1 ? Formula::prop(sig.atoms[1]) : Formula::negation(p);
  const unsigned bound = sig.attention_bound;
  for (const auto& a : sig.agents) {
    const Formula kp = Formula::know(a, p);
    out.push_back(Formula::implication(Formula::know(a, Formula::implication(p, q)), Formula::implication(kp, Formula::know(a, q))));
    out.push_back(Formula::implication(kp, p));
    out.push_back(Formula::implication(kp, Formula::know(a, kp)));
    out.push_back(Formula::implication(Formula::negation(kp), Formula::know(a, Formula::negation(kp))));
    std::vector<Formula> values;
    for (unsigned n = 0; n <= bound; ++n) values.push_back(Formula::att_eq(a, n));
    out.push_back(Formula::any_of(values));
    for (unsigned n = 0; n <= bound; ++n) {
      for (unsigned m = 0; m <= bound; ++m) {
        if (n != m) out.push_back(Formula::negation(Formula::conjunction(Formula::att_eq(a, n), Formula::att_eq(a, m))));
      }
      if (n + 1 <= bound) {
        out.push_back(Formula::equivalence(Formula::att_eq(a, n),
                                           Formula::conjunction(Formula::att_less(a, n + 1),
                                                                Formula::negation(Formula::att_less(a, n)))));
      }
      out.push_back(Formula::implication(Formula::att_eq(a, n), Formula::know(a, Formula::att_eq(a, n))));
    }
    out.push_back(Formula::negation(Formula::att_less(a, 0)));
  }
  return out;
}

}  // namespace attn::testing
