#include "attn/actions.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "attn/bisim.hpp"

namespace attn {

NotApplicable::NotApplicable(std::string action, std::optional<std::size_t> step)
    : Error("action '" + action + "' is not applicable" +
            (step ? " at step " + std::to_string(*step) : std::string())),
      action_(std::move(action)),
      step_(step) {}

IllFormedResult::IllFormedResult(std::string agent, std::string u, std::string v, std::string w)
    : Error("updated relation of agent '" + agent + "' is not transitive: " + u + " ~ " + v + " ~ " + w +
            " but not " + u + " ~ " + w),
      agent_(std::move(agent)) {}

IllFormedResult::IllFormedResult(std::string agent, const std::string& reason)
    : Error("updated relation of agent '" + agent + "' " + reason), agent_(std::move(agent)) {}

CostLookupMiss::CostLookupMiss(const std::string& agent, const Formula& question, const std::string& event)
    : Error("no cost for agent '" + agent + "' asking " + to_string(question) + " in event '" + event + "'") {}

std::optional<unsigned> CostTable::lookup(std::size_t agent, const Formula& question, std::size_t component) const {
  if (question.is_top()) return 0u;
  if (agent < entries.size()) {
    const CostEntry* unrestricted = nullptr;
    for (const auto& e : entries[agent]) {
      if (!(e.question == question)) continue;
      if (e.component) {
        if (*e.component == component) return e.cost;
      } else if (!unrestricted) {
        unrestricted = &e;
      }
    }
    if (unrestricted) return unrestricted->cost;
  }
  return effective_default(agent);
}

std::optional<unsigned> CostTable::effective_default(std::size_t agent) const {
  if (agent < agent_default.size() && agent_default[agent]) return agent_default[agent];
  return default_cost;
}

CostTable CostTable::uniform(std::size_t agents, unsigned cost) {
  CostTable t;
  t.entries.resize(agents);
  t.agent_default.resize(agents);
  t.default_cost = cost;
  return t;
}

namespace {

std::optional<std::size_t> index_of(const std::vector<std::string>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

std::optional<std::size_t> AttentionActionModel::event_index(std::string_view name) const {
  return index_of(events, name);
}

std::vector<Partition> AttentionActionModel::components() const {
  std::vector<Partition> out;
  for (std::size_t a = 0; a < q.size(); ++a) out.push_back(join(q[a], qstar[a]));
  return out;
}

EventRelation EventRelation::from_partition(const Partition& p) {
  EventRelation r(p.size());
  for (std::size_t a = 0; a < p.size(); ++a) {
    for (std::size_t b = 0; b < p.size(); ++b) r.set(a, b, p.related(a, b));
  }
  return r;
}

std::optional<Partition> EventRelation::as_partition() const {
  std::vector<std::size_t> labels(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    if (!related(a, a)) return std::nullopt;
    labels[a] = a;
    for (std::size_t b = 0; b < a; ++b) {
      if (related(a, b)) {
        labels[a] = labels[b];
        break;
      }
    }
  }
  auto p = Partition::from_labels(labels);
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) {
      if (related(a, b) != p.related(a, b)) return std::nullopt;
    }
  }
  return p;
}

std::optional<std::size_t> EpistemicAction::event_index(std::string_view name) const { return index_of(events, name); }

bool EpistemicAction::without_postconditions() const {
  for (const auto& entries : post) {
    for (const auto& [atom, value] : entries) {
      if (!(atom == value)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

void check_names(const std::vector<std::string>& names, const char* what, Diagnostics& d) {
  if (names.empty()) d.errors.push_back(std::string("no ") + what + "s");
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) d.errors.push_back(std::string("duplicate ") + what + " '" + n + "'");
  }
}

void check_formula(const Formula& f, const Signature& sig, const std::string& where, Diagnostics& d) {
  for (const auto& e : validation_errors(f, sig)) d.errors.push_back(where + ": " + e);
}

/// Is q ∪ qstar transitive.
bool union_transitive(const Partition& q, const Partition& qstar) {
  const Partition joined = join(q, qstar);
  for (std::size_t a = 0; a < q.size(); ++a) {
    for (std::size_t b = 0; b < q.size(); ++b) {
      if (joined.related(a, b) && !q.related(a, b) && !qstar.related(a, b)) return false;
    }
  }
  return true;
}

}  // namespace

Diagnostics validate_action(const AttentionAction& x) {
  Diagnostics d;
  if (!x.model || !x.model->sig) {
    d.errors.push_back("action '" + x.name + "' has no model");
    return d;
  }
  const AttentionActionModel& m = *x.model;
  const Signature& sig = *m.sig;
  const std::size_t ne = m.events.size();
  check_names(m.events, "event", d);
  if (m.q.size() != sig.agent_count() || m.qstar.size() != sig.agent_count()) {
    d.errors.push_back("expected Q and Q* for every agent");
    return d;
  }
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    if (m.q[a].size() != ne || m.qstar[a].size() != ne) {
      d.errors.push_back("partitions of agent '" + sig.agents[a] + "' do not cover the events");
    }
  }
  if (m.pre.size() != ne) d.errors.push_back("expected one precondition per event");
  if (x.questions.size() != sig.agent_count()) d.errors.push_back("expected one question per agent");
  if (x.actual >= ne) d.errors.push_back("actual event out of range");
  if (!d.ok()) return d;

  for (std::size_t e = 0; e < ne; ++e) check_formula(m.pre[e], sig, "precondition of '" + m.events[e] + "'", d);
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    check_formula(x.questions[a], sig, "question of '" + sig.agents[a] + "'", d);
  }
  const CostTable& c = m.costs;
  if (c.entries.size() > sig.agent_count() || c.agent_default.size() > sig.agent_count()) {
    d.errors.push_back("cost table mentions more agents than the signature");
    return d;
  }
  const auto comps = m.components();
  for (std::size_t a = 0; a < c.entries.size(); ++a) {
    for (const auto& e : c.entries[a]) {
      check_formula(e.question, sig, "cost entry of '" + sig.agents[a] + "'", d);
      if (e.component && *e.component >= comps[a].block_count()) {
        d.errors.push_back("cost entry of '" + sig.agents[a] + "' for " + to_string(e.question) +
                           " names component " + std::to_string(*e.component) + " which does not exist");
      }
      if (e.question.is_top() && e.cost != 0) {
        d.warnings.push_back("Top cost forced to 0 for agent '" + sig.agents[a] + "'");
      }
    }
  }
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    if (!union_transitive(m.q[a], m.qstar[a])) {
      d.warnings.push_back("Q ∪ Q* of agent '" + sig.agents[a] + "' is not transitive");
    }
    if (!d.ok()) continue;
    for (std::size_t e = 0; e < ne; ++e) {
      if (!c.lookup(a, x.questions[a], comps[a].block_of(e))) {
        d.warnings.push_back("no cost for agent '" + sig.agents[a] + "' asking " + to_string(x.questions[a]) +
                             " in event '" + m.events[e] + "'");
      }
    }
  }
  return d;
}

Diagnostics validate_action(const EpistemicAction& y) {
  Diagnostics d;
  if (!y.sig) {
    d.errors.push_back("action '" + y.name + "' has no signature");
    return d;
  }
  const Signature& sig = *y.sig;
  const std::size_t ne = y.events.size();
  check_names(y.events, "event", d);
  if (y.relations.size() != sig.agent_count()) d.errors.push_back("expected one relation per agent");
  if (y.pre.size() != ne) d.errors.push_back("expected one precondition per event");
  if (y.post.size() != ne) d.errors.push_back("expected one postcondition map per event");
  if (y.actual.empty()) d.errors.push_back("no designated event");
  for (std::size_t e : y.actual) {
    if (e >= ne) d.errors.push_back("designated event out of range");
  }
  if (!d.ok()) return d;
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    if (y.relations[a].size() != ne) {
      d.errors.push_back("relation of agent '" + sig.agents[a] + "' does not cover the events");
    } else if (!y.relations[a].as_partition()) {
      d.warnings.push_back("relation of agent '" + sig.agents[a] + "' is not an equivalence");
    }
  }
  for (std::size_t e = 0; e < ne; ++e) {
    check_formula(y.pre[e], sig, "precondition of '" + y.events[e] + "'", d);
    std::set<std::size_t> keys;
    for (const auto& [atom, value] : y.post[e]) {
      try {
        if (!keys.insert(atom_slot(sig, atom)).second) {
          d.errors.push_back("duplicate postcondition for " + to_string(atom) + " in '" + y.events[e] + "'");
        }
      } catch (const ValidationError& err) {
        d.errors.push_back("postcondition of '" + y.events[e] + "': " + err.what());
      }
      check_formula(value, sig, "postcondition of '" + y.events[e] + "'", d);
    }
  }
  return d;
}

namespace {

bool costs_positive(const AttentionAction& x) {
  const auto& c = x.model->costs;
  for (std::size_t a = 0; a < x.model->sig->agent_count(); ++a) {
    auto d = c.effective_default(a);
    if (!d || *d == 0) return false;
    if (a < c.entries.size()) {
      for (const auto& e : c.entries[a]) {
        if (!e.question.is_top() && e.cost == 0) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool is_nfl(const AttentionAction& x) {
  for (const auto& qs : x.model->qstar) {
    if (!qs.is_total()) return false;
  }
  return costs_positive(x);
}

bool is_nfl_relaxed(const AttentionAction& x) {
  const auto& m = *x.model;
  for (std::size_t a = 0; a < m.q.size(); ++a) {
    for (std::size_t e = 0; e < m.events.size(); ++e) {
      for (std::size_t f = 0; f < m.events.size(); ++f) {
        if (!m.q[a].related(e, f) && !m.qstar[a].related(e, f)) return false;
      }
    }
  }
  return costs_positive(x);
}

// ---------------------------------------------------------------------------

namespace {

void require_same_signature(const SignaturePtr& a, const SignaturePtr& b) {
  if (!a || !b || !(*a == *b)) throw SignatureMismatch();
}

/// Verifies that a relation given as adjacency rows is an equivalence and
/// returns the partition. Rows are reflexive and symmetric by construction.
Partition close_checked(const std::vector<std::vector<char>>& rows, const std::vector<std::string>& names,
                        const std::string& agent) {
  const std::size_t n = rows.size();
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!rows[u][v] || rows[u] == rows[v]) continue;
      for (std::size_t w = 0; w < n; ++w) {
        if (rows[v][w] && !rows[u][w]) throw IllFormedResult(agent, names[u], names[v], names[w]);
        if (rows[u][w] && !rows[v][w]) throw IllFormedResult(agent, names[v], names[u], names[w]);
      }
    }
  }
  std::vector<std::size_t> labels(n);
  for (std::size_t u = 0; u < n; ++u) {
    labels[u] = static_cast<std::size_t>(std::find(rows[u].begin(), rows[u].end(), 1) - rows[u].begin());
  }
  return Partition::from_labels(labels);
}

std::string pair_name(const std::string& world, const std::string& event) { return "(" + world + "," + event + ")"; }

enum class Answer : std::uint8_t { Yes, No, Unknown };

}  // namespace

bool applicable(const AttentionState& s, const AttentionAction& x) {
  require_same_signature(s.sig, x.model->sig);
  return check(s, x.model->pre[x.actual], s.actual);
}

AttentionState attention_update(const AttentionState& s, const AttentionAction& x) {
  const AttentionActionModel& m = *x.model;
  require_same_signature(s.sig, m.sig);
  const Signature& sig = *s.sig;
  if (!applicable(s, x)) throw NotApplicable(x.name);
  const std::size_t agents = sig.agent_count();
  const std::size_t ne = m.events.size();
  const auto comps = m.components();

  std::vector<std::vector<unsigned>> cost(agents, std::vector<unsigned>(ne));
  std::vector<std::vector<Answer>> answer(agents, std::vector<Answer>(ne));
  for (std::size_t a = 0; a < agents; ++a) {
    const Formula& question = x.questions[a];
    const Formula negated = Formula::negation(question);
    for (std::size_t e = 0; e < ne; ++e) {
      auto c = m.costs.lookup(a, question, comps[a].block_of(e));
      if (!c) throw CostLookupMiss(sig.agents[a], question, m.events[e]);
      cost[a][e] = *c;
      if (entails(sig, m.pre[e], question)) {
        answer[a][e] = Answer::Yes;
      } else if (entails(sig, m.pre[e], negated)) {
        answer[a][e] = Answer::No;
      } else {
        answer[a][e] = Answer::Unknown;
      }
    }
  }

  std::vector<std::vector<char>> pre_ext;
  for (const auto& p : m.pre) pre_ext.push_back(extension(s, p));

  AttentionState out;
  out.sig = s.sig;
  std::vector<std::pair<std::size_t, std::size_t>> source;  // (world, event)
  for (std::size_t w = 0; w < s.world_count(); ++w) {
    for (std::size_t e = 0; e < ne; ++e) {
      if (!pre_ext[e][w]) continue;
      if (w == s.actual && e == x.actual) out.actual = source.size();
      source.emplace_back(w, e);
      out.worlds.push_back(pair_name(s.worlds[w], m.events[e]));
      out.valuation.push_back(s.valuation[w]);
    }
  }
  const std::size_t n = source.size();

  out.attention.assign(agents, std::vector<unsigned>(n));
  for (std::size_t a = 0; a < agents; ++a) {
    auto cuts = [&](std::size_t k) {
      const auto [w, e] = source[k];
      const unsigned att = s.attention[a][w];
      return att != 0 && cost[a][e] <= att;
    };
    std::vector<std::vector<char>> rows(n, std::vector<char>(n, 0));
    for (std::size_t u = 0; u < n; ++u) {
      const auto [w, e] = source[u];
      const bool cut = cuts(u);
      out.attention[a][u] = s.attention[a][w] > cost[a][e] ? s.attention[a][w] - cost[a][e] : 0;
      for (std::size_t v = 0; v < n; ++v) {
        const auto [w2, e2] = source[v];
        if (!s.relations[a].related(w, w2)) continue;
        bool related = m.q[a].related(e, e2);
        if (!related && m.qstar[a].related(e, e2)) related = !cut || answer[a][e] == answer[a][e2];
        if (related && cut != cuts(v)) {
          throw std::logic_error("update branch differs across a related pair for agent " + sig.agents[a]);
        }
        rows[u][v] = related ? 1 : 0;
      }
    }
    out.relations.push_back(close_checked(rows, out.worlds, sig.agents[a]));
  }
  return out;
}

AttentionState apply_sequence(const AttentionState& s, const std::vector<AttentionAction>& xs) {
  AttentionState cur = s;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!applicable(cur, xs[k])) throw NotApplicable(xs[k].name, k);
    cur = attention_update(cur, xs[k]);
  }
  return cur;
}

AttentionAction background_announcement(const AttentionAction& x) {
  const AttentionActionModel& m = *x.model;
  auto bg = std::make_shared<AttentionActionModel>();
  bg->sig = m.sig;
  bg->events = {"e!"};
  bg->q.assign(m.sig->agent_count(), Partition::total(1));
  bg->qstar = bg->q;
  bg->pre = {Formula::any_of(m.pre)};
  bg->costs = m.costs;
  for (auto& row : bg->costs.entries) {
    for (auto& e : row) e.component.reset();
  }
  AttentionAction out;
  out.model = std::move(bg);
  out.questions.assign(m.sig->agent_count(), Formula::top());
  out.actual = 0;
  out.name = x.name + "!";
  return out;
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> applicable_event(const EpistemicState& s, const EpistemicAction& y) {
  require_same_signature(s.sig, y.sig);
  std::optional<std::size_t> found;
  for (std::size_t e : y.actual) {
    if (!check_epistemic(s, y.pre[e], s.actual)) continue;
    if (found) {
      throw Error("designated events '" + y.events[*found] + "' and '" + y.events[e] + "' of action '" + y.name +
                  "' are both applicable");
    }
    found = e;
  }
  return found;
}

EpistemicState product_update(const EpistemicState& s, const EpistemicAction& y) {
  const Signature& sig = *s.sig;
  const auto actual_event = applicable_event(s, y);
  if (!actual_event) throw NotApplicable(y.name);
  const std::size_t ne = y.events.size();
  const std::size_t width = sig.full_atom_count();

  std::vector<std::vector<char>> pre_ext;
  for (const auto& p : y.pre) pre_ext.push_back(extension(s, p));
  // post_ext[e][slot] is the extension of the new value of slot, if changed.
  std::vector<std::vector<std::vector<char>>> post_ext(ne, std::vector<std::vector<char>>(width));
  for (std::size_t e = 0; e < ne; ++e) {
    for (const auto& [atom, value] : y.post[e]) {
      if (atom == value) continue;
      post_ext[e][atom_slot(sig, atom)] = extension(s, value);
    }
  }

  EpistemicState out;
  out.sig = s.sig;
  std::vector<std::pair<std::size_t, std::size_t>> source;
  for (std::size_t w = 0; w < s.world_count(); ++w) {
    for (std::size_t e = 0; e < ne; ++e) {
      if (!pre_ext[e][w]) continue;
      if (w == s.actual && e == *actual_event) out.actual = source.size();
      source.emplace_back(w, e);
      out.worlds.push_back(pair_name(s.worlds[w], y.events[e]));
      std::vector<bool> row = s.valuation[w];
      for (std::size_t slot = 0; slot < width; ++slot) {
        if (!post_ext[e][slot].empty()) row[slot] = post_ext[e][slot][w] != 0;
      }
      out.valuation.push_back(std::move(row));
    }
  }
  const std::size_t n = source.size();
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    std::vector<std::vector<char>> rows(n, std::vector<char>(n, 0));
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        rows[u][v] = s.relations[a].related(source[u].first, source[v].first) &&
                     y.relations[a].related(source[u].second, source[v].second);
      }
    }
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        if (!rows[u][u]) throw IllFormedResult(sig.agents[a], "is not reflexive at " + out.worlds[u]);
        if (rows[u][v] != rows[v][u]) {
          throw IllFormedResult(sig.agents[a], "is not symmetric on " + out.worlds[u] + ", " + out.worlds[v]);
        }
      }
    }
    out.relations.push_back(close_checked(rows, out.worlds, sig.agents[a]));
  }
  return out;
}

}  // namespace attn
