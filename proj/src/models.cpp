#include "attn/models.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace attn {

Partition Partition::discrete(std::size_t n) {
  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  return from_labels(labels);
}

Partition Partition::total(std::size_t n) { return from_labels(std::vector<std::size_t>(n, 0)); }

Partition Partition::from_labels(const std::vector<std::size_t>& labels) {
  Partition p;
  p.block_.resize(labels.size());
  std::vector<std::pair<std::size_t, std::size_t>> seen;  // label -> block
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& e) { return e.first == labels[i]; });
    if (it == seen.end()) {
      seen.emplace_back(labels[i], seen.size());
      p.block_[i] = seen.size() - 1;
    } else {
      p.block_[i] = it->second;
    }
  }
  p.count_ = seen.size();
  return p;
}

Partition Partition::from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks) {
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> labels(n, unset);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw ValidationError("empty block in partition");
    for (std::size_t x : blocks[b]) {
      if (x >= n) throw ValidationError("partition mentions unknown element " + std::to_string(x));
      if (labels[x] != unset) throw ValidationError("element " + std::to_string(x) + " occurs in two blocks");
      labels[x] = b;
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (labels[x] == unset) throw ValidationError("element " + std::to_string(x) + " is in no block");
  }
  return from_labels(labels);
}

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

Partition Partition::from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  UnionFind uf(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw ValidationError("edge mentions unknown element");
    uf.unite(a, b);
  }
  std::vector<std::size_t> labels(n);
  for (std::size_t x = 0; x < n; ++x) labels[x] = uf.find(x);
  return from_labels(labels);
}

std::vector<std::vector<std::size_t>> Partition::blocks() const {
  std::vector<std::vector<std::size_t>> out(count_);
  for (std::size_t x = 0; x < block_.size(); ++x) out[block_[x]].push_back(x);
  return out;
}

Partition join(const Partition& a, const Partition& b) {
  UnionFind uf(a.size());
  auto absorb = [&](const Partition& p) {
    std::vector<std::size_t> first(p.block_count(), static_cast<std::size_t>(-1));
    for (std::size_t x = 0; x < p.size(); ++x) {
      auto& f = first[p.block_of(x)];
      if (f == static_cast<std::size_t>(-1)) f = x;
      uf.unite(f, x);
    }
  };
  absorb(a);
  absorb(b);
  std::vector<std::size_t> labels(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) labels[x] = uf.find(x);
  return Partition::from_labels(labels);
}

// ---------------------------------------------------------------------------

namespace {

std::optional<std::size_t> find_name(const std::vector<std::string>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

template <class State>
void structural_diagnostics(const State& s, std::size_t row_width, std::vector<std::string>& out) {
  if (!s.sig) {
    out.push_back("state has no signature");
    return;
  }
  const std::size_t n = s.worlds.size();
  if (n == 0) out.push_back("state has no worlds");
  std::set<std::string> names;
  for (const auto& w : s.worlds) {
    if (!names.insert(w).second) out.push_back("duplicate world '" + w + "'");
  }
  if (s.actual >= n) out.push_back("actual world out of range");
  if (s.relations.size() != s.sig->agent_count()) {
    out.push_back("expected one relation per agent");
  } else {
    for (std::size_t a = 0; a < s.relations.size(); ++a) {
      if (s.relations[a].size() != n) {
        out.push_back("relation of agent '" + s.sig->agents[a] + "' does not cover the worlds");
      }
    }
  }
  if (s.valuation.size() != n) {
    out.push_back("expected one valuation row per world");
  } else {
    for (std::size_t w = 0; w < n; ++w) {
      if (s.valuation[w].size() != row_width) out.push_back("valuation row of world '" + s.worlds[w] + "' has wrong width");
    }
  }
}

}  // namespace

std::optional<std::size_t> AttentionState::world_index(std::string_view name) const {
  return find_name(worlds, name);
}

std::optional<std::size_t> EpistemicState::world_index(std::string_view name) const {
  return find_name(worlds, name);
}

std::vector<std::string> validate_state(const AttentionState& s) {
  std::vector<std::string> out;
  structural_diagnostics(s, s.sig ? s.sig->prop_count() : 0, out);
  if (!out.empty()) return out;
  const auto& sig = *s.sig;
  if (s.attention.size() != sig.agent_count()) {
    out.push_back("expected one attention row per agent");
    return out;
  }
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    if (s.attention[a].size() != s.world_count()) {
      out.push_back("attention of agent '" + sig.agents[a] + "' does not cover the worlds");
      continue;
    }
    for (std::size_t w = 0; w < s.world_count(); ++w) {
      if (s.attention[a][w] > sig.attention_bound) {
        out.push_back("attention exceeds bound: agent '" + sig.agents[a] + "' at world '" + s.worlds[w] + "' has " +
                      std::to_string(s.attention[a][w]) + " > " + std::to_string(sig.attention_bound));
      }
    }
    for (const auto& block : s.relations[a].blocks()) {
      for (std::size_t w : block) {
        if (s.attention[a][w] != s.attention[a][block.front()]) {
          out.push_back("attention not constant on block: agent '" + sig.agents[a] + "' has " +
                        std::to_string(s.attention[a][block.front()]) + " at '" + s.worlds[block.front()] + "' but " +
                        std::to_string(s.attention[a][w]) + " at '" + s.worlds[w] + "'");
        }
      }
    }
  }
  return out;
}

std::vector<std::string> validate_state(const EpistemicState& s) {
  std::vector<std::string> out;
  structural_diagnostics(s, s.sig ? s.sig->full_atom_count() : 0, out);
  return out;
}

void require_valid(const AttentionState& s) {
  auto d = validate_state(s);
  if (!d.empty()) throw ValidationError(d.front());
}

void require_valid(const EpistemicState& s) {
  auto d = validate_state(s);
  if (!d.empty()) throw ValidationError(d.front());
}

// ---------------------------------------------------------------------------

namespace {

/// Bottom-up evaluation; atom(f) gives the extension of an atomic formula.
template <class AtomFn>
std::vector<char> evaluate(const std::vector<Partition>& relations, const Signature& sig, std::size_t n,
                           const Formula& f, const AtomFn& atom) {
  switch (f.kind()) {
    case FormulaKind::Top:
      return std::vector<char>(n, 1);
    case FormulaKind::Prop:
    case FormulaKind::AttEq:
    case FormulaKind::AttLess:
      return atom(f);
    case FormulaKind::Not: {
      auto v = evaluate(relations, sig, n, f.lhs(), atom);
      for (auto& x : v) x = !x;
      return v;
    }
    case FormulaKind::And: {
      auto v = evaluate(relations, sig, n, f.lhs(), atom);
      if (std::none_of(v.begin(), v.end(), [](char x) { return x; })) return v;
      auto r = evaluate(relations, sig, n, f.rhs(), atom);
      for (std::size_t i = 0; i < n; ++i) v[i] = v[i] && r[i];
      return v;
    }
    case FormulaKind::Know: {
      auto body = evaluate(relations, sig, n, f.lhs(), atom);
      const Partition& rel = relations[*sig.agent_index(f.name())];
      std::vector<char> block_ok(rel.block_count(), 1);
      for (std::size_t w = 0; w < n; ++w) {
        if (!body[w]) block_ok[rel.block_of(w)] = 0;
      }
      std::vector<char> v(n);
      for (std::size_t w = 0; w < n; ++w) v[w] = block_ok[rel.block_of(w)];
      return v;
    }
  }
  return std::vector<char>(n, 0);
}

}  // namespace

std::vector<char> extension(const AttentionState& s, const Formula& f) {
  const Signature& sig = *s.sig;
  const std::size_t n = s.world_count();
  auto atom = [&](const Formula& a) {
    std::vector<char> v(n);
    if (a.kind() == FormulaKind::Prop) {
      const std::size_t p = *sig.atom_index(a.name());
      for (std::size_t w = 0; w < n; ++w) v[w] = s.valuation[w][p];
    } else {
      const auto& att = s.attention[*sig.agent_index(a.name())];
      const bool eq = a.kind() == FormulaKind::AttEq;
      for (std::size_t w = 0; w < n; ++w) v[w] = eq ? att[w] == a.value() : att[w] < a.value();
    }
    return v;
  };
  return evaluate(s.relations, sig, n, f, atom);
}

std::vector<char> extension(const EpistemicState& s, const Formula& f) {
  const Signature& sig = *s.sig;
  const std::size_t n = s.world_count();
  auto atom = [&](const Formula& a) {
    std::vector<char> v(n);
    const std::size_t slot = atom_slot(sig, a);
    for (std::size_t w = 0; w < n; ++w) v[w] = s.valuation[w][slot];
    return v;
  };
  return evaluate(s.relations, sig, n, f, atom);
}

bool check(const AttentionState& s, const Formula& f, std::size_t at) {
  validate(f, *s.sig);
  if (at >= s.world_count()) throw ValidationError("unknown world index " + std::to_string(at));
  return extension(s, f)[at] != 0;
}

bool check(const AttentionState& s, const Formula& f) { return check(s, f, s.actual); }

bool check_epistemic(const EpistemicState& s, const Formula& f, std::size_t at) {
  validate(f, *s.sig);
  if (at >= s.world_count()) throw ValidationError("unknown world index " + std::to_string(at));
  return extension(s, f)[at] != 0;
}

bool check_epistemic(const EpistemicState& s, const Formula& f) { return check_epistemic(s, f, s.actual); }

std::size_t atom_slot(const Signature& sig, const Formula& atom) {
  switch (atom.kind()) {
    case FormulaKind::Prop:
      if (auto p = sig.atom_index(atom.name())) return *p;
      break;
    case FormulaKind::AttEq:
      if (auto a = sig.agent_index(atom.name()); a && atom.value() <= sig.attention_bound) {
        return sig.att_eq_slot(*a, atom.value());
      }
      break;
    case FormulaKind::AttLess:
      if (auto a = sig.agent_index(atom.name()); a && atom.value() <= sig.attention_bound) {
        return sig.att_less_slot(*a, atom.value());
      }
      break;
    default:
      throw ValidationError("not an atom: " + to_string(atom));
  }
  throw ValidationError("atom outside the signature: " + to_string(atom));
}

Formula slot_atom(const Signature& sig, std::size_t slot) {
  if (slot < sig.prop_count()) return Formula::prop(sig.atoms[slot]);
  const std::size_t width = 2 * (std::size_t{sig.attention_bound} + 1);
  const std::size_t rest = slot - sig.prop_count();
  const std::size_t agent = rest / width;
  if (agent >= sig.agent_count()) throw ValidationError("atom slot out of range");
  const auto offset = static_cast<unsigned>(rest % width);
  if (offset <= sig.attention_bound) return Formula::att_eq(sig.agents[agent], offset);
  return Formula::att_less(sig.agents[agent], offset - sig.attention_bound - 1);
}

EpistemicState kripke_rendition(const AttentionState& s) {
  const Signature& sig = *s.sig;
  EpistemicState k;
  k.sig = s.sig;
  k.worlds = s.worlds;
  k.relations = s.relations;
  k.actual = s.actual;
  k.valuation.assign(s.world_count(), std::vector<bool>(sig.full_atom_count(), false));
  for (std::size_t w = 0; w < s.world_count(); ++w) {
    auto& row = k.valuation[w];
    std::copy(s.valuation[w].begin(), s.valuation[w].end(), row.begin());
    for (std::size_t a = 0; a < sig.agent_count(); ++a) {
      const unsigned att = s.attention[a][w];
      for (unsigned n = 0; n <= sig.attention_bound; ++n) {
        row[sig.att_eq_slot(a, n)] = att == n;
        row[sig.att_less_slot(a, n)] = att < n;
      }
    }
  }
  return k;
}

AttentionState attention_state_from_epistemic(const EpistemicState& s,
                                              std::optional<std::vector<std::vector<unsigned>>> attention) {
  require_valid(s);
  const Signature& sig = *s.sig;
  AttentionState out;
  out.sig = s.sig;
  out.worlds = s.worlds;
  out.relations = s.relations;
  out.actual = s.actual;
  out.valuation.resize(s.world_count());
  for (std::size_t w = 0; w < s.world_count(); ++w) {
    out.valuation[w].assign(s.valuation[w].begin(), s.valuation[w].begin() + static_cast<long>(sig.prop_count()));
  }
  out.attention = attention ? std::move(*attention)
                            : std::vector<std::vector<unsigned>>(sig.agent_count(),
                                                                 std::vector<unsigned>(s.world_count(), 0));
  auto d = validate_state(out);
  if (!d.empty()) throw ValidationError("invalid attention map: " + d.front());
  return out;
}

AttentionState from_tableau_model(SignaturePtr sig, const TableauModel& m) {
  AttentionState s;
  s.sig = std::move(sig);
  const Signature& g = *s.sig;
  for (std::size_t w = 0; w < m.world_count; ++w) s.worlds.push_back("t" + std::to_string(w));
  for (std::size_t a = 0; a < g.agent_count(); ++a) s.relations.push_back(Partition::from_labels(m.block_of[a]));
  s.valuation.assign(m.world_count, std::vector<bool>(g.prop_count(), false));
  for (std::size_t w = 0; w < m.world_count; ++w) {
    for (const auto& name : m.true_atoms[w]) s.valuation[w][*g.atom_index(name)] = true;
  }
  s.attention = m.attention;
  s.actual = 0;
  require_valid(s);
  return s;
}

}  // namespace attn
