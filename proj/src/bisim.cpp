#include "attn/bisim.hpp"

#include <algorithm>
#include <map>

namespace attn {

namespace {

/// Renumbers keys densely in order of first occurrence.
template <class Key>
std::vector<std::size_t> densify(const std::vector<Key>& keys, std::size_t& count) {
  std::map<Key, std::size_t> ids;
  std::vector<std::size_t> out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto [it, _] = ids.emplace(keys[i], ids.size());
    out[i] = it->second;
  }
  count = ids.size();
  return out;
}

}  // namespace

std::vector<std::size_t> refine(const std::vector<std::size_t>& initial, const std::vector<Partition>& relations) {
  const std::size_t n = initial.size();
  std::size_t count = 0;
  std::vector<std::size_t> color = densify(initial, count);
  for (;;) {
    // A node's signature: its color plus, per agent, the set of colors in its
    // block. For equivalence relations this is the successor color set.
    std::vector<std::vector<std::size_t>> signature(n);
    for (std::size_t w = 0; w < n; ++w) signature[w].push_back(color[w]);
    for (const Partition& rel : relations) {
      std::vector<std::vector<std::size_t>> block_colors(rel.block_count());
      for (std::size_t w = 0; w < n; ++w) block_colors[rel.block_of(w)].push_back(color[w]);
      for (auto& c : block_colors) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
      }
      std::size_t ignored = 0;
      const auto block_id = densify(block_colors, ignored);
      for (std::size_t w = 0; w < n; ++w) signature[w].push_back(block_id[rel.block_of(w)]);
    }
    std::size_t next_count = 0;
    auto next = densify(signature, next_count);
    if (next_count == count) return next;
    color = std::move(next);
    count = next_count;
  }
}

namespace {

std::vector<std::vector<unsigned>> attention_keys(const AttentionState& s) {
  std::vector<std::vector<unsigned>> keys(s.world_count());
  for (std::size_t w = 0; w < s.world_count(); ++w) {
    for (bool b : s.valuation[w]) keys[w].push_back(b ? 1u : 0u);
    for (const auto& row : s.attention) keys[w].push_back(row[w] + 2);
  }
  return keys;
}

std::vector<std::vector<unsigned>> valuation_keys(const EpistemicState& s) {
  std::vector<std::vector<unsigned>> keys(s.world_count());
  for (std::size_t w = 0; w < s.world_count(); ++w) {
    for (bool b : s.valuation[w]) keys[w].push_back(b ? 1u : 0u);
  }
  return keys;
}

template <class State, class KeyFn>
std::optional<BisimWitness> union_bisimilar(const State& a, const State& b, KeyFn keys_of) {
  if (!a.sig || !b.sig || !(*a.sig == *b.sig)) throw SignatureMismatch();
  const std::size_t na = a.world_count();
  const std::size_t nb = b.world_count();
  auto keys = keys_of(a);
  auto kb = keys_of(b);
  keys.insert(keys.end(), kb.begin(), kb.end());
  std::size_t count = 0;
  const auto initial = densify(keys, count);

  std::vector<Partition> relations;
  for (std::size_t ag = 0; ag < a.sig->agent_count(); ++ag) {
    std::vector<std::size_t> labels(na + nb);
    const Partition& ra = a.relations[ag];
    for (std::size_t w = 0; w < na; ++w) labels[w] = ra.block_of(w);
    for (std::size_t w = 0; w < nb; ++w) labels[na + w] = ra.block_count() + b.relations[ag].block_of(w);
    relations.push_back(Partition::from_labels(labels));
  }
  const auto color = refine(initial, relations);
  if (color[a.actual] != color[na + b.actual]) return std::nullopt;
  BisimWitness z;
  for (std::size_t u = 0; u < na; ++u) {
    for (std::size_t v = 0; v < nb; ++v) {
      if (color[u] == color[na + v]) z.pairs.emplace_back(u, v);
    }
  }
  return z;
}

}  // namespace

std::vector<std::size_t> bisimulation_classes(const AttentionState& s) {
  std::size_t count = 0;
  return refine(densify(attention_keys(s), count), s.relations);
}

std::optional<BisimWitness> bisimilar(const AttentionState& a, const AttentionState& b) {
  return union_bisimilar(a, b, attention_keys);
}

std::optional<BisimWitness> kripke_bisimilar(const EpistemicState& a, const EpistemicState& b) {
  return union_bisimilar(a, b, valuation_keys);
}

AttentionState contract(const AttentionState& s) {
  const auto cls = bisimulation_classes(s);
  const std::size_t k = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
  // Classes are numbered by first occurrence, so representative order follows
  // the original world order.
  std::vector<std::size_t> first(k, s.world_count());
  std::vector<std::string> names(k);
  for (std::size_t w = 0; w < s.world_count(); ++w) {
    const std::size_t c = cls[w];
    if (first[c] == s.world_count()) {
      first[c] = w;
      names[c] = s.worlds[w];
    } else if (s.worlds[w] < names[c]) {
      names[c] = s.worlds[w];
    }
  }
  AttentionState out;
  out.sig = s.sig;
  out.worlds = std::move(names);
  out.actual = cls[s.actual];
  for (const Partition& rel : s.relations) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& block : rel.blocks()) {
      for (std::size_t w : block) edges.emplace_back(cls[block.front()], cls[w]);
    }
    out.relations.push_back(Partition::from_edges(k, edges));
  }
  for (std::size_t c = 0; c < k; ++c) out.valuation.push_back(s.valuation[first[c]]);
  for (const auto& row : s.attention) {
    std::vector<unsigned> lifted(k);
    for (std::size_t c = 0; c < k; ++c) lifted[c] = row[first[c]];
    out.attention.push_back(std::move(lifted));
  }
  return out;
}

}  // namespace attn
