#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "attn/models.hpp"

namespace attn {

struct BisimWitness {
  /// (left world, right world), sorted.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Coarsest stable refinement of `initial` under the given equivalence
/// relations over the same node set. Returns the class of every node.
std::vector<std::size_t> refine(const std::vector<std::size_t>& initial, const std::vector<Partition>& relations);

/// Class of each world under the largest attention auto-bisimulation.
std::vector<std::size_t> bisimulation_classes(const AttentionState& s);

/// Largest bisimulation between the two models when it links the actual
/// worlds. Throws SignatureMismatch.
std::optional<BisimWitness> bisimilar(const AttentionState& a, const AttentionState& b);
std::optional<BisimWitness> kripke_bisimilar(const EpistemicState& a, const EpistemicState& b);

/// Quotient by the largest auto-bisimulation. Each class keeps the name of
/// its lexicographically least member; classes appear in order of their first
/// member.
AttentionState contract(const AttentionState& s);

}  // namespace attn
