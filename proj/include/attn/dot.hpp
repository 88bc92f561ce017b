#pragma once

#include <string>

#include "attn/models.hpp"

namespace attn {

/// Graphviz rendering. Nodes are labelled with the true atoms and each
/// agent's attention; the actual world is a double circle. Every block of
/// every agent is drawn as a clique, one undirected edge per pair.
std::string export_dot(const AttentionState& s);

}  // namespace attn
