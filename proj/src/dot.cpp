#include "attn/dot.hpp"

#include <sstream>

namespace attn {

namespace {

const char* const palette[] = {"#1F78B4", "#E31A1C", "#33A02C", "#FF7F00", "#6A3D9A", "#505050"};

// Labels carry \n escapes on purpose, so only quotes are escaped.
std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string export_dot(const AttentionState& s) {
  const Signature& sig = *s.sig;
  std::ostringstream os;
  os << "graph attention_state {\n";
  os << "  node [shape=circle];\n";
  for (std::size_t w = 0; w < s.world_count(); ++w) {
    std::string label = s.worlds[w] + "\\n";
    bool any = false;
    for (std::size_t p = 0; p < sig.prop_count(); ++p) {
      if (!s.valuation[w][p]) continue;
      label += (any ? " " : "") + sig.atoms[p];
      any = true;
    }
    if (!any) label += "-";
    for (std::size_t a = 0; a < sig.agent_count(); ++a) {
      label += "\\nA_" + sig.agents[a] + "=" + std::to_string(s.attention[a][w]);
    }
    os << "  w" << w << " [label=" << quoted(label) << (w == s.actual ? ", shape=doublecircle" : "") << "];\n";
  }
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    const char* color = palette[a % (sizeof(palette) / sizeof(palette[0]))];
    for (const auto& block : s.relations[a].blocks()) {
      for (std::size_t i = 0; i < block.size(); ++i) {
        for (std::size_t j = i + 1; j < block.size(); ++j) {
          os << "  w" << block[i] << " -- w" << block[j] << " [label=" << quoted(sig.agents[a]) << ", color=\""
             << color << "\"];\n";
        }
      }
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace attn
