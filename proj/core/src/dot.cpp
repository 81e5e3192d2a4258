#include "agentbom/dot.hpp"

#include <set>
#include <sstream>

namespace agentbom {

namespace {

std::string_view shape_for(Layer layer) {
  switch (layer) {
    case Layer::Static: return "box";
    case Layer::Runtime: return "ellipse";
    default: return "diamond";
  }
}

std::set<std::string, std::less<>> highlighted(const Finding* f) {
  std::set<std::string, std::less<>> out;
  if (f == nullptr) return out;
  out.insert(f->entry);
  for (const auto* paths : {&f->back_paths, &f->fwd_paths}) {
    for (const auto& p : *paths) out.insert(p.elements.begin(), p.elements.end());
  }
  return out;
}

}  // namespace

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

std::string to_dot(const AgentBomGraph& graph, const Finding* highlight) {
  const auto marked = highlighted(highlight);
  std::ostringstream out;
  out << "digraph agentbom {\n  rankdir=LR;\n  node [fontsize=10];\n  edge [fontsize=8];\n";
  for (const auto& [id, node] : graph.nodes()) {
    out << "  " << dot_quote(id) << " [label=" << dot_quote(id + "\n" + std::string(to_string(node.kind)))
        << ", shape=" << shape_for(node.layer());
    if (node.layer() == Layer::Static) out << ", style=filled, fillcolor=lightgrey";
    if (marked.contains(id)) out << ", color=red, penwidth=2.5";
    out << "];\n";
  }
  for (const auto& [id, edge] : graph.edges()) {
    out << "  " << dot_quote(edge.source) << " -> " << dot_quote(edge.target)
        << " [label=" << dot_quote(to_string(edge.kind));
    if (edge.family() == EdgeFamily::Propagation) {
      out << ", style=\"bold,dashed\"";
    } else if (edge.family() == EdgeFamily::Structural) {
      out << ", style=dotted";
    }
    if (marked.contains(id)) out << ", color=red, penwidth=2.5";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace agentbom
