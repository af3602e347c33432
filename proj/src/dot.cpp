#include "chasebound/dot.hpp"

#include <map>

namespace chase {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string export_dot(const Derivation& d) {
  std::map<Atom, std::size_t> ids;
  std::map<unsigned, std::vector<const Atom*>> levels;
  for (const auto& [atom, record] : d.atom_records()) {
    ids.emplace(atom, ids.size());
    levels[record.rank].push_back(&atom);
  }

  std::string out = "digraph derivation {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto& [rank, atoms] : levels) {
    out += "  subgraph rank_" + std::to_string(rank) + " {\n    rank=same;\n";
    for (const Atom* a : atoms)
      out += "    n" + std::to_string(ids.at(*a)) + " [label=" +
             quoted(a->to_string() + " : " + std::to_string(rank)) + "];\n";
    out += "  }\n";
  }
  constexpr std::size_t colours = sizeof(kPalette) / sizeof(kPalette[0]);
  for (std::size_t i = 0; i < d.steps().size(); ++i) {
    const auto& step = d.steps()[i];
    std::string style = std::string(" [color=\"") + kPalette[i % colours] + "\", tooltip=" +
                        quoted(to_string(step.trigger, d.rules())) + "];\n";
    for (const auto& body : step.body_image)
      for (const auto& produced : step.produced)
        out += "  n" + std::to_string(ids.at(body)) + " -> n" + std::to_string(ids.at(produced)) + style;
  }
  return out + "}\n";
}

}  // namespace chase
