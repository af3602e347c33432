#include "chasebound/core.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include "chasebound/error.hpp"
#include "chasebound/homomorphism.hpp"

namespace chase {

AtomSet core(const AtomSet& atoms) {
  AtomSet current = atoms;
  bool folded = true;
  while (folded) {
    folded = false;
    for (const auto& a : current) {
      AtomSet smaller = current;
      smaller.erase(a);
      if (auto h = find_homomorphism(current, smaller)) {
        current = h->apply(current);
        folded = true;
        break;
      }
    }
  }
  return current;
}

namespace {

struct BeamState {
  std::vector<bool> placed;
  std::map<Term, std::size_t> labels;

  /// Only labels of terms still occurring in unplaced atoms influence the rest
  /// of the encoding.
  std::string key(const std::vector<const Atom*>& atoms) const {
    std::string k;
    for (std::size_t i = 0; i < placed.size(); ++i) k += placed[i] ? '1' : '0';
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (placed[i]) continue;
      for (std::size_t j = 0; j < atoms[i]->args.size(); ++j) {
        auto it = labels.find(atoms[i]->args[j]);
        if (it == labels.end()) continue;
        k += '|' + std::to_string(i) + '.' + std::to_string(j) + '=' + std::to_string(it->second);
      }
    }
    return k;
  }
};

std::string pad(std::size_t n) {
  std::string s = std::to_string(n);
  return std::string(s.size() < 6 ? 6 - s.size() : 0, '0') + s;
}

/// Block for one atom under a partial labeling; extends `labels` in place.
std::string encode_atom(const Atom& a, const TermSet& fixed, std::map<Term, std::size_t>& labels) {
  std::string block = a.predicate;
  block += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) block += ',';
    const Term& t = a.args[i];
    if (fixed.contains(t)) {
      block += '=';
      block += t.to_string();
      continue;
    }
    auto it = labels.find(t);
    if (it == labels.end()) it = labels.emplace(t, labels.size()).first;
    block += '#';
    block += pad(it->second);
  }
  block += ')';
  return block;
}

}  // namespace

CanonicalLabeling canonical_labeling(const AtomSet& atoms, const TermSet& fixed, std::size_t budget) {
  std::vector<const Atom*> list;
  for (const auto& a : atoms) list.push_back(&a);

  std::vector<BeamState> beam{BeamState{std::vector<bool>(list.size(), false), {}}};
  std::string encoding;
  std::size_t expansions = 0;

  for (std::size_t pos = 0; pos < list.size(); ++pos) {
    std::string best;
    bool have_best = false;
    std::vector<BeamState> next;
    std::set<std::string> seen;
    for (const auto& state : beam) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (state.placed[i]) continue;
        if (++expansions > budget)
          throw ResourceCap("canonical labeling exceeded " + std::to_string(budget) + " expansions");
        auto labels = state.labels;
        std::string block = encode_atom(*list[i], fixed, labels);
        if (have_best && block > best) continue;
        if (!have_best || block < best) {
          best = block;
          have_best = true;
          next.clear();
          seen.clear();
        }
        BeamState child{state.placed, std::move(labels)};
        child.placed[i] = true;
        if (seen.insert(child.key(list)).second) next.push_back(std::move(child));
      }
    }
    encoding += best;
    encoding += '\n';
    beam = std::move(next);
  }
  CanonicalLabeling out;
  out.encoding = std::move(encoding);
  out.labels = beam.front().labels;
  return out;
}

std::string canonical_form(const AtomSet& atoms, const TermSet& fixed, std::size_t budget) {
  return canonical_labeling(atoms, fixed, budget).encoding;
}

}  // namespace chase
