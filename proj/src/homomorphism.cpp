#include "chasebound/homomorphism.hpp"

#include <cassert>
#include <map>
#include <string>
#include <unordered_map>

namespace chase {
namespace {

struct Slot {
  int var = -1;               // index into the mappable terms, or -1
  const Term* fixed = nullptr;  // required target term when var < 0
};

struct Pattern {
  const Atom* atom;
  std::vector<Slot> slots;
  std::vector<const Atom*> candidates;
};

/// Receives the mappable terms and their images (parallel vectors).
using RawVisitor = std::function<bool(const std::vector<Term>&, const std::vector<const Term*>&)>;

class Matcher {
 public:
  Matcher(const AtomSet& source, const AtomSet& target, const TermFilter& mappable) {
    std::unordered_map<Term, int, TermHash> index;
    std::map<std::string, std::vector<const Atom*>> by_predicate;
    for (const auto& a : target) by_predicate[a.predicate].push_back(&a);

    for (const auto& a : source) {
      Pattern p{&a, {}, {}};
      for (const auto& t : a.args) {
        Slot s;
        if (mappable(t)) {
          auto [it, fresh] = index.emplace(t, static_cast<int>(vars_.size()));
          if (fresh) vars_.push_back(t);
          s.var = it->second;
        } else {
          s.fixed = &t;
        }
        p.slots.push_back(s);
      }
      if (auto it = by_predicate.find(a.predicate); it != by_predicate.end()) {
        for (const Atom* cand : it->second) {
          if (cand->arity() != a.arity()) continue;
          bool ok = true;
          for (std::size_t i = 0; i < p.slots.size() && ok; ++i)
            if (p.slots[i].var < 0) ok = *p.slots[i].fixed == cand->args[i];
          if (ok) p.candidates.push_back(cand);
        }
      }
      if (p.candidates.empty()) impossible_ = true;
      patterns_.push_back(std::move(p));
    }
    assignment_.assign(vars_.size(), nullptr);
    placed_.assign(patterns_.size(), false);
  }

  void run(const RawVisitor& visit) {
    if (impossible_) return;
    visit_ = &visit;
    search(0);
  }

 private:
  bool consistent(const Pattern& p, const Atom* cand) const {
    for (std::size_t i = 0; i < p.slots.size(); ++i) {
      int v = p.slots[i].var;
      if (v >= 0 && assignment_[v] && !(*assignment_[v] == cand->args[i])) return false;
    }
    return true;
  }

  /// Fail-first: the unplaced pattern with the fewest candidates consistent
  /// with the current assignment; ties go to the earlier source atom.
  std::size_t next_pattern(std::vector<const Atom*>& viable) const {
    std::size_t best = patterns_.size();
    std::vector<const Atom*> current;
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
      if (placed_[i]) continue;
      current.clear();
      for (const Atom* cand : patterns_[i].candidates)
        if (consistent(patterns_[i], cand)) current.push_back(cand);
      if (best == patterns_.size() || current.size() < viable.size()) {
        best = i;
        viable.swap(current);
        if (viable.empty()) break;
      }
    }
    return best;
  }

  bool search(std::size_t depth) {
    if (depth == patterns_.size()) return (*visit_)(vars_, assignment_);
    std::vector<const Atom*> viable;
    std::size_t at = next_pattern(viable);
    const Pattern& p = patterns_[at];
    placed_[at] = true;
    std::vector<int> newly;
    bool go_on = true;
    for (const Atom* cand : viable) {
      newly.clear();
      bool ok = true;
      for (std::size_t i = 0; i < p.slots.size() && ok; ++i) {
        int v = p.slots[i].var;
        if (v < 0) continue;
        if (assignment_[v] == nullptr) {
          assignment_[v] = &cand->args[i];
          newly.push_back(v);
        } else {
          ok = *assignment_[v] == cand->args[i];  // repeated variable in this atom
        }
      }
      if (ok) go_on = search(depth + 1);
      for (int v : newly) assignment_[v] = nullptr;
      if (!go_on) break;
    }
    placed_[at] = false;
    return go_on;
  }

  std::vector<Term> vars_;
  std::vector<Pattern> patterns_;
  std::vector<const Term*> assignment_;
  std::vector<bool> placed_;
  const RawVisitor* visit_ = nullptr;
  bool impossible_ = false;
};

TermFilter frozen_filter(const TermSet& frozen) {
  return [&frozen](const Term& t) { return !t.is_constant() && !frozen.contains(t); };
}

bool isomorphic_with(const AtomSet& a, const AtomSet& b, const TermFilter& renameable) {
  if (a.size() != b.size()) return false;
  // Renameable terms may include constants, so the images are kept raw
  // instead of going through a Substitution.
  bool found = false;
  Matcher m(a, b, renameable);
  m.run([&](const std::vector<Term>& vars, const std::vector<const Term*>& images) {
    TermSet seen;
    for (const Term* to : images)
      if (!renameable(*to) || !seen.insert(*to).second) return true;
    std::map<Term, Term> rename;
    for (std::size_t i = 0; i < vars.size(); ++i) rename.emplace(vars[i], *images[i]);
    AtomSet mapped;
    for (const auto& atom : a) {
      Atom x = atom;
      for (auto& t : x.args)
        if (auto it = rename.find(t); it != rename.end()) t = it->second;
      mapped.insert(x);
    }
    found = mapped == b;
    return !found;
  });
  return found;
}

}  // namespace

void for_each_homomorphism(const AtomSet& source, const AtomSet& target, const TermFilter& mappable,
                           const std::function<bool(const Substitution&)>& visit) {
  Matcher m(source, target, mappable);
  m.run([&visit](const std::vector<Term>& vars, const std::vector<const Term*>& images) {
    Substitution sigma;
    for (std::size_t i = 0; i < vars.size(); ++i) sigma.bind(vars[i], *images[i]);
    return visit(sigma);
  });
}

std::optional<Substitution> find_homomorphism(const AtomSet& source, const AtomSet& target,
                                              const TermSet& frozen) {
  std::optional<Substitution> out;
  for_each_homomorphism(source, target, frozen_filter(frozen), [&](const Substitution& sigma) {
    out = sigma;
    return false;
  });
  assert(!out || target.contains_all(out->apply(source)));
  return out;
}

std::vector<Substitution> all_homomorphisms(const AtomSet& source, const AtomSet& target,
                                            const TermSet& frozen) {
  std::vector<Substitution> out;
  for_each_homomorphism(source, target, frozen_filter(frozen), [&](const Substitution& sigma) {
    out.push_back(sigma);
    return true;
  });
  return out;
}

bool is_isomorphic(const AtomSet& a, const AtomSet& b) {
  return isomorphic_with(a, b, [](const Term& t) { return !t.is_constant(); });
}

bool is_isomorphic(const AtomSet& a, const AtomSet& b, const TermSet& fixed) {
  return isomorphic_with(a, b, [&fixed](const Term& t) { return !fixed.contains(t); });
}

bool is_equivalent(const AtomSet& a, const AtomSet& b) {
  return find_homomorphism(a, b).has_value() && find_homomorphism(b, a).has_value();
}

}  // namespace chase
