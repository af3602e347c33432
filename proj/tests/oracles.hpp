// Brute-force reference implementations used to cross-check the library.
// Everything here is deliberately naive: exhaustive assignments, explicit
// permutations, unpruned search.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chasebound/breadth_first.hpp"
#include "chasebound/parser.hpp"

namespace oracle {

using namespace chase;

inline KnowledgeBase kb(const std::string& text) { return parse_kb(text).kb; }

inline std::shared_ptr<const RuleSet> rules_of(const std::string& text) {
  return std::make_shared<const RuleSet>(parse_kb(text).kb.ruleset);
}

inline AtomSet atoms(const std::string& text, const std::string& scope = {}) {
  return parse_atom_list(text, scope);
}

inline Atom atom(const std::string& text) { return *parse_atom_list(text).begin(); }

inline std::vector<Term> as_vector(const TermSet& s) { return {s.begin(), s.end()}; }

inline AtomSet image(const std::map<Term, Term>& m, const AtomSet& a) {
  AtomSet out;
  for (const auto& x : a) {
    Atom y = x;
    for (auto& t : y.args)
      if (auto it = m.find(t); it != m.end()) t = it->second;
    out.insert(y);
  }
  return out;
}

/// Every total assignment of `domain` into `range`, in odometer order.
inline void for_each_assignment(const std::vector<Term>& domain, const std::vector<Term>& range,
                                const std::function<void(const std::map<Term, Term>&)>& visit) {
  if (range.empty() && !domain.empty()) return;
  std::vector<std::size_t> idx(domain.size(), 0);
  for (;;) {
    std::map<Term, Term> m;
    for (std::size_t i = 0; i < domain.size(); ++i) m.emplace(domain[i], range[idx[i]]);
    visit(m);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == range.size()) idx[i++] = 0;
    if (i == idx.size()) return;
  }
}

/// All homomorphisms from `source` to `target` that move only the terms
/// accepted by `mappable`, found by trying every assignment.
inline std::vector<std::map<Term, Term>> brute_homomorphisms(const AtomSet& source, const AtomSet& target,
                                                             const std::function<bool(const Term&)>& mappable) {
  std::vector<Term> domain;
  for (const auto& t : source.terms())
    if (mappable(t)) domain.push_back(t);
  std::vector<Term> range = as_vector(target.terms());
  std::vector<std::map<Term, Term>> out;
  for_each_assignment(domain, range, [&](const std::map<Term, Term>& m) {
    if (target.contains_all(image(m, source))) out.push_back(m);
  });
  return out;
}

inline bool brute_hom_exists(const AtomSet& source, const AtomSet& target, const TermSet& frozen = {}) {
  return !brute_homomorphisms(source, target, [&](const Term& t) {
            return !t.is_constant() && !frozen.contains(t);
          }).empty();
}

/// Isomorphism by trying every bijection between the non-fixed terms.
inline bool brute_isomorphic(const AtomSet& a, const AtomSet& b, const TermSet& fixed) {
  if (a.size() != b.size()) return false;
  std::vector<Term> xs, ys;
  for (const auto& t : a.terms())
    if (!fixed.contains(t)) xs.push_back(t);
  for (const auto& t : b.terms())
    if (!fixed.contains(t)) ys.push_back(t);
  if (xs.size() != ys.size()) return false;
  std::sort(ys.begin(), ys.end());
  do {
    std::map<Term, Term> m;
    for (std::size_t i = 0; i < xs.size(); ++i) m.emplace(xs[i], ys[i]);
    if (image(m, a) == b) return true;
  } while (std::next_permutation(ys.begin(), ys.end()));
  return false;
}

/// Number of isomorphism classes among `sets`, by pairwise comparison.
inline std::size_t count_classes(const std::vector<AtomSet>& sets, const TermSet& fixed) {
  std::vector<AtomSet> reps;
  for (const auto& s : sets) {
    bool known = false;
    for (const auto& r : reps)
      if (brute_isomorphic(s, r, fixed)) {
        known = true;
        break;
      }
    if (!known) reps.push_back(s);
  }
  return reps.size();
}

/// Every set of at most `max_atoms` atoms over the given predicates and terms.
inline std::vector<AtomSet> all_factbases(const std::vector<std::pair<std::string, std::size_t>>& predicates,
                                          const std::vector<Term>& terms, std::size_t max_atoms) {
  std::vector<Atom> universe;
  for (const auto& [p, arity] : predicates) {
    std::vector<Term> domain;
    for (std::size_t i = 0; i < arity; ++i) domain.push_back(Term::variable("P" + std::to_string(i)));
    for_each_assignment(domain, terms, [&](const std::map<Term, Term>& m) {
      Atom a{p, {}};
      for (const auto& v : domain) a.args.push_back(m.at(v));
      universe.push_back(a);
    });
  }
  std::vector<AtomSet> out;
  std::vector<Atom> chosen;
  std::function<void(std::size_t)> pick = [&](std::size_t from) {
    out.emplace_back(chosen.begin(), chosen.end());
    if (chosen.size() == max_atoms) return;
    for (std::size_t i = from; i < universe.size(); ++i) {
      chosen.push_back(universe[i]);
      pick(i + 1);
      chosen.pop_back();
    }
  };
  pick(0);
  return out;
}

/// Restricted-chase applicability decided by trying every image for the
/// fresh nulls.
inline bool brute_r_applicable(const Derivation& d, const Trigger& t) {
  if (d.contains(t)) return false;
  AtomSet head = d.head_image(t);
  TermSet fresh = fresh_terms(t, d.rule_of(t), d.naming());
  return brute_homomorphisms(head, d.factbase(), [&](const Term& u) { return fresh.contains(u); }).empty();
}

inline bool naive_applicable(Variant v, const Derivation& d, const Trigger& t) {
  if (v == Variant::R) return brute_r_applicable(d, t);
  return is_applicable(v, d, t);
}

struct NaiveLeaf {
  std::string factbase;
  BranchOutcome outcome;
};

/// Breadth-first derivations explored without grouping, pruning or a
/// canonical order: every applicable trigger of the lowest rank is a branch.
inline std::vector<NaiveLeaf> naive_breadth_first(Variant v, const std::shared_ptr<const RuleSet>& rules,
                                                  const AtomSet& initial, unsigned depth_target,
                                                  std::size_t node_cap = 200000) {
  std::vector<NaiveLeaf> out;
  std::size_t nodes = 0;
  std::function<void(const Derivation&)> go = [&](const Derivation& d) {
    if (++nodes > node_cap) throw std::runtime_error("naive enumerator exceeded its node cap");
    std::vector<Trigger> app;
    for (const auto& t : enumerate_triggers(d.factbase(), d.rules()))
      if (naive_applicable(v, d, t)) app.push_back(t);
    if (app.empty()) {
      out.push_back({d.factbase().to_string(), BranchOutcome::Terminated});
      return;
    }
    unsigned low = ~0u;
    for (const auto& t : app) low = std::min(low, d.trigger_rank(t));
    if (!d.steps().empty() && low < d.steps().back().trigger_rank) return;
    for (const auto& t : app) {
      if (d.trigger_rank(t) != low) continue;
      Derivation child = d;
      bool deep = d.trigger_rank(t) > depth_target && !d.factbase().contains_all(d.head_image(t));
      child.append(t);
      if (deep)
        out.push_back({child.factbase().to_string(), BranchOutcome::DepthExceeded});
      else
        go(child);
    }
  };
  go(Derivation(rules, initial, v));
  return out;
}

/// Random small KB: up to 3 rules over p/2, q/1, r/2 with bodies of at most
/// two atoms, and up to 3 facts over constants a, b, c.
inline KnowledgeBase random_kb(std::mt19937_64& rng, std::size_t max_rules = 3, std::size_t max_body = 2,
                               std::size_t max_facts = 3) {
  const std::vector<std::pair<std::string, std::size_t>> preds{{"p", 2}, {"q", 1}, {"r", 2}};
  const std::vector<std::string> consts{"a", "b", "c"};
  const std::vector<std::string> body_vars{"X", "Y", "Z"};
  const std::vector<std::string> head_vars{"X", "Y", "Z", "U", "V"};
  auto pick = [&rng](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  std::string text;
  std::size_t facts = 1 + pick(max_facts);
  for (std::size_t i = 0; i < facts; ++i) {
    auto [p, arity] = preds[pick(preds.size())];
    text += p + "(";
    for (std::size_t j = 0; j < arity; ++j) text += (j ? "," : "") + consts[pick(consts.size())];
    text += ").\n";
  }
  std::size_t rules = 1 + pick(max_rules);
  for (std::size_t r = 0; r < rules; ++r) {
    std::set<std::string> used;
    auto make_atom = [&](bool body) {
      auto [p, arity] = preds[pick(preds.size())];
      std::string a = p + "(";
      for (std::size_t j = 0; j < arity; ++j) {
        std::string v;
        if (body) {
          v = body_vars[pick(body_vars.size())];
          used.insert(v);
        } else {
          // Mostly frontier variables, sometimes an existential one.
          std::vector<std::string> pool(used.begin(), used.end());
          if (pool.empty() || pick(4) == 0) v = head_vars[3 + pick(2)];
          else v = pool[pick(pool.size())];
        }
        a += (j ? "," : "") + v;
      }
      return a + ")";
    };
    std::string body, head;
    std::size_t nb = 1 + pick(max_body);
    for (std::size_t i = 0; i < nb; ++i) body += (i ? ", " : "") + make_atom(true);
    std::size_t nh = 1 + pick(2);
    for (std::size_t i = 0; i < nh; ++i) head += (i ? ", " : "") + make_atom(false);
    text += "[R" + std::to_string(r + 1) + "] " + body + " -> " + head + ".\n";
  }
  return parse_kb(text).kb;
}

/// Initial atoms among the ancestors of every atom and trigger stay within
/// b^rank. Returns a description of the first violation, or "".
inline std::string ancestor_bound_violation(const Derivation& d) {
  std::size_t b = d.rules().b();
  auto power = [b](unsigned k) {
    std::size_t x = 1;
    for (unsigned i = 0; i < k; ++i) x *= b;
    return x;
  };
  auto initial_count = [&d](const AtomSet& anc) {
    std::size_t n = 0;
    for (const auto& a : anc) n += d.initial().contains(a);
    return n;
  };
  for (const auto& [a, record] : d.atom_records())
    if (initial_count(ancestors(d, a)) > power(record.rank)) return "atom " + a.to_string();
  for (const auto& s : d.steps())
    if (initial_count(ancestors(d, s.trigger)) > power(s.trigger_rank)) return "trigger " + to_string(s.trigger, d.rules());
  return "";
}

}  // namespace oracle
