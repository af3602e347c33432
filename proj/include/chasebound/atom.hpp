#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chasebound/term.hpp"

namespace chase {

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  std::string to_string() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
};

/// A finite set of atoms with deterministic (structural) iteration order.
class AtomSet {
 public:
  using const_iterator = std::set<Atom>::const_iterator;

  AtomSet() = default;
  AtomSet(std::initializer_list<Atom> atoms) : atoms_(atoms) {}
  template <typename It>
  AtomSet(It first, It last) : atoms_(first, last) {}

  /// Returns false when the atom was already present.
  bool insert(const Atom& atom) { return atoms_.insert(atom).second; }
  void insert(const AtomSet& other) { atoms_.insert(other.begin(), other.end()); }
  bool erase(const Atom& atom) { return atoms_.erase(atom) > 0; }

  bool contains(const Atom& atom) const { return atoms_.contains(atom); }
  bool contains_all(const AtomSet& other) const;
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  const_iterator begin() const { return atoms_.begin(); }
  const_iterator end() const { return atoms_.end(); }

  TermSet terms() const;
  TermSet variables() const;
  TermSet nulls() const;

  AtomSet difference(const AtomSet& other) const;
  AtomSet united(const AtomSet& other) const;

  /// `{p(a,b), q(c)}` in iteration order.
  std::string to_string() const;

  friend bool operator==(const AtomSet&, const AtomSet&) = default;
  friend auto operator<=>(const AtomSet& a, const AtomSet& b) { return a.atoms_ <=> b.atoms_; }

 private:
  std::set<Atom> atoms_;
};

/// Finite map from variables/nulls to terms. Terms outside the domain map to
/// themselves; constants never enter the domain.
class Substitution {
 public:
  using const_iterator = std::map<Term, Term>::const_iterator;

  Substitution() = default;

  void bind(const Term& from, const Term& to);
  bool binds(const Term& t) const { return map_.contains(t); }
  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;
  AtomSet apply(const AtomSet& atoms) const;

  /// Keeps only the bindings of `domain`.
  Substitution restricted_to(const TermSet& domain) const;

  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }
  const_iterator begin() const { return map_.begin(); }
  const_iterator end() const { return map_.end(); }

  /// `{X:a,Y:b}` with bindings in domain order.
  std::string to_string() const;

  friend bool operator==(const Substitution&, const Substitution&) = default;
  friend auto operator<=>(const Substitution& a, const Substitution& b) { return a.map_ <=> b.map_; }

 private:
  std::map<Term, Term> map_;
};

inline AtomSet apply(const Substitution& sigma, const AtomSet& atoms) { return sigma.apply(atoms); }

}  // namespace chase
