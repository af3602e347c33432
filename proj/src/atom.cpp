#include "chasebound/atom.hpp"

#include <algorithm>

#include "chasebound/error.hpp"

namespace chase {

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (auto c = a.predicate.compare(b.predicate) <=> 0; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                b.args.end());
}

std::string Atom::to_string() const {
  std::string out = predicate;
  if (args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i].to_string();
  }
  out += ')';
  return out;
}

bool AtomSet::contains_all(const AtomSet& other) const {
  return std::includes(atoms_.begin(), atoms_.end(), other.begin(), other.end());
}

TermSet AtomSet::terms() const {
  TermSet out;
  for (const auto& a : atoms_) out.insert(a.args.begin(), a.args.end());
  return out;
}

TermSet AtomSet::variables() const {
  TermSet out;
  for (const auto& a : atoms_)
    for (const auto& t : a.args)
      if (t.is_variable()) out.insert(t);
  return out;
}

TermSet AtomSet::nulls() const {
  TermSet out;
  for (const auto& a : atoms_)
    for (const auto& t : a.args)
      if (t.is_null()) out.insert(t);
  return out;
}

AtomSet AtomSet::difference(const AtomSet& other) const {
  AtomSet out;
  std::set_difference(atoms_.begin(), atoms_.end(), other.begin(), other.end(),
                      std::inserter(out.atoms_, out.atoms_.end()));
  return out;
}

AtomSet AtomSet::united(const AtomSet& other) const {
  AtomSet out = *this;
  out.insert(other);
  return out;
}

std::string AtomSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& a : atoms_) {
    if (!first) out += ", ";
    first = false;
    out += a.to_string();
  }
  out += '}';
  return out;
}

void Substitution::bind(const Term& from, const Term& to) {
  if (from.is_constant()) throw Error("cannot bind constant " + from.to_string());
  map_.insert_or_assign(from, to);
}

Term Substitution::apply(const Term& t) const {
  if (t.is_constant()) return t;
  auto it = map_.find(t);
  return it == map_.end() ? t : it->second;
}

Atom Substitution::apply(const Atom& a) const {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(apply(t));
  return out;
}

AtomSet Substitution::apply(const AtomSet& atoms) const {
  AtomSet out;
  for (const auto& a : atoms) out.insert(apply(a));
  return out;
}

Substitution Substitution::restricted_to(const TermSet& domain) const {
  Substitution out;
  for (const auto& [from, to] : map_)
    if (domain.contains(from)) out.map_.emplace(from, to);
  return out;
}

std::string Substitution::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [from, to] : map_) {
    if (!first) out += ',';
    first = false;
    out += from.to_string();
    out += ':';
    out += to.to_string();
  }
  out += '}';
  return out;
}

}  // namespace chase
