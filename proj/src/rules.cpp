#include "chasebound/rules.hpp"

#include <algorithm>

#include "chasebound/error.hpp"

namespace chase {
namespace {

std::string join_atoms(const AtomSet& atoms) {
  std::string out;
  bool first = true;
  for (const auto& a : atoms) {
    if (!first) out += ", ";
    first = false;
    out += a.to_string();
  }
  return out;
}

}  // namespace

std::string Rule::to_string() const {
  return "[" + id + "] " + join_atoms(body) + " -> " + join_atoms(head) + ".";
}

Rule derive_rule_metadata(std::string id, AtomSet body, AtomSet head) {
  if (body.empty()) throw ValidationError("rule " + id + ": empty body");
  if (head.empty()) throw ValidationError("rule " + id + ": empty head");
  if (!body.nulls().empty() || !head.nulls().empty())
    throw ValidationError("rule " + id + ": rules may not contain nulls");
  Rule r;
  r.id = std::move(id);
  TermSet bv = body.variables();
  TermSet hv = head.variables();
  r.body_variables.assign(bv.begin(), bv.end());
  std::set_intersection(bv.begin(), bv.end(), hv.begin(), hv.end(), std::back_inserter(r.frontier));
  std::set_difference(hv.begin(), hv.end(), bv.begin(), bv.end(), std::back_inserter(r.existentials));
  r.body = std::move(body);
  r.head = std::move(head);
  return r;
}

RuleSet::RuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
  stats_ = ruleset_stats(*this);
  for (const auto& r : rules_)
    for (const AtomSet* part : {&r.body, &r.head})
      for (const auto& a : *part) arities_.emplace(a.predicate, a.arity());
}

std::optional<std::size_t> RuleSet::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < rules_.size(); ++i)
    if (rules_[i].id == id) return i;
  return std::nullopt;
}

const Rule& RuleSet::by_id(const std::string& id) const {
  auto i = index_of(id);
  if (!i) throw UnknownTarget("no rule with id " + id);
  return rules_[*i];
}

RulesetStats ruleset_stats(const RuleSet& rs) {
  RulesetStats s;
  for (const auto& r : rs.rules()) {
    s.b = std::max(s.b, r.body.size());
    for (const auto& a : r.body) s.body_predicates.insert(a.predicate);
    for (const AtomSet* part : {&r.body, &r.head})
      for (const auto& a : *part)
        for (const auto& t : a.args)
          if (t.is_constant()) s.rule_constants.insert(t);
  }
  return s;
}

std::string Diagnostic::to_string() const {
  std::string sev = severity == Severity::Error ? "error" : severity == Severity::Warning ? "warning" : "info";
  std::string out;
  if (line) out += std::to_string(line) + ":" + std::to_string(column) + ": ";
  out += sev + " [" + code + "] " + message;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::Error; });
}

std::vector<Diagnostic> validate_kb(const KnowledgeBase& kb) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string code, std::string msg) {
    out.push_back({Diagnostic::Severity::Error, std::move(code), std::move(msg)});
  };

  std::map<std::string, std::pair<std::size_t, std::string>> arity;  // predicate -> (arity, where)
  auto check = [&](const Atom& a, const std::string& where) {
    auto [it, fresh] = arity.emplace(a.predicate, std::make_pair(a.arity(), where));
    if (!fresh && it->second.first != a.arity())
      error("arity-conflict", "predicate " + a.predicate + " used with arity " +
                                  std::to_string(it->second.first) + " in " + it->second.second +
                                  " and arity " + std::to_string(a.arity()) + " in " + where);
  };

  for (const auto& a : kb.factbase) {
    check(a, "the factbase");
    for (const auto& t : a.args) {
      if (t.is_variable())
        error("factbase-variable", "fact " + a.to_string() + " contains variable " + t.to_string());
      else if (t.is_null() && t.provenance().key_kind != NullKeyKind::Initial)
        error("factbase-null", "fact " + a.to_string() + " contains a non-initial null");
    }
  }

  std::set<std::string> ids;
  std::map<Term, std::string> owner;  // variable -> rule id
  for (const auto& r : kb.ruleset.rules()) {
    if (!ids.insert(r.id).second) error("duplicate-rule-id", "rule id " + r.id + " is used twice");
    TermSet vars = r.body.variables();
    TermSet hv = r.head.variables();
    vars.insert(hv.begin(), hv.end());
    for (const auto& v : vars) {
      auto [it, fresh] = owner.emplace(v, r.id);
      if (!fresh && it->second != r.id)
        error("shared-variable", "variable " + v.to_string() + " occurs in rules " + it->second +
                                     " and " + r.id);
    }
    for (const AtomSet* part : {&r.body, &r.head})
      for (const auto& a : *part) check(a, "rule " + r.id);
  }
  return out;
}

}  // namespace chase
