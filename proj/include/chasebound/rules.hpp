#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chasebound/atom.hpp"

namespace chase {

/// An existential rule `body -> head`. Head variables that do not occur in
/// the body are existentially quantified.
struct Rule {
  std::string id;
  AtomSet body;
  AtomSet head;
  /// vars(body) ∩ vars(head), in term order.
  std::vector<Term> frontier;
  /// vars(head) \ vars(body), in term order.
  std::vector<Term> existentials;
  /// vars(body), in term order.
  std::vector<Term> body_variables;

  bool is_datalog() const { return existentials.empty(); }
  std::string to_string() const;
};

/// Builds a rule and computes its frontier and existential variables.
/// Throws ValidationError on an empty body or head, or on nulls.
Rule derive_rule_metadata(std::string id, AtomSet body, AtomSet head);

struct RulesetStats {
  /// Maximum body size, at least 1.
  std::size_t b = 1;
  std::set<std::string> body_predicates;
  TermSet rule_constants;
};

/// An ordered list of rules with unique ids.
class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  const Rule& operator[](std::size_t i) const { return rules_[i]; }

  std::optional<std::size_t> index_of(const std::string& id) const;
  const Rule& by_id(const std::string& id) const;

  std::size_t b() const { return stats_.b; }
  const std::set<std::string>& body_predicates() const { return stats_.body_predicates; }
  const TermSet& rule_constants() const { return stats_.rule_constants; }
  /// Arity of every predicate used in the rules (first occurrence wins).
  const std::map<std::string, std::size_t>& arities() const { return arities_; }

 private:
  std::vector<Rule> rules_;
  RulesetStats stats_;
  std::map<std::string, std::size_t> arities_;
};

RulesetStats ruleset_stats(const RuleSet& rs);

struct KnowledgeBase {
  AtomSet factbase;
  RuleSet ruleset;
};

struct Diagnostic {
  enum class Severity { Info, Warning, Error };
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::size_t line = 0;
  std::size_t column = 0;

  std::string to_string() const;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Arity consistency, variable-free factbase, disjoint rule variables, unique
/// rule ids. An empty list means the KB is valid.
std::vector<Diagnostic> validate_kb(const KnowledgeBase& kb);

}  // namespace chase
