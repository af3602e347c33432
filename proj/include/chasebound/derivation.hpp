#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chasebound/atom.hpp"
#include "chasebound/rules.hpp"

namespace chase {

/// Oblivious, semi-oblivious, restricted and equivalent chase.
enum class Variant { O, SO, R, E };

std::string to_string(Variant v);
/// Accepts o|so|r|e in any case. Throws ValidationError otherwise.
Variant parse_variant(const std::string& text);

/// How fresh nulls are named by the safe extension of a trigger.
enum class NamingMode { TriggerKey, FrontierKey };

std::string to_string(NamingMode m);
NamingMode parse_naming_mode(const std::string& text);

/// FrontierKey for SO (frontier-equal triggers then coincide), TriggerKey otherwise.
NamingMode default_naming(Variant v);

/// A rule index paired with a substitution of the rule's body variables.
struct Trigger {
  std::size_t rule = 0;
  Substitution pi;

  friend bool operator==(const Trigger&, const Trigger&) = default;
  friend auto operator<=>(const Trigger&, const Trigger&) = default;
};

std::string to_string(const Trigger& t, const RuleSet& rules);

/// Extends the trigger's substitution with a deterministic null for every
/// existential variable of the rule.
Substitution safe_extension(const Trigger& t, const Rule& rule, NamingMode naming);

/// pi^s(head).
AtomSet head_image(const Trigger& t, const Rule& rule, NamingMode naming);

/// The nulls introduced for the existential variables by the safe extension.
TermSet fresh_terms(const Trigger& t, const Rule& rule, NamingMode naming);

/// The frontier images of a trigger, in frontier order.
std::vector<Term> frontier_image(const Trigger& t, const Rule& rule);

struct DerivationStep {
  Trigger trigger;
  /// pi(body).
  AtomSet body_image;
  /// pi^s(head) minus the atoms already present; may be empty.
  AtomSet produced;
  std::size_t resulting_factbase_size = 0;
  unsigned trigger_rank = 0;
};

struct AtomRecord {
  unsigned rank = 0;
  /// Index of the step that first produced the atom; empty for initial atoms.
  std::optional<std::size_t> producer;
};

/// A finite derivation: an initial factbase followed by distinct trigger
/// applications, with per-atom rank and provenance.
class Derivation {
 public:
  Derivation(std::shared_ptr<const RuleSet> rules, AtomSet initial, Variant variant,
             NamingMode naming);
  Derivation(std::shared_ptr<const RuleSet> rules, AtomSet initial, Variant variant)
      : Derivation(std::move(rules), std::move(initial), variant, default_naming(variant)) {}

  Variant variant() const { return variant_; }
  NamingMode naming() const { return naming_; }
  const RuleSet& rules() const { return *rules_; }
  const std::shared_ptr<const RuleSet>& rules_ptr() const { return rules_; }
  const Rule& rule_of(const Trigger& t) const;

  const AtomSet& initial() const { return initial_; }
  /// F_n, the factbase after all steps.
  const AtomSet& factbase() const { return factbase_; }
  const std::vector<DerivationStep>& steps() const { return steps_; }
  std::size_t length() const { return steps_.size(); }
  const std::map<Atom, AtomRecord>& atom_records() const { return records_; }

  /// Throws UnknownTarget for atoms not in the factbase.
  unsigned rank(const Atom& a) const;
  std::optional<unsigned> find_rank(const Atom& a) const;

  bool contains(const Trigger& t) const { return applied_.contains(t); }
  std::optional<std::size_t> step_of(const Trigger& t) const;
  /// Some applied trigger of the same rule agrees with `t` on the frontier.
  bool has_frontier_equal(const Trigger& t) const;

  /// dom(pi) is exactly the body variables and pi(body) is in F_n.
  bool embeds(const Trigger& t) const;
  /// 1 + max rank over pi(body). Requires embeds(t).
  unsigned trigger_rank(const Trigger& t) const;
  AtomSet body_image(const Trigger& t) const;
  AtomSet head_image(const Trigger& t) const;

  /// Appends without checking variant applicability. Throws UnknownTrigger
  /// if the trigger does not embed or is already part of the derivation.
  const DerivationStep& append(const Trigger& t);
  /// Appends after checking variant applicability; throws NotApplicable.
  const DerivationStep& extend(const Trigger& t);

  /// Maximal atom rank, 0 when nothing was produced.
  unsigned depth() const { return depth_; }

 private:
  std::shared_ptr<const RuleSet> rules_;
  Variant variant_;
  NamingMode naming_;
  AtomSet initial_;
  AtomSet factbase_;
  std::vector<DerivationStep> steps_;
  std::map<Atom, AtomRecord> records_;
  std::map<Trigger, std::size_t> applied_;
  std::set<std::pair<std::size_t, std::vector<Term>>> frontier_applied_;
  unsigned depth_ = 0;
};

/// Every trigger of every rule on the factbase, rules in order and, per rule,
/// body homomorphisms in search order.
std::vector<Trigger> enumerate_triggers(const AtomSet& factbase, const RuleSet& rules);

/// Variant applicability of a trigger at the end of `d`:
///  - O: always (once it embeds and was not applied);
///  - SO: no applied trigger of the rule is frontier-equal;
///  - R: pi cannot be extended to map the head into F_n;
///  - E: F_n ∪ pi^s(head) does not map into F_n.
/// Throws UnknownTrigger when pi is not a body embedding into F_n.
bool is_applicable(Variant variant, const Derivation& d, const Trigger& t);

/// Triggers of `d`'s factbase that are `variant`-applicable, enumeration order.
std::vector<Trigger> applicable_triggers(Variant variant, const Derivation& d);

Derivation extend(Derivation d, const Trigger& t);

inline unsigned depth(const Derivation& d) { return d.depth(); }

/// Transitive closure of the direct-ancestor relation. Initial atoms have no
/// ancestors. Throws UnknownTarget.
AtomSet ancestors(const Derivation& d, const Atom& target);
/// The body image of the trigger plus all of its ancestors.
AtomSet ancestors(const Derivation& d, const Trigger& target);

}  // namespace chase
