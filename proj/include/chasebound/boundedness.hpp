#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "chasebound/breadth_first.hpp"
#include "chasebound/core.hpp"

namespace chase {

/// Size bound for the factbases the decider examines: b^k (Paper) or
/// b^(k+1) (Safe). Only Safe covers every offending atom of rank k+1.
enum class BoundMode { Paper, Safe };

std::string to_string(BoundMode m);
BoundMode parse_bound_mode(const std::string& text);

struct DeciderBudget {
  /// Representative factbases; 0 = unlimited.
  std::size_t max_factbases = 0;
  /// Search nodes per factbase; 0 = unlimited.
  std::size_t max_nodes_per_factbase = 0;
  /// Wall-clock cap for the whole decision.
  std::optional<std::chrono::milliseconds> time;
  std::size_t canonical_budget = kDefaultCanonicalBudget;
};

/// Reads CHASEBOUND_BUDGET_MS; empty when unset or not a positive integer.
std::optional<std::chrono::milliseconds> budget_from_environment();

struct BoundedQuery {
  std::shared_ptr<const RuleSet> ruleset;
  Variant variant = Variant::R;
  unsigned k = 1;
  BoundMode bound_mode = BoundMode::Safe;
  DeciderBudget budget;
  /// Worker threads over the representative factbases.
  unsigned jobs = 1;
};

struct Witness {
  AtomSet factbase;
  /// Breadth-first derivation from `factbase` whose last step creates
  /// `offending_atom` at rank k+1.
  Derivation derivation;
  Atom offending_atom;
  Trigger offending_trigger;
  /// factbase ∩ ancestors(offending_trigger).
  AtomSet minimized_factbase;
};

struct BoundednessVerdict {
  bool bounded = true;
  std::optional<Witness> witness;
  std::size_t factbases_examined = 0;
  std::size_t derivations_examined = 0;
};

std::size_t witness_size_bound(std::size_t b, unsigned k, BoundMode mode);

/// Name of the i-th generic constant (1-based), skipping rule constants.
std::vector<Term> generic_pool(const RuleSet& rules, std::size_t size);

/// Every factbase of at most `max_atoms` atoms over the body predicates, one
/// per isomorphism class (rule constants fixed), relabelled canonically with
/// the generic pool. Sorted by size, then canonical encoding. Throws
/// BudgetExceeded.
std::vector<AtomSet> enumerate_representative_factbases(const RuleSet& rules, std::size_t max_atoms,
                                                        const DeciderBudget& budget = {});

/// Searches the breadth-first derivations from `factbase` for one whose last
/// step creates an atom of rank k+1.
struct DeepSearchResult {
  std::optional<Derivation> derivation;
  SearchStats stats;
};
DeepSearchResult find_deep_derivation(Variant variant, const std::shared_ptr<const RuleSet>& rules,
                                      const AtomSet& factbase, unsigned k, const EnumerationOptions& options);

/// Throws VariantUnsupported for E and BudgetExceeded when a cap is hit.
BoundednessVerdict check_k_bounded(const BoundedQuery& q);

/// factbase ∩ ancestors of the target. Throws UnknownTarget.
AtomSet shrink_witness(const AtomSet& factbase, const Derivation& d, const Trigger& offending);
AtomSet shrink_witness(const AtomSet& factbase, const Derivation& d, const Atom& offending);

/// Same decision without isomorphism deduplication or the independence
/// reduction: every labelled factbase whose generic terms, taken from a pool
/// of `extended_pool` names, first appear in order. Search states are still
/// memoized, which drops only repeated subtrees. For Datalog rulesets one
/// breadth-first run per factbase is used, since all orders agree there.
/// Desk scale only.
BoundednessVerdict oracle_check_k_bounded(const BoundedQuery& q, std::size_t extended_pool);

}  // namespace chase
