#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chasebound/derivation.hpp"

namespace chase {

enum class SchedulePolicy { Deterministic, SeededRandom };

enum class HaltReason { Terminated, DepthCap, StepCap };

std::string to_string(HaltReason h);
HaltReason parse_halt_reason(const std::string& text);

struct RunOptions {
  SchedulePolicy policy = SchedulePolicy::Deterministic;
  std::uint64_t seed = 0;
  unsigned depth_cap = 64;
  std::size_t step_cap = 100'000;
  /// Defaults to default_naming(variant).
  std::optional<NamingMode> naming;
};

struct RunResult {
  Derivation derivation;
  HaltReason halt;
};

/// Builds one breadth-first derivation rank by rank. Within a rank the
/// applicable triggers are taken in policy order and re-checked right before
/// each application. Halts with DepthCap (without applying it) when the next
/// trigger would create a new atom of rank depth_cap + 1, and with StepCap
/// once step_cap steps have been applied.
RunResult run_breadth_first(Variant variant, const KnowledgeBase& kb, const RunOptions& options = {});

/// A fair run that is not breadth-first: each step picks a uniformly random
/// applicable trigger of any rank. Used to produce arbitrary terminating
/// derivations.
RunResult run_random_order(Variant variant, const KnowledgeBase& kb, std::uint64_t seed,
                           std::size_t step_cap);

struct VerificationReport {
  /// Every step was applicable (under the variant) where it occurs.
  bool valid_variant_derivation = true;
  /// Trigger ranks never decrease.
  bool rank_compatible = true;
  /// At the last step of each rank k, every applicable trigger has rank k+1.
  bool rank_exhaustive = true;
  /// Rank exhaustiveness at every rank boundary except the final one; this is
  /// what a derivation cut off in the middle of a rank satisfies.
  bool breadth_first_prefix = true;
  /// No applicable trigger remains after the last step.
  bool terminating = false;
  std::optional<std::string> first_violation;

  bool breadth_first() const { return rank_compatible && rank_exhaustive; }
};

/// Replays `d` from its initial factbase under `variant` and checks each
/// condition. Never throws for malformed steps; those are reported.
VerificationReport verify_derivation(Variant variant, const Derivation& d);

/// Greedy left-to-right replay from `keep`, retaining each trigger whose body
/// embeds in the factbase built so far. Throws KeepNotSubset.
Derivation restrict(const Derivation& d, const AtomSet& keep);

/// Rank by rank, replays the restricted triggers of that rank that are still
/// applicable, then applies every remaining applicable trigger of that rank
/// in enumeration order. Stops after the highest trigger rank of `restricted`.
/// Throws VariantUnsupported for E.
Derivation breadth_first_completion(Variant variant, const Derivation& restricted);

/// Stable-sorts the triggers of `d` by trigger rank and replays them,
/// dropping any that are no longer applicable.
Derivation reorder_by_rank(Variant variant, const Derivation& d);

enum class BranchOutcome {
  /// No applicable trigger remains.
  Terminated,
  /// The last step created a new atom above the depth target.
  DepthExceeded,
};

std::string to_string(BranchOutcome o);

enum class Pruning {
  None,
  /// Skips search states (rank, factbase with atom ranks) already explored.
  State,
};

struct SearchBudget {
  /// Search nodes (derivation prefixes) that may be expanded; 0 = unlimited.
  std::size_t max_nodes = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct EnumerationOptions {
  Pruning pruning = Pruning::None;
  /// For R: when a trigger cannot disable, and cannot be disabled by, any other
  /// trigger of its rank, only orders that apply it first are explored.
  bool reduce_independent = false;
  SearchBudget budget;
  std::optional<NamingMode> naming;
};

struct SearchStats {
  std::size_t nodes = 0;
  std::size_t leaves = 0;
};

using BranchVisitor = std::function<bool(const Derivation&, BranchOutcome)>;

/// Depth-first search over breadth-first derivations up to `depth_target`.
/// O and SO follow one canonical order per rank; R and E branch over every
/// choice, merging triggers with the same head image. A branch ends when no
/// trigger is applicable or when a step creates a new atom of rank
/// depth_target + 1 (that step is included). E branches where a lower-rank
/// trigger becomes applicable again are dropped. `visit` returns false to
/// stop. Throws BudgetExceeded.
SearchStats for_each_breadth_first_derivation(Variant variant, const std::shared_ptr<const RuleSet>& rules,
                                              const AtomSet& factbase, unsigned depth_target,
                                              const EnumerationOptions& options, const BranchVisitor& visit);

struct EnumeratedDerivation {
  Derivation derivation;
  BranchOutcome outcome;
};

struct EnumerationResult {
  std::vector<EnumeratedDerivation> derivations;
  SearchStats stats;
  /// The budget ran out; `derivations` holds what was found until then.
  bool budget_exhausted = false;
};

EnumerationResult enumerate_breadth_first_derivations(Variant variant, const KnowledgeBase& kb,
                                                      unsigned depth_target,
                                                      const EnumerationOptions& options = {});

}  // namespace chase
