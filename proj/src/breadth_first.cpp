#include "chasebound/breadth_first.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "chasebound/error.hpp"

namespace chase {

std::string to_string(HaltReason h) {
  switch (h) {
    case HaltReason::Terminated: return "terminated";
    case HaltReason::DepthCap: return "depth_cap";
    case HaltReason::StepCap: return "step_cap";
  }
  return "?";
}

HaltReason parse_halt_reason(const std::string& text) {
  if (text == "terminated") return HaltReason::Terminated;
  if (text == "depth_cap") return HaltReason::DepthCap;
  if (text == "step_cap") return HaltReason::StepCap;
  throw ValidationError("unknown halt reason '" + text + "'");
}

std::string to_string(BranchOutcome o) {
  return o == BranchOutcome::Terminated ? "terminated" : "depth_exceeded";
}

namespace {

bool creates_new_atom(const Derivation& d, const Trigger& t) {
  return !d.factbase().contains_all(d.head_image(t));
}

unsigned lowest_rank(const Derivation& d, const std::vector<Trigger>& triggers) {
  unsigned lowest = ~0u;
  for (const auto& t : triggers) lowest = std::min(lowest, d.trigger_rank(t));
  return lowest;
}

std::vector<Trigger> of_rank(const Derivation& d, std::vector<Trigger> triggers, unsigned rank) {
  std::erase_if(triggers, [&](const Trigger& t) { return d.trigger_rank(t) != rank; });
  return triggers;
}

}  // namespace

RunResult run_breadth_first(Variant variant, const KnowledgeBase& kb, const RunOptions& options) {
  auto rules = std::make_shared<const RuleSet>(kb.ruleset);
  Derivation d(rules, kb.factbase, variant, options.naming.value_or(default_naming(variant)));
  std::mt19937_64 rng(options.seed);

  for (;;) {
    auto applicable = applicable_triggers(variant, d);
    if (applicable.empty()) return {std::move(d), HaltReason::Terminated};
    unsigned rank = lowest_rank(d, applicable);
    auto batch = of_rank(d, std::move(applicable), rank);
    if (options.policy == SchedulePolicy::SeededRandom) std::shuffle(batch.begin(), batch.end(), rng);
    for (const auto& t : batch) {
      if (!is_applicable(variant, d, t)) continue;
      if (d.length() >= options.step_cap) return {std::move(d), HaltReason::StepCap};
      if (d.trigger_rank(t) > options.depth_cap && creates_new_atom(d, t))
        return {std::move(d), HaltReason::DepthCap};
      d.append(t);
    }
  }
}

RunResult run_random_order(Variant variant, const KnowledgeBase& kb, std::uint64_t seed,
                           std::size_t step_cap) {
  auto rules = std::make_shared<const RuleSet>(kb.ruleset);
  Derivation d(rules, kb.factbase, variant);
  std::mt19937_64 rng(seed);
  for (;;) {
    auto applicable = applicable_triggers(variant, d);
    if (applicable.empty()) return {std::move(d), HaltReason::Terminated};
    if (d.length() >= step_cap) return {std::move(d), HaltReason::StepCap};
    std::uniform_int_distribution<std::size_t> pick(0, applicable.size() - 1);
    d.append(applicable[pick(rng)]);
  }
}

VerificationReport verify_derivation(Variant variant, const Derivation& d) {
  VerificationReport rep;
  Derivation replay(d.rules_ptr(), d.initial(), variant, d.naming());
  auto violate = [&rep](std::string msg) {
    if (!rep.first_violation) rep.first_violation = std::move(msg);
  };
  const auto& steps = d.steps();
  const RuleSet& rules = d.rules();

  // Rank of a recorded step on the replayed prefix, if its body embeds there.
  auto rank_in_replay = [&](std::size_t i) -> std::optional<unsigned> {
    const Trigger& t = steps[i].trigger;
    if (!replay.embeds(t)) return std::nullopt;
    return replay.trigger_rank(t);
  };

  unsigned previous = 0;
  bool complete = true;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Trigger& t = steps[i].trigger;
    auto where = [&] {
      return "step " + std::to_string(i + 1) + " " +
             (t.rule < rules.size() ? to_string(t, rules) : std::string("(unknown rule)"));
    };
    if (!replay.embeds(t)) {
      rep.valid_variant_derivation = false;
      violate(where() + ": body does not embed");
      complete = false;
      break;
    }
    if (replay.contains(t)) {
      rep.valid_variant_derivation = false;
      violate(where() + ": trigger repeated");
      complete = false;
      break;
    }
    unsigned rank = replay.trigger_rank(t);
    if (!is_applicable(variant, replay, t)) {
      rep.valid_variant_derivation = false;
      violate(where() + ": not " + to_string(variant) + "-applicable");
    }
    if (rank < previous) {
      rep.rank_compatible = false;
      violate(where() + ": rank " + std::to_string(rank) + " after rank " + std::to_string(previous));
    }
    previous = rank;
    replay.append(t);

    bool final = i + 1 == steps.size();
    bool boundary = final || rank_in_replay(i + 1) != rank;
    if (!boundary) continue;
    for (const auto& u : applicable_triggers(variant, replay)) {
      unsigned r = replay.trigger_rank(u);
      if (r > rank) continue;
      rep.rank_exhaustive = false;
      if (!final) rep.breadth_first_prefix = false;
      violate("after " + where() + ": " + to_string(u, rules) + " of rank " + std::to_string(r) +
              " is still applicable");
      break;
    }
  }
  rep.terminating = complete && applicable_triggers(variant, replay).empty();
  if (!complete) {
    rep.rank_exhaustive = false;
    rep.breadth_first_prefix = false;
  }
  return rep;
}

Derivation restrict(const Derivation& d, const AtomSet& keep) {
  for (const auto& a : keep)
    if (!d.initial().contains(a))
      throw KeepNotSubset("atom " + a.to_string() + " is not in the initial factbase");
  Derivation out(d.rules_ptr(), keep, d.variant(), d.naming());
  for (const auto& step : d.steps())
    if (out.embeds(step.trigger) && !out.contains(step.trigger)) out.append(step.trigger);
  return out;
}

Derivation breadth_first_completion(Variant variant, const Derivation& restricted) {
  if (variant == Variant::E)
    throw VariantUnsupported("breadth-first completion is not defined for the E-chase");
  Derivation out(restricted.rules_ptr(), restricted.initial(), variant, restricted.naming());
  unsigned max_rank = 0;
  for (const auto& s : restricted.steps()) max_rank = std::max(max_rank, s.trigger_rank);

  for (unsigned kappa = 1; kappa <= max_rank; ++kappa) {
    for (const auto& s : restricted.steps()) {
      if (s.trigger_rank != kappa) continue;
      const Trigger& t = s.trigger;
      if (out.embeds(t) && !out.contains(t) && is_applicable(variant, out, t)) out.append(t);
    }
    bool applied = true;
    while (applied) {
      applied = false;
      for (const auto& t : applicable_triggers(variant, out)) {
        if (out.trigger_rank(t) > kappa || !is_applicable(variant, out, t)) continue;
        out.append(t);
        applied = true;
      }
    }
  }
  return out;
}

Derivation reorder_by_rank(Variant variant, const Derivation& d) {
  std::vector<const DerivationStep*> order;
  for (const auto& s : d.steps()) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const DerivationStep* a, const DerivationStep* b) {
    return a->trigger_rank < b->trigger_rank;
  });
  Derivation out(d.rules_ptr(), d.initial(), variant, d.naming());
  for (const DerivationStep* s : order) {
    const Trigger& t = s->trigger;
    if (out.embeds(t) && !out.contains(t) && is_applicable(variant, out, t)) out.append(t);
  }
  return out;
}

namespace {

/// Whether `a` can be mapped onto `b` by renaming only the terms in `mappable`.
bool atom_maps_onto(const Atom& a, const Atom& b, const TermSet& mappable) {
  if (a.predicate != b.predicate || a.arity() != b.arity()) return false;
  std::map<Term, Term> sigma;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    const Term& s = a.args[i];
    const Term& t = b.args[i];
    if (!mappable.contains(s)) {
      if (s != t) return false;
      continue;
    }
    auto [it, fresh] = sigma.emplace(s, t);
    if (!fresh && it->second != t) return false;
  }
  return true;
}

struct Candidate {
  Trigger trigger;
  AtomSet head;
  TermSet fresh;
};

/// No atom of `a`'s head outside `f` can be folded onto an atom of `b`'s
/// head, so applying `b` never makes `a` redundant. Atoms already in `f`
/// are matched by themselves before and after.
bool cannot_disable(const Candidate& a, const Candidate& b, const AtomSet& f) {
  for (const auto& x : a.head) {
    if (f.contains(x)) continue;
    for (const auto& y : b.head)
      if (atom_maps_onto(x, y, a.fresh)) return false;
  }
  return true;
}

/// `c` has a head atom without fresh terms that is neither in `f` nor in
/// another candidate's head, so no order of the others makes it redundant.
bool never_disabled(const Candidate& c, const std::vector<Candidate>& all, const AtomSet& f) {
  for (const auto& x : c.head) {
    if (f.contains(x)) continue;
    bool ground = std::none_of(x.args.begin(), x.args.end(), [&](const Term& t) { return c.fresh.contains(t); });
    if (!ground) continue;
    bool elsewhere = std::any_of(all.begin(), all.end(),
                                 [&](const Candidate& o) { return &o != &c && o.head.contains(x); });
    if (!elsewhere) return true;
  }
  return false;
}

using StateKey = std::pair<unsigned, std::vector<std::pair<Atom, unsigned>>>;

StateKey state_key(const Derivation& d, unsigned rank) {
  StateKey key{rank, {}};
  for (const auto& [atom, record] : d.atom_records()) key.second.emplace_back(atom, record.rank);
  return key;
}

class Search {
 public:
  Search(Variant variant, unsigned depth_target, const EnumerationOptions& options,
         BranchVisitor visit, SearchStats& stats)
      : variant_(variant), depth_target_(depth_target), options_(options), visit_(std::move(visit)), stats_(stats) {}

  void explore(Derivation d) {
    while (!stopped_) {
      tick();
      auto applicable = applicable_triggers(variant_, d);
      if (applicable.empty()) {
        leaf(d, BranchOutcome::Terminated);
        return;
      }
      unsigned rank = lowest_rank(d, applicable);
      // A lower-rank trigger became applicable again (E only): this order
      // cannot be completed into a breadth-first derivation.
      if (!d.steps().empty() && rank < d.steps().back().trigger_rank) return;
      auto batch = of_rank(d, std::move(applicable), rank);

      if (variant_ == Variant::O || variant_ == Variant::SO) {
        // One canonical order: the whole rank in enumeration order. Atoms
        // produced here have this rank, so they cannot enable more triggers
        // of it, and only SO needs the re-check.
        for (const auto& t : batch) {
          if (variant_ == Variant::SO && !is_applicable(variant_, d, t)) continue;
          if (apply(d, t)) return;
        }
        continue;
      }
      std::vector<Trigger> choices;
      {
        if (options_.pruning == Pruning::State && !seen_.insert(state_key(d, rank)).second) return;
        choices = distinct_heads(d, batch);
      }

      if (choices.size() == 1) {
        if (apply(d, choices.front())) return;
        continue;
      }
      for (const auto& t : choices) {
        Derivation child = d;
        if (!apply(child, t)) explore(std::move(child));
        if (stopped_) return;
      }
      return;
    }
  }

 private:
  void tick() {
    ++stats_.nodes;
    if (options_.budget.max_nodes && stats_.nodes > options_.budget.max_nodes)
      throw BudgetExceeded("search exceeded " + std::to_string(options_.budget.max_nodes) + " nodes", 0,
                           stats_.leaves);
    if (options_.budget.deadline && std::chrono::steady_clock::now() > *options_.budget.deadline)
      throw BudgetExceeded("search exceeded its time budget", 0, stats_.leaves);
  }

  void leaf(const Derivation& d, BranchOutcome outcome) {
    ++stats_.leaves;
    if (!visit_(d, outcome)) stopped_ = true;
  }

  /// Returns true when the step ended the branch.
  bool apply(Derivation& d, const Trigger& t) {
    bool exceeds = d.trigger_rank(t) > depth_target_ && creates_new_atom(d, t);
    d.append(t);
    if (!exceeds) return false;
    leaf(d, BranchOutcome::DepthExceeded);
    return true;
  }

  /// One trigger per head image: triggers with the same head image lead to
  /// the same factbase and disable each other.
  std::vector<Trigger> distinct_heads(const Derivation& d, const std::vector<Trigger>& batch) const {
    std::vector<Candidate> candidates;
    std::set<AtomSet> heads;
    for (const auto& t : batch) {
      AtomSet head = d.head_image(t);
      if (!heads.insert(head).second) continue;
      candidates.push_back({t, std::move(head), fresh_terms(t, d.rule_of(t), d.naming())});
    }
    if (options_.reduce_independent && variant_ == Variant::R && candidates.size() > 1) {
      const AtomSet& f = d.factbase();
      std::vector<char> safe(candidates.size());
      for (std::size_t i = 0; i < candidates.size(); ++i) safe[i] = never_disabled(candidates[i], candidates, f);
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        bool independent = true;
        for (std::size_t j = 0; j < candidates.size() && independent; ++j)
          if (i != j)
            independent = (safe[i] || cannot_disable(candidates[i], candidates[j], f)) &&
                          (safe[j] || cannot_disable(candidates[j], candidates[i], f));
        if (independent) return {candidates[i].trigger};
      }
    }
    std::vector<Trigger> out;
    for (auto& c : candidates) out.push_back(std::move(c.trigger));
    return out;
  }

  Variant variant_;
  unsigned depth_target_;
  const EnumerationOptions& options_;
  BranchVisitor visit_;
  SearchStats& stats_;
  std::set<StateKey> seen_;
  bool stopped_ = false;
};

}  // namespace

SearchStats for_each_breadth_first_derivation(Variant variant, const std::shared_ptr<const RuleSet>& rules,
                                              const AtomSet& factbase, unsigned depth_target,
                                              const EnumerationOptions& options, const BranchVisitor& visit) {
  SearchStats stats;
  Search search(variant, depth_target, options, visit, stats);
  search.explore(Derivation(rules, factbase, variant, options.naming.value_or(default_naming(variant))));
  return stats;
}

EnumerationResult enumerate_breadth_first_derivations(Variant variant, const KnowledgeBase& kb,
                                                      unsigned depth_target,
                                                      const EnumerationOptions& options) {
  EnumerationResult result;
  auto rules = std::make_shared<const RuleSet>(kb.ruleset);
  Search search(variant, depth_target, options,
                [&result](const Derivation& d, BranchOutcome o) {
                  result.derivations.push_back({d, o});
                  return true;
                },
                result.stats);
  try {
    search.explore(Derivation(rules, kb.factbase, variant, options.naming.value_or(default_naming(variant))));
  } catch (const BudgetExceeded&) {
    result.budget_exhausted = true;
  }
  return result;
}

}  // namespace chase
