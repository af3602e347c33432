#include "chasebound/boundedness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include "chasebound/error.hpp"

namespace chase {

using Clock = std::chrono::steady_clock;

std::string to_string(BoundMode m) { return m == BoundMode::Paper ? "paper" : "safe"; }

BoundMode parse_bound_mode(const std::string& text) {
  if (text == "paper") return BoundMode::Paper;
  if (text == "safe") return BoundMode::Safe;
  throw ValidationError("unknown bound mode '" + text + "' (expected paper or safe)");
}

std::optional<std::chrono::milliseconds> budget_from_environment() {
  const char* raw = std::getenv("CHASEBOUND_BUDGET_MS");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  long long ms = std::strtoll(raw, &end, 10);
  if (*end != '\0' || ms <= 0) return std::nullopt;
  return std::chrono::milliseconds(ms);
}

std::size_t witness_size_bound(std::size_t b, unsigned k, BoundMode mode) {
  unsigned exponent = mode == BoundMode::Safe ? k + 1 : k;
  std::size_t out = 1;
  for (unsigned i = 0; i < exponent; ++i) out *= b;
  return out;
}

std::vector<Term> generic_pool(const RuleSet& rules, std::size_t size) {
  std::vector<Term> pool;
  for (std::size_t i = 1; pool.size() < size; ++i) {
    Term c = Term::constant("c" + std::to_string(i));
    if (!rules.rule_constants().contains(c)) pool.push_back(std::move(c));
  }
  return pool;
}

namespace {

struct Vocabulary {
  std::vector<std::pair<std::string, std::size_t>> predicates;
  std::vector<Term> constants;
  std::size_t max_arity = 0;
};

Vocabulary body_vocabulary(const RuleSet& rules) {
  Vocabulary v;
  for (const auto& p : rules.body_predicates()) {
    std::size_t arity = rules.arities().at(p);
    v.predicates.emplace_back(p, arity);
    v.max_arity = std::max(v.max_arity, arity);
  }
  v.constants.assign(rules.rule_constants().begin(), rules.rule_constants().end());
  return v;
}

void check_deadline(const std::optional<Clock::time_point>& deadline, std::size_t factbases) {
  if (deadline && Clock::now() > *deadline)
    throw BudgetExceeded("decision exceeded its time budget", factbases, 0);
}

/// Calls `emit` for every atom over `pred` whose generic arguments come from
/// pool[0, used) or are new, with new ones introduced in pool order.
void for_each_extension_atom(const std::string& pred, std::size_t arity, const std::vector<Term>& constants,
                             const std::vector<Term>& pool, std::size_t used,
                             const std::function<void(const Atom&, std::size_t)>& emit) {
  Atom atom{pred, std::vector<Term>(arity, Term::constant("_"))};
  std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t pos, std::size_t now_used) {
    if (pos == arity) {
      emit(atom, now_used);
      return;
    }
    for (const auto& c : constants) {
      atom.args[pos] = c;
      fill(pos + 1, now_used);
    }
    std::size_t limit = std::min(now_used + 1, pool.size());
    for (std::size_t g = 0; g < limit; ++g) {
      atom.args[pos] = pool[g];
      fill(pos + 1, std::max(now_used, g + 1));
    }
  };
  fill(0, used);
}

/// Builds the representatives level by level (size 0, 1, ..., max_atoms) and
/// hands each level, sorted by encoding, to `consume`. Stops when it returns
/// false.
void for_each_level(const RuleSet& rules, std::size_t max_atoms, const DeciderBudget& budget,
                    const std::optional<Clock::time_point>& deadline,
                    const std::function<bool(const std::vector<AtomSet>&)>& consume) {
  std::vector<AtomSet> level{AtomSet{}};
  if (!consume(level)) return;
  Vocabulary vocab = body_vocabulary(rules);
  if (vocab.predicates.empty()) return;
  std::vector<Term> pool = generic_pool(rules, max_atoms * vocab.max_arity);
  std::map<Term, std::size_t> pool_index;
  for (std::size_t i = 0; i < pool.size(); ++i) pool_index.emplace(pool[i], i);
  const TermSet& fixed = rules.rule_constants();

  std::size_t total = 1;
  for (std::size_t size = 1; size <= max_atoms; ++size) {
    std::map<std::string, AtomSet> next;
    for (const auto& base : level) {
      check_deadline(deadline, total + next.size());
      std::size_t used = 0;
      for (const auto& t : base.terms())
        if (auto it = pool_index.find(t); it != pool_index.end()) used = std::max(used, it->second + 1);
      for (const auto& [pred, arity] : vocab.predicates) {
        for_each_extension_atom(pred, arity, vocab.constants, pool, used, [&](const Atom& a, std::size_t) {
          if (base.contains(a)) return;
          AtomSet grown = base;
          grown.insert(a);
          CanonicalLabeling lab = canonical_labeling(grown, fixed, budget.canonical_budget);
          if (next.contains(lab.encoding)) return;
          // Generic terms are constants, which substitutions never rename.
          AtomSet canonical;
          for (const auto& atom : grown) {
            Atom r = atom;
            for (auto& t : r.args)
              if (auto it = lab.labels.find(t); it != lab.labels.end()) t = pool[it->second];
            canonical.insert(r);
          }
          next.emplace(lab.encoding, std::move(canonical));
          if (budget.max_factbases && total + next.size() > budget.max_factbases)
            throw BudgetExceeded("more than " + std::to_string(budget.max_factbases) +
                                     " representative factbases",
                                 total + next.size(), 0);
        });
      }
    }
    level.clear();
    for (auto& [encoding, set] : next) level.push_back(std::move(set));
    total += level.size();
    if (level.empty() || !consume(level)) return;
  }
}

std::optional<Clock::time_point> deadline_for(const DeciderBudget& budget) {
  auto span = budget.time ? budget.time : budget_from_environment();
  if (!span) return std::nullopt;
  return Clock::now() + *span;
}

Witness make_witness(Variant variant, unsigned k, const AtomSet& factbase, Derivation d) {
  const DerivationStep& last = d.steps().back();
  Witness w{factbase, d, *last.produced.begin(), last.trigger, {}};
  w.minimized_factbase = shrink_witness(factbase, d, last.trigger);
  VerificationReport rep = verify_derivation(variant, d);
  if (!rep.valid_variant_derivation || !rep.rank_compatible || !rep.breadth_first_prefix)
    throw VerificationFailure("witness derivation does not verify: " + rep.first_violation.value_or("?"));
  if (d.rank(w.offending_atom) != k + 1)
    throw VerificationFailure("witness atom " + w.offending_atom.to_string() + " has rank " +
                              std::to_string(d.rank(w.offending_atom)));
  return w;
}

struct Slot {
  DeepSearchResult result;
  std::exception_ptr error;
};

/// Runs the per-factbase search over `factbases` with `jobs` threads. The
/// result is the one a sequential scan would give: the witness or error at
/// the lowest index wins.
/// Counters are added to `verdict`; `offset` is the index of the first
/// factbase in the whole sequence. Returns true when a witness was found.
bool scan(const BoundedQuery& q, const std::vector<AtomSet>& factbases, const EnumerationOptions& options,
          std::size_t offset, BoundednessVerdict& verdict) {
  std::vector<Slot> slots(factbases.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> limit{factbases.size()};
  auto lower_limit = [&limit](std::size_t i) {
    std::size_t cur = limit.load();
    while (i < cur && !limit.compare_exchange_weak(cur, i)) {
    }
  };
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= factbases.size() || i > limit.load()) return;
      Slot& slot = slots[i];
      try {
        slot.result = find_deep_derivation(q.variant, q.ruleset, factbases[i], q.k, options);
        if (slot.result.derivation) lower_limit(i);
      } catch (...) {
        slot.error = std::current_exception();
        lower_limit(i);
      }
    }
  };
  unsigned jobs = std::max(1u, q.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  for (std::size_t i = 0; i < slots.size(); ++i) {
    Slot& slot = slots[i];
    verdict.factbases_examined = offset + i + 1;
    if (slot.error) {
      try {
        std::rethrow_exception(slot.error);
      } catch (const BudgetExceeded& e) {
        throw BudgetExceeded(e.what(), offset + i, verdict.derivations_examined + e.derivations_examined());
      }
    }
    verdict.derivations_examined += slot.result.stats.leaves;
    if (slot.result.derivation) {
      verdict.bounded = false;
      verdict.witness = make_witness(q.variant, q.k, factbases[i], std::move(*slot.result.derivation));
      return true;
    }
  }
  return false;
}

void check_query(const BoundedQuery& q) {
  if (!q.ruleset) throw ValidationError("no ruleset given");
  if (q.variant == Variant::E)
    throw VariantUnsupported("k-boundedness is only decided for the O, SO and R chase");
}

}  // namespace

std::vector<AtomSet> enumerate_representative_factbases(const RuleSet& rules, std::size_t max_atoms,
                                                        const DeciderBudget& budget) {
  std::vector<AtomSet> out;
  for_each_level(rules, max_atoms, budget, deadline_for(budget), [&out](const std::vector<AtomSet>& level) {
    out.insert(out.end(), level.begin(), level.end());
    return true;
  });
  return out;
}

DeepSearchResult find_deep_derivation(Variant variant, const std::shared_ptr<const RuleSet>& rules,
                                      const AtomSet& factbase, unsigned k, const EnumerationOptions& options) {
  DeepSearchResult out;
  out.stats = for_each_breadth_first_derivation(variant, rules, factbase, k, options,
                                                [&out](const Derivation& d, BranchOutcome o) {
                                                  if (o != BranchOutcome::DepthExceeded) return true;
                                                  out.derivation = d;
                                                  return false;
                                                });
  return out;
}

BoundednessVerdict check_k_bounded(const BoundedQuery& q) {
  check_query(q);
  auto deadline = deadline_for(q.budget);
  std::size_t max_atoms = witness_size_bound(q.ruleset->b(), q.k, q.bound_mode);
  EnumerationOptions options;
  options.pruning = Pruning::State;
  options.reduce_independent = true;
  options.budget.max_nodes = q.budget.max_nodes_per_factbase;
  options.budget.deadline = deadline;

  // Levels are searched as soon as they are built, so a small witness ends
  // the decision before the larger levels are generated.
  BoundednessVerdict verdict;
  std::size_t offset = 0;
  for_each_level(*q.ruleset, max_atoms, q.budget, deadline, [&](const std::vector<AtomSet>& level) {
    bool found = scan(q, level, options, offset, verdict);
    offset += level.size();
    return !found;
  });
  return verdict;
}

AtomSet shrink_witness(const AtomSet& factbase, const Derivation& d, const Trigger& offending) {
  AtomSet out;
  for (const auto& a : ancestors(d, offending))
    if (factbase.contains(a)) out.insert(a);
  return out;
}

AtomSet shrink_witness(const AtomSet& factbase, const Derivation& d, const Atom& offending) {
  AtomSet out;
  for (const auto& a : ancestors(d, offending))
    if (factbase.contains(a)) out.insert(a);
  return out;
}

BoundednessVerdict oracle_check_k_bounded(const BoundedQuery& q, std::size_t extended_pool) {
  check_query(q);
  auto deadline = deadline_for(q.budget);
  const RuleSet& rules = *q.ruleset;
  std::size_t max_atoms = witness_size_bound(rules.b(), q.k, q.bound_mode);
  Vocabulary vocab = body_vocabulary(rules);
  if (extended_pool <= max_atoms * vocab.max_arity)
    throw ValidationError("the oracle pool must exceed max_atoms * max_arity = " +
                          std::to_string(max_atoms * vocab.max_arity));
  std::vector<Term> pool = generic_pool(rules, extended_pool);

  // Sequences of max_atoms atoms (repeats allowed, so smaller sets appear
  // too) in which generic terms are introduced in pool order.
  std::set<AtomSet> sets{AtomSet{}};
  if (!vocab.predicates.empty()) {
    std::vector<Atom> sequence;
    std::function<void(std::size_t)> grow = [&](std::size_t used) {
      if (sequence.size() == max_atoms) {
        sets.emplace(sequence.begin(), sequence.end());
        if (q.budget.max_factbases && sets.size() > q.budget.max_factbases)
          throw BudgetExceeded("oracle exceeded " + std::to_string(q.budget.max_factbases) + " factbases",
                               sets.size(), 0);
        return;
      }
      check_deadline(deadline, sets.size());
      for (const auto& [pred, arity] : vocab.predicates)
        for_each_extension_atom(pred, arity, vocab.constants, pool, used, [&](const Atom& a, std::size_t now) {
          sequence.push_back(a);
          grow(now);
          sequence.pop_back();
        });
    };
    grow(0);
  }
  std::vector<AtomSet> factbases(sets.begin(), sets.end());
  std::stable_sort(factbases.begin(), factbases.end(),
                   [](const AtomSet& a, const AtomSet& b) { return a.size() < b.size(); });

  BoundednessVerdict verdict;
  bool datalog = std::all_of(rules.rules().begin(), rules.rules().end(), [](const Rule& r) { return r.is_datalog(); });
  if (datalog) {
    // Without existentials every breadth-first order yields the same atoms
    // with the same ranks, so one deterministic run per factbase decides.
    for (std::size_t i = 0; i < factbases.size(); ++i) {
      check_deadline(deadline, i);
      verdict.factbases_examined = i + 1;
      ++verdict.derivations_examined;
      RunOptions opt;
      opt.depth_cap = q.k;
      auto run = run_breadth_first(q.variant, KnowledgeBase{factbases[i], rules}, opt);
      if (run.halt != HaltReason::DepthCap) continue;
      Derivation d = std::move(run.derivation);
      for (const auto& t : applicable_triggers(q.variant, d))
        if (d.trigger_rank(t) > q.k && !d.factbase().contains_all(d.head_image(t))) {
          d.append(t);
          break;
        }
      verdict.bounded = false;
      verdict.witness = make_witness(q.variant, q.k, factbases[i], std::move(d));
      return verdict;
    }
    return verdict;
  }

  EnumerationOptions options;
  options.pruning = Pruning::State;
  options.budget.max_nodes = q.budget.max_nodes_per_factbase;
  options.budget.deadline = deadline;
  BoundedQuery sequential = q;
  sequential.jobs = 1;
  scan(sequential, factbases, options, 0, verdict);
  return verdict;
}

}  // namespace chase
