#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "chasebound/atom.hpp"

namespace chase {

/// A minimal equivalent subset: there is no homomorphism from the result into
/// one of its strict subsets. Constants are never remapped.
///
/// Folds greedily: while some atom can be dropped (the set maps into itself
/// minus that atom), replace the set by the homomorphic image.
AtomSet core(const AtomSet& atoms);

inline constexpr std::size_t kDefaultCanonicalBudget = 2'000'000;

struct CanonicalLabeling {
  /// Equal for two sets iff they are isomorphic by a renaming that is the
  /// identity on the fixed terms.
  std::string encoding;
  /// Canonical index (0-based) of every renameable term.
  std::map<Term, std::size_t> labels;
};

/// Lexicographically least atom-by-atom encoding over all atom orderings, where
/// renameable terms are numbered by first appearance. Throws ResourceCap when
/// the number of explored partial orderings exceeds `budget`.
CanonicalLabeling canonical_labeling(const AtomSet& atoms, const TermSet& fixed,
                                     std::size_t budget = kDefaultCanonicalBudget);

std::string canonical_form(const AtomSet& atoms, const TermSet& fixed,
                           std::size_t budget = kDefaultCanonicalBudget);

}  // namespace chase
