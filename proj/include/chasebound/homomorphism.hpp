#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "chasebound/atom.hpp"

namespace chase {

/// Decides which source terms the search may remap.
using TermFilter = std::function<bool(const Term&)>;

/// Visits every homomorphism from `source` into `target` whose domain is the
/// set of source terms accepted by `mappable`; all other source terms must
/// occur unchanged in the target. `visit` returns false to stop the search.
/// `mappable` must reject constants.
///
/// Source atoms are matched fewest-candidates-first (ties: more already bound
/// variables, then textual order), and candidates are tried in target order,
/// so the visiting order is deterministic.
void for_each_homomorphism(const AtomSet& source, const AtomSet& target, const TermFilter& mappable,
                           const std::function<bool(const Substitution&)>& visit);

/// Constants are always frozen; variables and nulls are frozen only when listed.
std::optional<Substitution> find_homomorphism(const AtomSet& source, const AtomSet& target,
                                              const TermSet& frozen = {});

std::vector<Substitution> all_homomorphisms(const AtomSet& source, const AtomSet& target,
                                            const TermSet& frozen = {});

/// Constants are fixed; variables and nulls may be renamed.
bool is_isomorphic(const AtomSet& a, const AtomSet& b);

/// Exactly the terms in `fixed` are kept; every other term may be renamed
/// (including constants).
bool is_isomorphic(const AtomSet& a, const AtomSet& b, const TermSet& fixed);

/// Homomorphisms exist in both directions (constants frozen).
bool is_equivalent(const AtomSet& a, const AtomSet& b);

}  // namespace chase
