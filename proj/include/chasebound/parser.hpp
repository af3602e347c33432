#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chasebound/rules.hpp"

namespace chase {

struct ParsedKb {
  KnowledgeBase kb;
  /// Informational notes (variables renamed apart) and validation problems.
  std::vector<Diagnostic> diagnostics;
};

/// Text format:
///   p(a,b).                       fact (several may share a line: p(a), q(b).)
///   [id] p(X,Y), q(Y) -> r(X,Z).  rule; the id is optional (default R<n>)
///   % comment to end of line
/// Identifiers starting with a lowercase letter or digit are constants (or
/// predicates), uppercase ones are variables, `_:name` is an initial null.
/// Head variables missing from the body are existential. Each rule's
/// variables are scoped to the rule. Throws SyntaxError.
ParsedKb parse_kb(std::string_view text);

/// Comma-separated atoms such as `p(a,b), q(_:w)`. Variables get `scope`.
AtomSet parse_atom_list(std::string_view text, const std::string& scope = {});

/// A single term, including produced nulls such as `_:R1#{X:a,Y:b}#Z`.
Term parse_term(std::string_view text, const std::string& scope = {});

/// Facts first, then rules, one statement per line. parse_kb(serialize_kb(kb))
/// yields the same KB.
std::string serialize_kb(const KnowledgeBase& kb);

}  // namespace chase
