#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace chase {

enum class TermKind : std::uint8_t { Constant, Null, Variable };

/// How a null's identity key was built.
///  - Initial: a labelled null supplied with the factbase (`_:w`).
///  - Trigger: the full body substitution of the creating trigger.
///  - Frontier: only the frontier images, so frontier-equal triggers agree.
enum class NullKeyKind : std::uint8_t { Initial, Trigger, Frontier };

struct NullProvenance;

class Term;

namespace detail {
struct TermNode;
const TermNode* node_of(const Term& t);
}  // namespace detail

/// An immutable first-order term: constant, rule variable, or null.
///
/// Terms are cheap handles onto shared immutable nodes. Nodes are interned,
/// so two nulls built from the same provenance are the same node even when
/// they were constructed independently. Ordering is structural.
class Term {
 public:
  static Term constant(std::string name);
  /// `scope` separates the variables of different rules (usually the rule id).
  static Term variable(std::string name, std::string scope = {});
  static Term null(NullProvenance provenance);
  static Term initial_null(std::string label);

  TermKind kind() const;
  bool is_constant() const { return kind() == TermKind::Constant; }
  bool is_variable() const { return kind() == TermKind::Variable; }
  bool is_null() const { return kind() == TermKind::Null; }

  /// Constant or variable name; the label of an initial null.
  const std::string& name() const;
  const std::string& scope() const;
  /// Only valid for nulls.
  const NullProvenance& provenance() const;

  std::size_t hash() const;
  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
  friend const detail::TermNode* detail::node_of(const Term& t);

 private:
  explicit Term(std::shared_ptr<const detail::TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::TermNode> node_;
};

struct NullProvenance {
  std::string rule_id;
  NullKeyKind key_kind = NullKeyKind::Initial;
  /// (variable name, image) pairs ordered by variable name.
  std::vector<std::pair<std::string, Term>> key;
  /// Existential variable name; for initial nulls, the label.
  std::string exvar;
};

using TermSet = std::set<Term>;

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

}  // namespace chase
