#include "chasebound/term.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <tuple>

#include "chasebound/error.hpp"

namespace chase {
namespace detail {

struct TermNode {
  TermKind kind;
  std::string name;
  std::string scope;
  std::optional<NullProvenance> provenance;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t str_hash(const std::string& s) { return std::hash<std::string>{}(s); }

// Every term is hash-consed: structurally equal terms share one node. Null
// keys refer to their images by node, so deep provenance chains compare in
// constant time.
using InternKey = std::tuple<TermKind, std::string, std::string, int, std::string, std::string,
                             std::vector<std::pair<std::string, const TermNode*>>>;

struct InternTable {
  std::mutex mutex;
  std::map<InternKey, std::weak_ptr<const TermNode>> nodes;
};

InternTable& table() {
  static auto* t = new InternTable;  // outlives static terms destroyed at exit
  return *t;
}

}  // namespace

const TermNode* node_of(const Term& t);

InternKey key_of(const TermNode& n) {
  InternKey key{n.kind, n.name, n.scope, -1, {}, {}, {}};
  if (n.provenance) {
    std::get<3>(key) = static_cast<int>(n.provenance->key_kind);
    std::get<4>(key) = n.provenance->rule_id;
    std::get<5>(key) = n.provenance->exvar;
    for (const auto& [var, image] : n.provenance->key) std::get<6>(key).emplace_back(var, node_of(image));
  }
  return key;
}

std::shared_ptr<const TermNode> intern(TermNode&& fresh) {
  InternKey key = key_of(fresh);
  InternTable& t = table();
  std::lock_guard lock(t.mutex);
  auto it = t.nodes.find(key);
  if (it != t.nodes.end())
    if (auto existing = it->second.lock()) return existing;
  std::shared_ptr<const TermNode> node(new TermNode(std::move(fresh)), [](const TermNode* n) {
    {
      InternTable& tab = table();
      std::lock_guard guard(tab.mutex);
      auto found = tab.nodes.find(key_of(*n));
      if (found != tab.nodes.end() && found->second.expired()) tab.nodes.erase(found);
    }
    delete n;
  });
  t.nodes.insert_or_assign(std::move(key), node);
  return node;
}

}  // namespace detail

Term Term::constant(std::string name) {
  if (name.empty()) throw ValidationError("constant name must be nonempty");
  detail::TermNode node;
  node.kind = TermKind::Constant;
  node.hash = detail::mix(1, detail::str_hash(name));
  node.name = std::move(name);
  return Term(detail::intern(std::move(node)));
}

Term Term::variable(std::string name, std::string scope) {
  if (name.empty()) throw ValidationError("variable name must be nonempty");
  detail::TermNode node;
  node.kind = TermKind::Variable;
  node.hash = detail::mix(detail::mix(3, detail::str_hash(name)), detail::str_hash(scope));
  node.name = std::move(name);
  node.scope = std::move(scope);
  return Term(detail::intern(std::move(node)));
}

Term Term::null(NullProvenance provenance) {
  if (provenance.exvar.empty()) throw ValidationError("null provenance needs a variable or label");
  detail::TermNode node;
  node.kind = TermKind::Null;
  std::size_t h = detail::mix(2, static_cast<std::size_t>(provenance.key_kind));
  h = detail::mix(h, detail::str_hash(provenance.rule_id));
  h = detail::mix(h, detail::str_hash(provenance.exvar));
  for (const auto& [var, image] : provenance.key) {
    h = detail::mix(h, detail::str_hash(var));
    h = detail::mix(h, image.hash());
  }
  node.hash = h;
  if (provenance.key_kind == NullKeyKind::Initial) node.name = provenance.exvar;
  node.provenance = std::move(provenance);
  return Term(detail::intern(std::move(node)));
}

Term Term::initial_null(std::string label) {
  NullProvenance p;
  p.key_kind = NullKeyKind::Initial;
  p.exvar = std::move(label);
  return null(std::move(p));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::string& Term::scope() const { return node_->scope; }

const NullProvenance& Term::provenance() const {
  if (!node_->provenance) throw Error("term " + to_string() + " is not a null");
  return *node_->provenance;
}

std::size_t Term::hash() const { return node_->hash; }

std::string Term::to_string() const {
  if (node_->kind != TermKind::Null) return node_->name;
  const auto& p = *node_->provenance;
  if (p.key_kind == NullKeyKind::Initial) return "_:" + p.exvar;
  std::string out = "_:" + p.rule_id + "#";
  out += p.key_kind == NullKeyKind::Trigger ? '{' : '[';
  bool first = true;
  for (const auto& [var, image] : p.key) {
    if (!first) out += ',';
    first = false;
    out += var;
    out += ':';
    out += image.to_string();
  }
  out += p.key_kind == NullKeyKind::Trigger ? '}' : ']';
  out += '#';
  out += p.exvar;
  return out;
}

bool operator==(const Term& a, const Term& b) { return a.node_ == b.node_; }

namespace detail {
const TermNode* node_of(const Term& t) { return t.node_.get(); }
}  // namespace detail

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  if (x.kind == TermKind::Constant) return x.name.compare(y.name) <=> 0;
  if (x.kind == TermKind::Variable) {
    if (auto c = x.scope.compare(y.scope) <=> 0; c != 0) return c;
    return x.name.compare(y.name) <=> 0;
  }
  const auto& p = *x.provenance;
  const auto& q = *y.provenance;
  if (auto c = p.key_kind <=> q.key_kind; c != 0) return c;
  if (auto c = p.rule_id.compare(q.rule_id) <=> 0; c != 0) return c;
  if (auto c = p.exvar.compare(q.exvar) <=> 0; c != 0) return c;
  if (auto c = p.key.size() <=> q.key.size(); c != 0) return c;
  for (std::size_t i = 0; i < p.key.size(); ++i) {
    if (auto c = p.key[i].first.compare(q.key[i].first) <=> 0; c != 0) return c;
    if (auto c = p.key[i].second <=> q.key[i].second; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

}  // namespace chase
