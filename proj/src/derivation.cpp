#include "chasebound/derivation.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "chasebound/error.hpp"
#include "chasebound/homomorphism.hpp"

namespace chase {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::O: return "O";
    case Variant::SO: return "SO";
    case Variant::R: return "R";
    case Variant::E: return "E";
  }
  return "?";
}

Variant parse_variant(const std::string& text) {
  std::string s;
  for (char c : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "o") return Variant::O;
  if (s == "so") return Variant::SO;
  if (s == "r") return Variant::R;
  if (s == "e") return Variant::E;
  throw ValidationError("unknown chase variant '" + text + "' (expected o, so, r or e)");
}

std::string to_string(NamingMode m) { return m == NamingMode::TriggerKey ? "trigger" : "frontier"; }

NamingMode parse_naming_mode(const std::string& text) {
  if (text == "trigger") return NamingMode::TriggerKey;
  if (text == "frontier") return NamingMode::FrontierKey;
  throw ValidationError("unknown naming mode '" + text + "'");
}

NamingMode default_naming(Variant v) {
  return v == Variant::SO ? NamingMode::FrontierKey : NamingMode::TriggerKey;
}

std::string to_string(const Trigger& t, const RuleSet& rules) {
  std::string out = "(" + rules[t.rule].id + ", {";
  bool first = true;
  for (const auto& [var, image] : t.pi) {
    if (!first) out += ',';
    first = false;
    out += var.name() + ":" + image.to_string();
  }
  return out + "})";
}

std::vector<Term> frontier_image(const Trigger& t, const Rule& rule) {
  std::vector<Term> out;
  out.reserve(rule.frontier.size());
  for (const auto& v : rule.frontier) out.push_back(t.pi.apply(v));
  return out;
}

Substitution safe_extension(const Trigger& t, const Rule& rule, NamingMode naming) {
  Substitution ext = t.pi;
  if (rule.existentials.empty()) return ext;
  NullProvenance base;
  base.rule_id = rule.id;
  if (naming == NamingMode::TriggerKey) {
    base.key_kind = NullKeyKind::Trigger;
    for (const auto& [var, image] : t.pi) base.key.emplace_back(var.name(), image);
  } else {
    base.key_kind = NullKeyKind::Frontier;
    for (const auto& v : rule.frontier) base.key.emplace_back(v.name(), t.pi.apply(v));
  }
  for (const auto& z : rule.existentials) {
    NullProvenance p = base;
    p.exvar = z.name();
    ext.bind(z, Term::null(std::move(p)));
  }
  return ext;
}

AtomSet head_image(const Trigger& t, const Rule& rule, NamingMode naming) {
  return safe_extension(t, rule, naming).apply(rule.head);
}

TermSet fresh_terms(const Trigger& t, const Rule& rule, NamingMode naming) {
  Substitution ext = safe_extension(t, rule, naming);
  TermSet out;
  for (const auto& z : rule.existentials) out.insert(ext.apply(z));
  return out;
}

Derivation::Derivation(std::shared_ptr<const RuleSet> rules, AtomSet initial, Variant variant,
                       NamingMode naming)
    : rules_(std::move(rules)), variant_(variant), naming_(naming), initial_(std::move(initial)) {
  if (!rules_) rules_ = std::make_shared<const RuleSet>();
  factbase_ = initial_;
  for (const auto& a : initial_) records_.emplace(a, AtomRecord{0, std::nullopt});
}

const Rule& Derivation::rule_of(const Trigger& t) const {
  if (t.rule >= rules_->size()) throw UnknownTrigger("trigger refers to rule #" + std::to_string(t.rule));
  return (*rules_)[t.rule];
}

unsigned Derivation::rank(const Atom& a) const {
  auto r = find_rank(a);
  if (!r) throw UnknownTarget("atom " + a.to_string() + " does not occur in the derivation");
  return *r;
}

std::optional<unsigned> Derivation::find_rank(const Atom& a) const {
  auto it = records_.find(a);
  if (it == records_.end()) return std::nullopt;
  return it->second.rank;
}

std::optional<std::size_t> Derivation::step_of(const Trigger& t) const {
  auto it = applied_.find(t);
  if (it == applied_.end()) return std::nullopt;
  return it->second;
}

bool Derivation::has_frontier_equal(const Trigger& t) const {
  return frontier_applied_.contains({t.rule, frontier_image(t, rule_of(t))});
}

bool Derivation::embeds(const Trigger& t) const {
  if (t.rule >= rules_->size()) return false;
  const Rule& r = (*rules_)[t.rule];
  if (t.pi.size() != r.body_variables.size()) return false;
  for (const auto& v : r.body_variables)
    if (!t.pi.binds(v)) return false;
  for (const auto& a : r.body)
    if (!factbase_.contains(t.pi.apply(a))) return false;
  return true;
}

unsigned Derivation::trigger_rank(const Trigger& t) const {
  unsigned max_rank = 0;
  for (const auto& a : rule_of(t).body) max_rank = std::max(max_rank, rank(t.pi.apply(a)));
  return max_rank + 1;
}

AtomSet Derivation::body_image(const Trigger& t) const { return t.pi.apply(rule_of(t).body); }

AtomSet Derivation::head_image(const Trigger& t) const {
  return chase::head_image(t, rule_of(t), naming_);
}

const DerivationStep& Derivation::append(const Trigger& t) {
  if (!embeds(t))
    throw UnknownTrigger("trigger " + (t.rule < rules_->size() ? to_string(t, *rules_) : std::string("?")) +
                         " is not a body embedding into the current factbase");
  if (applied_.contains(t)) throw UnknownTrigger("trigger " + to_string(t, *rules_) + " already applied");

  DerivationStep step;
  step.trigger = t;
  step.body_image = body_image(t);
  step.trigger_rank = trigger_rank(t);
  for (const auto& a : head_image(t)) {
    if (factbase_.insert(a)) {
      step.produced.insert(a);
      records_.emplace(a, AtomRecord{step.trigger_rank, steps_.size()});
      depth_ = std::max(depth_, step.trigger_rank);
    }
  }
  step.resulting_factbase_size = factbase_.size();
  applied_.emplace(t, steps_.size());
  frontier_applied_.insert({t.rule, frontier_image(t, rule_of(t))});
  steps_.push_back(std::move(step));
  return steps_.back();
}

const DerivationStep& Derivation::extend(const Trigger& t) {
  if (!is_applicable(variant_, *this, t))
    throw NotApplicable("trigger " + to_string(t, *rules_) + " is not " + to_string(variant_) +
                        "-applicable");
  return append(t);
}

std::vector<Trigger> enumerate_triggers(const AtomSet& factbase, const RuleSet& rules) {
  std::vector<Trigger> out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for_each_homomorphism(rules[i].body, factbase, [](const Term& t) { return t.is_variable(); },
                          [&](const Substitution& pi) {
                            out.push_back(Trigger{i, pi});
                            return true;
                          });
  }
  return out;
}

namespace {

/// Atoms of F_n ∪ H that share a null (transitively) with H, plus H itself.
/// Components not touching H map to themselves, so only these matter.
AtomSet null_closure(const AtomSet& factbase, const AtomSet& head) {
  AtomSet out = head;
  std::deque<Term> queue;
  TermSet seen;
  for (const auto& t : head.nulls())
    if (seen.insert(t).second) queue.push_back(t);
  if (queue.empty()) return out;
  std::map<Term, std::vector<const Atom*>> occurrences;
  for (const auto& a : factbase)
    for (const auto& t : a.args)
      if (t.is_null()) occurrences[t].push_back(&a);
  while (!queue.empty()) {
    Term t = queue.front();
    queue.pop_front();
    auto it = occurrences.find(t);
    if (it == occurrences.end()) continue;
    for (const Atom* a : it->second) {
      if (!out.insert(*a)) continue;
      for (const auto& u : a->args)
        if (u.is_null() && seen.insert(u).second) queue.push_back(u);
    }
  }
  return out;
}

}  // namespace

bool is_applicable(Variant variant, const Derivation& d, const Trigger& t) {
  if (!d.embeds(t))
    throw UnknownTrigger("trigger is not a body embedding into the current factbase");
  if (d.contains(t)) return false;
  const Rule& rule = d.rule_of(t);
  switch (variant) {
    case Variant::O:
      return true;
    case Variant::SO:
      return !d.has_frontier_equal(t);
    case Variant::R: {
      AtomSet head = d.head_image(t);
      TermSet fresh = fresh_terms(t, rule, d.naming());
      bool extends = false;
      for_each_homomorphism(head, d.factbase(), [&fresh](const Term& u) { return fresh.contains(u); },
                            [&](const Substitution&) {
                              extends = true;
                              return false;
                            });
      return !extends;
    }
    case Variant::E: {
      AtomSet head = d.head_image(t);
      if (d.factbase().contains_all(head)) return false;
      AtomSet source = null_closure(d.factbase(), head);
      return !find_homomorphism(source, d.factbase()).has_value();
    }
  }
  return false;
}

std::vector<Trigger> applicable_triggers(Variant variant, const Derivation& d) {
  std::vector<Trigger> out;
  for (auto& t : enumerate_triggers(d.factbase(), d.rules()))
    if (is_applicable(variant, d, t)) out.push_back(std::move(t));
  return out;
}

Derivation extend(Derivation d, const Trigger& t) {
  d.extend(t);
  return d;
}

namespace {

void collect_ancestors(const Derivation& d, const AtomSet& seeds, AtomSet& out) {
  std::deque<Atom> queue(seeds.begin(), seeds.end());
  while (!queue.empty()) {
    Atom a = std::move(queue.front());
    queue.pop_front();
    auto it = d.atom_records().find(a);
    if (it == d.atom_records().end() || !it->second.producer) continue;
    for (const auto& parent : d.steps()[*it->second.producer].body_image)
      if (out.insert(parent)) queue.push_back(parent);
  }
}

}  // namespace

AtomSet ancestors(const Derivation& d, const Atom& target) {
  if (!d.find_rank(target)) throw UnknownTarget("atom " + target.to_string() + " does not occur in the derivation");
  AtomSet out;
  collect_ancestors(d, AtomSet{target}, out);
  return out;
}

AtomSet ancestors(const Derivation& d, const Trigger& target) {
  auto idx = d.step_of(target);
  if (!idx) throw UnknownTarget("trigger " + to_string(target, d.rules()) + " does not occur in the derivation");
  const AtomSet& body = d.steps()[*idx].body_image;
  AtomSet out = body;
  collect_ancestors(d, body, out);
  return out;
}

}  // namespace chase
