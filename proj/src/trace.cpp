#include "chasebound/trace.hpp"

#include <json.hpp>

#include "chasebound/error.hpp"
#include "chasebound/parser.hpp"

namespace chase {

using Json = nlohmann::ordered_json;

namespace {

Json atoms_json(const AtomSet& atoms) {
  Json out = Json::array();
  for (const auto& a : atoms) out.push_back(a.to_string());
  return out;
}

Json substitution_json(const Substitution& pi) {
  Json out = Json::object();
  for (const auto& [var, image] : pi) out[var.name()] = image.to_string();
  return out;
}

Json trace_json(const Derivation& d, std::optional<HaltReason> halt) {
  Json doc;
  doc["format_version"] = kTraceFormatVersion;
  doc["variant"] = to_string(d.variant());
  doc["naming_mode"] = to_string(d.naming());
  Json rules = Json::array();
  for (const auto& r : d.rules().rules()) rules.push_back(r.to_string());
  doc["rules"] = rules;
  doc["initial"] = atoms_json(d.initial());
  Json steps = Json::array();
  for (const auto& s : d.steps()) {
    Json step;
    step["rule"] = d.rules()[s.trigger.rule].id;
    step["substitution"] = substitution_json(s.trigger.pi);
    step["produced"] = atoms_json(s.produced);
    step["rank"] = s.trigger_rank;
    steps.push_back(step);
  }
  doc["steps"] = steps;
  doc["halt_reason"] = halt ? Json(to_string(*halt)) : Json(nullptr);
  return doc;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SyntaxError(std::string("malformed JSON: ") + e.what(), 0, e.byte);
  }
}

AtomSet atoms_from(const Json& list) {
  AtomSet out;
  for (const auto& item : list) out.insert(parse_atom_list(item.get<std::string>()));
  return out;
}

Trigger trigger_from(const RuleSet& rules, const Json& rule_id, const Json& substitution) {
  auto index = rules.index_of(rule_id.get<std::string>());
  if (!index) throw ReplayFailure("unknown rule id " + rule_id.get<std::string>());
  Trigger t{*index, {}};
  if (!substitution.is_object()) throw ReplayFailure("a substitution must map variable names to terms");
  for (const auto& [var, image] : substitution.items())
    t.pi.bind(Term::variable(var, rules[*index].id), parse_term(image.get<std::string>()));
  return t;
}

TraceDocument trace_from(const Json& doc) {
  try {
    if (!doc.contains("format_version") || doc["format_version"].get<int>() != kTraceFormatVersion)
      throw VersionMismatch("unsupported trace format version " +
                            (doc.contains("format_version") ? doc["format_version"].dump() : std::string("(none)")) +
                            ", expected " + std::to_string(kTraceFormatVersion));
    Variant variant = parse_variant(doc.at("variant").get<std::string>());
    NamingMode naming = parse_naming_mode(doc.at("naming_mode").get<std::string>());
    std::string rules_text;
    for (const auto& r : doc.at("rules")) rules_text += r.get<std::string>() + "\n";
    ParsedKb parsed = parse_kb(rules_text);
    if (has_errors(parsed.diagnostics) || !parsed.kb.factbase.empty())
      throw ReplayFailure("the rules of the trace do not form a valid ruleset");
    auto rules = std::make_shared<const RuleSet>(parsed.kb.ruleset);

    Derivation d(rules, atoms_from(doc.at("initial")), variant, naming);
    std::size_t index = 0;
    for (const auto& step : doc.at("steps")) {
      ++index;
      Trigger t = trigger_from(*rules, step.at("rule"), step.at("substitution"));
      auto where = [&] { return "step " + std::to_string(index) + " " + to_string(t, *rules); };
      if (!d.embeds(t)) throw ReplayFailure(where() + ": body does not embed in the replayed factbase");
      if (d.contains(t)) throw ReplayFailure(where() + ": trigger repeated");
      const DerivationStep& s = d.append(t);
      if (s.produced != atoms_from(step.at("produced")))
        throw ReplayFailure(where() + ": produced " + s.produced.to_string() + ", trace records " +
                            step.at("produced").dump());
      if (s.trigger_rank != step.at("rank").get<unsigned>())
        throw ReplayFailure(where() + ": rank " + std::to_string(s.trigger_rank) + ", trace records " +
                            step.at("rank").dump());
    }
    std::optional<HaltReason> halt;
    if (doc.contains("halt_reason") && !doc["halt_reason"].is_null())
      halt = parse_halt_reason(doc["halt_reason"].get<std::string>());
    return {std::move(d), halt};
  } catch (const Json::exception& e) {
    throw ReplayFailure(std::string("malformed trace: ") + e.what());
  } catch (const SyntaxError& e) {
    throw ReplayFailure(std::string("malformed term in trace: ") + e.what());
  }
}

}  // namespace

std::string serialize_trace(const Derivation& d, std::optional<HaltReason> halt) {
  return trace_json(d, halt).dump(2) + "\n";
}

TraceDocument deserialize_trace(const std::string& text) { return trace_from(parse_json(text)); }

std::string serialize_witness(const Witness& w, Variant variant, unsigned k, BoundMode mode) {
  Json doc;
  doc["format_version"] = kTraceFormatVersion;
  doc["kind"] = "witness";
  doc["variant"] = to_string(variant);
  doc["k"] = k;
  doc["bound_mode"] = to_string(mode);
  doc["offending_atom"] = w.offending_atom.to_string();
  Json trigger;
  trigger["rule"] = w.derivation.rules()[w.offending_trigger.rule].id;
  trigger["substitution"] = substitution_json(w.offending_trigger.pi);
  doc["offending_trigger"] = trigger;
  doc["factbase"] = atoms_json(w.factbase);
  doc["minimized_factbase"] = atoms_json(w.minimized_factbase);
  doc["derivation"] = trace_json(w.derivation, std::nullopt);
  return doc.dump(2) + "\n";
}

bool is_witness_document(const std::string& text) {
  Json doc = parse_json(text);
  return doc.is_object() && doc.contains("kind") && doc["kind"] == "witness";
}

WitnessDocument deserialize_witness(const std::string& text) {
  Json doc = parse_json(text);
  try {
    if (!doc.contains("format_version") || doc["format_version"].get<int>() != kTraceFormatVersion)
      throw VersionMismatch("unsupported witness format version");
    if (!doc.contains("kind") || doc["kind"] != "witness") throw ReplayFailure("not a witness document");
    TraceDocument trace = trace_from(doc.at("derivation"));
    WitnessDocument w{parse_variant(doc.at("variant").get<std::string>()),
                      doc.at("k").get<unsigned>(),
                      parse_bound_mode(doc.at("bound_mode").get<std::string>()),
                      atoms_from(doc.at("factbase")),
                      atoms_from(doc.at("minimized_factbase")),
                      *parse_atom_list(doc.at("offending_atom").get<std::string>()).begin(),
                      std::move(trace)};
    const Derivation& d = w.trace.derivation;
    if (w.factbase != d.initial()) throw ReplayFailure("witness factbase differs from the derivation's initial factbase");
    auto rank = d.find_rank(w.offending_atom);
    if (!rank || *rank != w.k + 1)
      throw ReplayFailure("offending atom " + w.offending_atom.to_string() + " does not have rank " +
                          std::to_string(w.k + 1) + " on replay");
    return w;
  } catch (const Json::exception& e) {
    throw ReplayFailure(std::string("malformed witness: ") + e.what());
  }
}

}  // namespace chase
