// Command-line front end: run, kbounded, restrict, verify.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "chasebound/boundedness.hpp"
#include "chasebound/breadth_first.hpp"
#include "chasebound/dot.hpp"
#include "chasebound/error.hpp"
#include "chasebound/parser.hpp"
#include "chasebound/trace.hpp"

namespace {

using namespace chase;

enum Exit : int { kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3, kVerification = 4 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

KnowledgeBase load_kb(const std::string& path) {
  ParsedKb parsed = parse_kb(read_file(path));
  for (const auto& d : parsed.diagnostics)
    if (d.severity != Diagnostic::Severity::Info) std::cerr << path << ":" << d.to_string() << "\n";
  if (has_errors(parsed.diagnostics)) throw ValidationError(path + ": invalid knowledge base");
  return parsed.kb;
}

void print_report(const VerificationReport& r) {
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  std::cout << "valid derivation:     " << yn(r.valid_variant_derivation) << "\n"
            << "rank compatible:      " << yn(r.rank_compatible) << "\n"
            << "rank exhaustive:      " << yn(r.rank_exhaustive) << "\n"
            << "breadth-first prefix: " << yn(r.breadth_first_prefix) << "\n"
            << "terminating:          " << yn(r.terminating) << "\n";
  if (r.first_violation) std::cout << "first violation:      " << *r.first_violation << "\n";
}

struct RunArgs {
  std::string kb, variant, policy = "det", naming, trace, dot;
  std::uint64_t seed = 0;
  unsigned max_depth = 64;
  std::size_t max_steps = 100000;
  bool print = false;
};

int cmd_run(const RunArgs& a) {
  KnowledgeBase kb = load_kb(a.kb);
  Variant variant = parse_variant(a.variant);
  RunOptions opt;
  if (a.policy == "random") opt.policy = SchedulePolicy::SeededRandom;
  else if (a.policy != "det") throw ValidationError("unknown policy '" + a.policy + "' (expected det or random)");
  opt.seed = a.seed;
  opt.depth_cap = a.max_depth;
  opt.step_cap = a.max_steps;
  if (!a.naming.empty()) opt.naming = parse_naming_mode(a.naming);
  RunResult res = run_breadth_first(variant, kb, opt);
  const Derivation& d = res.derivation;
  std::cout << "halt:  " << to_string(res.halt) << "\n"
            << "depth: " << d.depth() << "\n"
            << "steps: " << d.length() << "\n"
            << "atoms: " << d.factbase().size() << "\n";
  if (a.print)
    for (const auto& [atom, record] : d.atom_records()) std::cout << record.rank << "  " << atom.to_string() << "\n";
  if (!a.trace.empty()) write_file(a.trace, serialize_trace(d, res.halt));
  if (!a.dot.empty()) write_file(a.dot, export_dot(d));
  return res.halt == HaltReason::Terminated ? kOk : kNegative;
}

struct BoundArgs {
  std::string rules, variant, bound_mode = "safe", witness;
  unsigned k = 1;
  unsigned jobs = 1;
  long long budget_ms = 0;
  std::size_t budget_factbases = 0;
  std::size_t budget_nodes = 0;
};

int cmd_kbounded(const BoundArgs& a) {
  KnowledgeBase kb = load_kb(a.rules);
  BoundedQuery q;
  q.ruleset = std::make_shared<const RuleSet>(kb.ruleset);
  q.variant = parse_variant(a.variant);
  q.k = a.k;
  q.bound_mode = parse_bound_mode(a.bound_mode);
  q.jobs = a.jobs;
  if (a.budget_ms > 0) q.budget.time = std::chrono::milliseconds(a.budget_ms);
  q.budget.max_factbases = a.budget_factbases;
  q.budget.max_nodes_per_factbase = a.budget_nodes;
  BoundednessVerdict v = check_k_bounded(q);
  std::cout << "bounded:              " << (v.bounded ? "yes" : "no") << "\n"
            << "factbases examined:   " << v.factbases_examined << "\n"
            << "derivations examined: " << v.derivations_examined << "\n";
  if (v.witness) {
    const Witness& w = *v.witness;
    std::cout << "witness factbase:     " << w.factbase.to_string() << "\n"
              << "offending atom:       " << w.offending_atom.to_string() << " (rank "
              << w.derivation.rank(w.offending_atom) << ")\n"
              << "minimized factbase:   " << w.minimized_factbase.to_string() << "\n";
    if (!a.witness.empty()) write_file(a.witness, serialize_witness(w, q.variant, q.k, q.bound_mode));
  }
  return v.bounded ? kOk : kNegative;
}

struct RestrictArgs {
  std::string trace, keep, out;
  bool complete = false;
};

int cmd_restrict(const RestrictArgs& a) {
  TraceDocument doc = deserialize_trace(read_file(a.trace));
  AtomSet keep = parse_atom_list(a.keep);
  Derivation r = restrict(doc.derivation, keep);
  if (a.complete) r = breadth_first_completion(r.variant(), r);
  write_file(a.out, serialize_trace(r));
  std::cout << "steps kept: " << r.length() << " of " << doc.derivation.length() << "\n";
  print_report(verify_derivation(r.variant(), r));
  return kOk;
}

int cmd_verify(const std::string& path) {
  std::string text = read_file(path);
  if (is_witness_document(text)) {
    WitnessDocument w = deserialize_witness(text);
    std::cout << "witness: " << w.offending_atom.to_string() << " reaches rank " << w.k + 1 << " from "
              << w.factbase.size() << " atoms\n";
    VerificationReport r = verify_derivation(w.variant, w.trace.derivation);
    print_report(r);
    return r.valid_variant_derivation && r.rank_compatible && r.breadth_first_prefix ? kOk : kNegative;
  }
  TraceDocument doc = deserialize_trace(text);
  VerificationReport r = verify_derivation(doc.derivation.variant(), doc.derivation);
  print_report(r);
  return r.valid_variant_derivation ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chase engine and k-boundedness decider for existential rules"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Build one breadth-first chase derivation");
  run_cmd->add_option("--kb", run.kb, "Knowledge base file")->required();
  run_cmd->add_option("--variant", run.variant, "o, so, r or e")->required();
  run_cmd->add_option("--policy", run.policy, "det or random");
  run_cmd->add_option("--seed", run.seed, "Seed for the random policy");
  run_cmd->add_option("--max-depth", run.max_depth, "Stop before creating an atom deeper than this");
  run_cmd->add_option("--max-steps", run.max_steps, "Stop after this many steps");
  run_cmd->add_option("--naming", run.naming, "Null naming: trigger or frontier");
  run_cmd->add_option("--trace", run.trace, "Write the derivation trace here");
  run_cmd->add_option("--dot", run.dot, "Write a Graphviz rendering here");
  run_cmd->add_flag("--print", run.print, "Print every atom with its rank");

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("kbounded", "Decide k-boundedness of a ruleset");
  bound_cmd->add_option("--rules", bound.rules, "Ruleset file (facts are ignored)")->required();
  bound_cmd->add_option("--variant", bound.variant, "o, so or r")->required();
  bound_cmd->add_option("--k", bound.k, "Depth bound")->required();
  bound_cmd->add_option("--bound-mode", bound.bound_mode, "paper (b^k atoms) or safe (b^(k+1) atoms)");
  bound_cmd->add_option("--witness", bound.witness, "Write a self-checking witness here");
  bound_cmd->add_option("--jobs", bound.jobs, "Worker threads");
  bound_cmd->add_option("--budget-ms", bound.budget_ms, "Time cap (default: CHASEBOUND_BUDGET_MS)");
  bound_cmd->add_option("--budget-factbases", bound.budget_factbases, "Cap on representative factbases");
  bound_cmd->add_option("--budget-nodes", bound.budget_nodes, "Cap on search nodes per factbase");

  RestrictArgs restr;
  auto* restrict_cmd = app.add_subcommand("restrict", "Restrict a traced derivation to a subset of its facts");
  restrict_cmd->add_option("--trace", restr.trace, "Input trace")->required();
  restrict_cmd->add_option("--keep", restr.keep, "Atoms to keep, e.g. \"p(a,a),p(b,b)\"")->required();
  restrict_cmd->add_flag("--complete", restr.complete, "Extend to a breadth-first derivation");
  restrict_cmd->add_option("--out", restr.out, "Output trace")->required();

  std::string verify_path;
  auto* verify_cmd = app.add_subcommand("verify", "Replay and check a trace or witness");
  verify_cmd->add_option("--trace", verify_path, "Trace or witness file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*bound_cmd) return cmd_kbounded(bound);
    if (*restrict_cmd) return cmd_restrict(restr);
    if (*verify_cmd) return cmd_verify(verify_path);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << " (factbases examined: " << e.factbases_examined()
              << ", derivations examined: " << e.derivations_examined() << ")\n";
    return kBudget;
  } catch (const ResourceCap& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ReplayFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kVerification;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kVerification;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
