#pragma once

#include <optional>
#include <string>

#include "chasebound/boundedness.hpp"
#include "chasebound/breadth_first.hpp"

namespace chase {

inline constexpr int kTraceFormatVersion = 1;

struct TraceDocument {
  Derivation derivation;
  std::optional<HaltReason> halt;
};

/// JSON with keys in a fixed order: format_version, variant, naming_mode,
/// rules, initial, steps (rule, substitution, produced, rank), halt_reason.
std::string serialize_trace(const Derivation& d, std::optional<HaltReason> halt = std::nullopt);

/// Rebuilds the derivation by replaying every step. Throws VersionMismatch,
/// ReplayFailure (a step does not embed, repeats, or yields other atoms or
/// ranks than recorded) or SyntaxError. Variant applicability is not checked;
/// use verify_derivation for that.
TraceDocument deserialize_trace(const std::string& text);

/// A witness embeds its full derivation so it can be checked independently.
std::string serialize_witness(const Witness& w, Variant variant, unsigned k, BoundMode mode);

struct WitnessDocument {
  Variant variant;
  unsigned k = 0;
  BoundMode bound_mode = BoundMode::Safe;
  AtomSet factbase;
  AtomSet minimized_factbase;
  Atom offending_atom;
  TraceDocument trace;
};

WitnessDocument deserialize_witness(const std::string& text);

/// Whether `text` holds a witness document rather than a plain trace.
bool is_witness_document(const std::string& text);

}  // namespace chase
