#pragma once

#include <string>

#include "chasebound/derivation.hpp"

namespace chase {

/// Graphviz text: one node per atom labelled `atom : rank`, nodes of equal
/// rank on one level, one edge per (body atom, produced atom) pair of each
/// step, coloured by step.
std::string export_dot(const Derivation& d);

}  // namespace chase
