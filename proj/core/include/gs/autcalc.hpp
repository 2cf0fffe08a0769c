#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gs/permgroup.hpp"
#include "gs/structure.hpp"

namespace gs {

struct AutOptions {
  std::size_t max_universe = Limits{}.max_universe;
  bool certify = true;
};

struct CertLaw {
  std::string name;
  bool pass = true;
};

struct AutResult {
  PermGroup group;
  std::vector<CertLaw> certificate;

  // Re-checks every certified law against the structure.
  bool verify(const SortedUniverse& m) const;
};

// Full automorphism group via partition refinement + backtracking.  Returns a
// strong generating set collected level by level along the canonical base.
AutResult aut(const SortedUniverse& m, const AutOptions& opts = {});

// Structure on the elements of g whose single |g|-ary relation is the orbit
// of the canonical enumeration tuple under left translation.  aut of the
// result is isomorphic to g.
SortedUniverse group_to_structure(const PermGroup& g, const Limits& limits = {});

struct RegularResult {
  SortedUniverse structure;                  // |Aut(N)| elements
  std::vector<std::vector<Point>> tuples;    // element k <-> orbit tuple k of N
};

// Orbit of the canonical enumeration tuple of n under Aut(n), carried as a
// structure with the translation-orbit relation.
RegularResult canonical_regular(const SortedUniverse& n, const AutOptions& opts = {});

// Isomorphism search; sorts, relations and constants are matched by name.
// nullopt means verified absent (the search is exhaustive).
std::optional<std::vector<Point>> iso_structures(const SortedUniverse& a,
                                                 const SortedUniverse& b,
                                                 const AutOptions& opts = {});

} // namespace gs
