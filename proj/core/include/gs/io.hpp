#pragma once

#include <string>

#include "gs/fragment.hpp"
#include "gs/interp.hpp"
#include "gs/tower.hpp"

namespace gs::io {

// Textual structure format, one declaration per line:
//   sort <name> <elem> ...
//   rel <name> : <sort> ... = <elem> ... | <elem> ... | ...
//   const <name> : <sort> = <elem>
// '#' starts a comment.  print_structure emits the canonical form (sorted
// names, lexicographic elements and tuples, single spaces); parsing the
// canonical form and printing again is byte-stable.
std::string print_structure(const SortedUniverse& m);
StructureData parse_structure_text(const std::string& text);

std::string print_structure_json(const SortedUniverse& m, bool pretty = false);
StructureData parse_structure_json(const std::string& text);

// Detects JSON by the first non-space byte; "-" reads standard input.
SortedUniverse load_structure(const std::string& path, const Limits& limits = {});
SortedUniverse structure_from_text(const std::string& text, const Limits& limits = {});

// Permutations: per-sort mapping tables in JSON; cycle notation such as
// "(a b)(c d)" accepted for single-sort universes.
std::string print_perm_json(const SortedUniverse& m, const Perm& p, bool pretty = false);
Perm parse_perm(const SortedUniverse& m, const std::string& text);

// Group files for the functor commands: {"degree": n, "generators": [[...]]}.
std::string print_group_json(const PermGroup& g, bool pretty = false);
PermGroup parse_group_json(const std::string& text, const Limits& limits = {});

// Tower description file; see README for the schema.
Tower load_tower(const std::string& path, const Limits& limits = {});
Tower tower_from_json(const std::string& text, const Limits& limits = {});
std::string print_tower_json(int p, int depth); // the generated cyclic tower file

// Interpretation bundle: {source, target, imaginaries, sort, map}.
struct InterpBundle {
  Interpretation interp; // validated premorphism not yet checked
};
InterpBundle load_interp_bundle(const std::string& path, const Limits& limits = {});
InterpBundle interp_bundle_from_json(const std::string& text, const Limits& limits = {});

// Galois bundle: {structure, imaginaries, sort} without a map.
struct GaloisBundle {
  EqFragment fragment;
  std::size_t sort_index;
};
GaloisBundle load_galois_bundle(const std::string& path, const Limits& limits = {});

std::string read_file(const std::string& path); // "-" = stdin

} // namespace gs::io
