#pragma once

#include <optional>
#include <vector>

#include "gs/fragment.hpp"

namespace gs {

// An interpretation g : N -> M, carried as a bijection from the universe of
// the source onto the classes of one quotient sort of the target fragment.
struct Interpretation {
  SortedUniverse source;   // N
  EqFragment target;       // fragment of M
  std::size_t sort_index;  // the receiving quotient sort
  std::vector<int> map;    // source point -> class index

  struct Flags {
    bool premorphism_ok = false;
    bool embedding = false;
    bool surjection = false;
    bool classified = false;
    std::size_t verified_arity = 0;
  } flags;

  Point image_point(Point source_pt) const {
    return target.class_point(sort_index, map[source_pt]);
  }
  int class_count() const { return target.imaginary(sort_index).class_count; }
};

// Checks the map is a bijection onto the named sort and that every
// transported source relation, sort predicate and constant is invariant in
// the target fragment; returns the interpretation with premorphism_ok set.
Interpretation validate_premorphism(Interpretation g);

struct Classification {
  bool embedding = false;
  bool surjection = false;
  bool isomorphism = false;
  std::size_t verified_arity = 0;
};

// Embedding: orbit partitions of the restricted target group and of Aut(N)
// agree on all k-tuples, k <= min(|N|, arity_cap).  Surjection: every base
// point of the target lies in dcl of the image classes.
Classification classify(const Interpretation& g, std::size_t arity_cap = 0);
Interpretation classify_into(Interpretation g, std::size_t arity_cap = 0);

// The restriction homomorphism Aut(target fragment) -> Aut(N) transported
// along g.  Throws when some automorphism fails to act on the image as an
// automorphism of N (an invalid interpretation).
struct RestrictionHom {
  GroupHom hom;
  bool surjective = false;
};
RestrictionHom restriction_hom(const Interpretation& g, const Limits& limits = {});

// A definable (graph-invariant) structure bijection between two image sorts.
struct DefinableBijection {
  std::size_t from_sort;
  std::size_t to_sort;
  std::vector<int> class_map;
};

// Searches for an Aut-invariant isomorphism between the transported images;
// nullopt means verified absent.  Both interpretations must share the source
// structure and the target fragment base.
std::optional<DefinableBijection> equivalent(const Interpretation& g1,
                                             const Interpretation& g2);

// Inverse of an isomorphism: interprets the target base inside a fragment of
// the source via the dcl-witness construction (witness domains are kept
// disjoint with a tag slot).
Interpretation invert(const Interpretation& g, const Limits& limits = {});

// Composite interpretation (f after g) : source of g -> target of f.  The
// receiving sort of g must have a base/tag-only signature.
Interpretation compose(const Interpretation& f, const Interpretation& g,
                       const Limits& limits = {});

// N interpreted in itself through the identity quotient (single-sort N).
Interpretation identity_interpretation(const SortedUniverse& n);

// Orbit ids of the componentwise action on domain^k; entry t gets the least
// lex index in its orbit.
std::vector<std::size_t> tuple_orbit_partition(const std::vector<Perm>& gens,
                                               const std::vector<Point>& domain,
                                               std::size_t k);

} // namespace gs
