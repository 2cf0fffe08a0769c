#pragma once

#include "gs/interp.hpp"

namespace gs {

// The coset quotient sort attached to a subgroup H of Aut(M): classes are
// the H-cosets of the orbit of the canonical enumeration tuple, and the
// pointwise stabilizer of the anchor class is exactly H.
struct CosetImaginary {
  EqFragment fragment;    // extended with the coset sort (last imaginary)
  std::size_t sort_index;
  Point anchor;           // class point of the canonical tuple
  PermGroup base_group;   // Aut of the base structure
  PermGroup subgroup;     // H, on the base domain
};

CosetImaginary coset_imaginary(const SortedUniverse& m, const PermGroup& h,
                               const AutOptions& opts = {}, const Limits& limits = {});

// Extends an existing fragment with the coset sort of a subgroup of its
// automorphism group (given on the fragment's extended domain); returns the
// new fragment and the anchor point.
std::pair<EqFragment, Point> with_coset_imaginary(const EqFragment& frag,
                                                  const PermGroup& h_ext,
                                                  const std::string& name,
                                                  const Limits& limits = {});

struct NormalityCheck {
  bool is_normal = false;
  // The anchor's orbit is a single point of the Galois correspondence:
  // every class in the orbit has pointwise stabilizer exactly H, so the
  // orbit itself is a 0-definable fixed-set choice for H.
  bool anchor_orbit_singleton = false;
};

// The two sides of "normal iff the fixed set can be chosen 0-definable";
// the contract is that they agree.
NormalityCheck normal_iff_zero_definable(const CosetImaginary& ci);

// The exact sequence 1 -> Aut(M/N) -> Aut(M) -> Aut(N) -> 1 attached to a
// 0-definable quotient sort N of the fragment.
struct ExactSequence {
  EqFragment fragment;
  std::size_t sort_index;
  SortedUniverse n_structure; // induced structure on the classes
  Interpretation n_interp;    // N placed into the fragment (identity map)
  GroupHom restriction;       // Aut(fragment) -> Aut(N)
  PermGroup kernel;           // Aut(M/N), the pointwise stabilizer of the sort
  bool exact = false;         // kernel == ker(restriction) and restriction onto
};

ExactSequence exact_sequence(const EqFragment& m, std::size_t sort_index,
                             const Limits& limits = {});

// The interpretation produced from a section of the restriction map, with
// the two dcl conditions verified exhaustively.
struct SectionWitness {
  GroupHom section;             // Aut(N) -> Aut(fragment)
  EqFragment fragment;          // extended with the coset sort of the image
  std::vector<Point> fixed_set; // A = Fix of the section image
  Interpretation interp;        // i : N -> M/A
  bool cond_dcl = false;          // M inside dcl(iN u A)
  bool cond_intersection = false; // A n iN == dcl_N(empty)
};

SectionWitness section_to_interpretation(const ExactSequence& seq, const GroupHom& section,
                                         const Limits& limits = {});

} // namespace gs
