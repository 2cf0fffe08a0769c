#pragma once

#include "gs/structure.hpp"
#include "gs/tower.hpp"

namespace gs {

// Arithmetic in GF(p^m) with the lexicographically least monic irreducible
// modulus.  Elements are coefficient vectors (degree < m, little-endian).
class FiniteField {
public:
  // modulus_rank selects the k-th monic irreducible in lexicographic order
  // (wrapping around), so the same field can be built on different moduli.
  FiniteField(int p, int m, const Limits& limits = {}, std::size_t modulus_rank = 0);

  int characteristic() const { return p_; }
  int degree() const { return m_; }
  std::size_t size() const { return size_; }
  const std::vector<int>& modulus() const { return modulus_; } // monic, length m+1

  using Elem = std::vector<int>; // length m

  Elem zero() const;
  Elem one() const;
  Elem from_index(std::size_t k) const; // base-p digits
  std::size_t index(const Elem& a) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(const Elem& a, std::uint64_t e) const;
  Elem frobenius(const Elem& a) const; // a^p

  // multiplicative order of the Frobenius orbit of a (= degree of a over GF(p))
  int element_degree(const Elem& a) const;

  std::string element_id(const Elem& a) const; // fixed-width base-p digits

private:
  int p_, m_;
  std::size_t size_;
  std::vector<int> modulus_;
};

// The Galois-orbit structure of GF(p^m) over GF(p): ring relations plus
// named prime-field constants; Aut is generated by the Frobenius map.
struct FieldStructure {
  SortedUniverse structure;
  FiniteField field;
  std::vector<std::vector<std::size_t>> orbits; // Frobenius orbits by element index
};

FieldStructure galois_orbit_structure(int p, int m, const Limits& limits = {},
                                      std::size_t modulus_rank = 0);

// The p-power cyclic tower Z/p <- Z/p^2 <- ... with one conjugate per level
// and trivial base-Galois group.
Tower cyclic_tower(int p, int depth, const Limits& limits = {});

// A fixed acceptance tower: chain 1 <- C2 <- C4, two Gk-conjugate copies per
// cover level swapped by Gk = Z/2; optionally one twisted one-step entry.
Tower mixed_tower(bool twisted = false, const Limits& limits = {});

// Equivariant bijection between a cyclic deck-group torsor and the Frobenius
// orbit of a field generator of matching degree.
struct DeckFieldCorrespondence {
  std::vector<std::size_t> torsor_to_orbit; // deck point -> element index
  std::vector<std::size_t> generator_orbit; // Frobenius orbit, element indices
  bool equivariant = false;
};

DeckFieldCorrespondence deck_field_correspondence(int p, int m, const Tower& tower,
                                                  std::size_t level,
                                                  const Limits& limits = {});

// Named regular permutation groups for the functor tests: cyclic <= 16,
// dihedral <= 16, S3, S4, A4, Q8, Z/2 x Z/2.
struct CatalogEntry {
  std::string name;
  PermGroup group; // regular action
};

std::vector<CatalogEntry> group_catalog();

// Seeded random structures for the reconstruction harness: <= max_elems
// elements, <= 3 relations, arity <= 3, resampled until |Aut| <= max_aut.
SortedUniverse random_structure(Rng& rng, std::size_t max_elems, std::uint64_t max_aut,
                                const AutOptions& opts = {});

} // namespace gs
