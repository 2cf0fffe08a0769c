#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gs/autcalc.hpp"
#include "gs/permgroup.hpp"

namespace gs {

// Chain of finite deck groups with the connecting surjections.  levels[0] is
// the trivial group of the base.
struct GroupChain {
  std::vector<PermGroup> levels;
  std::vector<std::string> names;
  // epis[i][j] : levels[i] ->> levels[j] for j <= i (epis[i][i] = identity)
  std::vector<std::vector<GroupHom>> epis;

  // identity and composition laws, surjectivity; throws naming the violation
  void validate(const Limits& limits = {}) const;
};

GroupChain cyclic_chain(const std::vector<std::uint64_t>& orders, const Limits& limits = {});

// One cover family: a chain group, the conjugate labels with the base-Galois
// action on them, and the constant-field subgroup.
struct CoverSpec {
  std::string label;
  std::size_t chain_index = 0;
  std::vector<std::string> zeros;           // canonical order = sorted
  std::vector<Perm> gk_action;              // one perm of the zeros per Gk generator
  std::optional<PermGroup> constant_field;  // on the combined zeros domain; default: stabilizer of zeros[0]
};

struct DistinguishedSpec {
  // one-step twist overrides: (level, zero) -> element index in the next
  // level's chain group; everything else is the untwisted representative
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> onestep;
  // or a full explicit table: (fromLevel, fromZero, toLevel) -> element index
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> table;
  bool explicit_table = false;
};

struct LevelPoint {
  std::size_t level = 0;
  std::size_t zero = 0;
  friend auto operator<=>(const LevelPoint&, const LevelPoint&) = default;
};

// An intermediate morphism between cover copies: the deck twist composed
// with the chain epi.
struct Morphism {
  LevelPoint from, to;
  Perm twist; // element of the target's chain group
};

struct CoverLevel {
  std::string label;
  std::size_t chain_index = 0;
  std::vector<std::string> zeros;
  PermGroup constant_field;   // subgroup of Gk on the combined zeros domain
  std::size_t zero_offset = 0; // position of zeros[0] in the combined domain
};

struct FactorResult {
  std::uint64_t syntactic_degree = 0;   // constant-field index [Gk : k^mu]
  PermGroup syntactic_constant_field;
  bool syntactic_pure = false;          // trivial geometric deck
  std::uint64_t geometric_degree = 0;   // |G_mu|
  PermGroup geometric_deck;
  bool constant_fields_match = false;   // both ends of the geometric layer
  bool deck_matches_galois = false;     // deck iso to the encoded Gal(K_mu:K_nu)
  bool recomposition_ok = false;
};

struct TruncatedLimit {
  std::vector<LevelPoint> slots;            // all (level, zero) pairs
  std::vector<std::size_t> slot_offsets;    // block offsets in the acting domain
  std::vector<std::vector<int>> space;      // compatible point tuples (per slot)
  std::vector<std::vector<Perm>> tuples;    // compatible group tuples (per slot)
  PermGroup gamma;                          // acting by per-slot left translation
  std::vector<GroupHom> projections;        // per slot
  std::vector<PermGroup> periods;           // kernels of the projections

  struct Laws {
    bool projection_law = false;   // T . p_from = p_to for all entries, all space points
    bool periods_normal = false;
    bool periods_finite_index = false;
    bool quotients_match_deck = false; // gamma/period iso to deck at every slot
    bool residually_trivial = false;   // intersection of all periods = 1
  };
};

struct FiberStructure {
  SortedUniverse full;    // deck sorts + fiber sorts + morphism graphs + i_x
  SortedUniverse forget;  // deck sorts with their induced relations only
  std::vector<LevelPoint> slots;
  std::vector<int> basepoint;             // the compatible tuple behind i_x
  std::vector<std::vector<int>> ix;       // per slot: deck point -> fiber point
};

struct TorsorLaws {
  bool evaluation_surjective = false; // A2': p(U) covers the fiber
  bool action_equivariant = false;    // A2': (g*p)(u) = g(p(u))
  bool free_transitive = false;       // A2': unique g with g*p1 = p2
  bool a3_witness = false;            // A3': the projection lies in the torsor
};

struct SharpResult {
  PermGroup gk;
  PermGroup g_sharp;
  bool equals_gk = false;
  std::string k_sharp_label;
  // first broken transport when proper: (from, to, gk element index)
  std::optional<std::tuple<LevelPoint, LevelPoint, std::size_t>> obstruction;
};

struct SectionDemo {
  SortedUniverse tower_structure; // zeros sorts + union deck sorts + relations
  PermGroup aut_full;
  PermGroup gk_image;             // restriction image on the zeros side
  GroupHom section;               // Gk -> Aut(tower_structure), verified
};

class Tower {
public:
  static Tower build(GroupChain chain, std::vector<CoverSpec> covers,
                     std::vector<Perm> gk_generators, const DistinguishedSpec& dist = {},
                     const Limits& limits = {});

  const GroupChain& chain() const { return chain_; }
  const PermGroup& gk() const { return gk_; }
  std::size_t num_levels() const { return levels_.size(); } // including the base
  const CoverLevel& level(std::size_t i) const { return levels_[i]; }
  const std::vector<Perm>& elements(std::size_t level) const;
  std::size_t degree_of(std::size_t level) const;

  // morphisms exist level-to-level when both the chain epi and the
  // constant-field containment do
  bool level_compatible(std::size_t from_level, std::size_t to_level) const;
  bool compatible(LevelPoint from, LevelPoint to) const;
  std::size_t project_zero(std::size_t from_level, std::size_t zero,
                           std::size_t to_level) const;
  Morphism distinguished(LevelPoint from, LevelPoint to) const;

  // the full coset of morphisms between two compatible copies
  std::vector<Morphism> intermediate_morphisms(LevelPoint from, LevelPoint to) const;
  // the unique deck element of the target with m2 = g . m1
  Perm deck_difference(const Morphism& m1, const Morphism& m2) const;
  // pointwise application of a morphism to a cover point
  int apply_morphism(const Morphism& m, int point) const;

  FactorResult factor_cover(LevelPoint lp) const;
  CoverLevel amalgamate_syntactic(std::size_t level_a, std::size_t level_b) const;

  TruncatedLimit limit_group(const Limits& limits = {}) const;
  TruncatedLimit::Laws limit_laws(const TruncatedLimit& lim) const;

  FiberStructure fiber_structure(const Limits& limits = {}) const;
  PermGroup pi1_et(const FiberStructure& fs, const Limits& limits = {}) const;
  TorsorLaws torsor_axioms(const TruncatedLimit& lim) const;

  SharpResult sharp() const;
  // Theorem-style demo: when k_sharp = k, a verified section of the
  // restriction Aut(tower structure) -> Gk; nullopt otherwise.
  std::optional<SectionDemo> section_demo(const Limits& limits = {}) const;

  // deck group of one cover copy as left translations on its points
  PermGroup deck_group(std::size_t level) const;

private:
  GroupChain chain_;
  PermGroup gk_;
  std::vector<CoverLevel> levels_;
  std::vector<std::vector<Perm>> elems_;        // chain group elements per chain index
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Perm> table_;

  int element_index(std::size_t chain_index, const Perm& p) const;
  Perm epi_apply(std::size_t from_chain, std::size_t to_chain, const Perm& p) const;
  SortedUniverse tower_structure(const Limits& limits) const;

  friend struct TowerAccess;
};

} // namespace gs
