#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gs/perm.hpp"

namespace gs {

// Permutation group with a deterministic stabilizer chain.
//
// Base points are taken in ascending point order (an optional prefix can be
// forced in front, which is how pointwise stabilizers are computed), and
// transversal representatives are the first ones found during breadth-first
// orbit expansion, so identical inputs always yield identical chains.
class PermGroup {
public:
  struct ChainLevel {
    Point base = 0;
    std::vector<Point> orbit;            // discovery order, orbit[0] == base
    std::vector<Perm> transversal;       // transversal[i] maps base -> orbit[i]
    std::vector<Perm> generators;        // generators of this level's group
  };

  static PermGroup trivial(std::size_t degree);
  static PermGroup generated(std::size_t degree, std::vector<Perm> gens);
  static PermGroup generated_with_base(std::size_t degree, std::vector<Perm> gens,
                                       std::vector<Point> base_prefix);

  std::size_t degree() const { return degree_; }
  std::uint64_t order() const { return order_; }
  const std::vector<Perm>& generators() const { return gens_; }
  const std::vector<ChainLevel>& chain() const { return chain_; }

  bool contains(const Perm& p) const;
  bool is_subgroup_of(const PermGroup& g) const;
  bool same_group(const PermGroup& other) const;

  // All elements in lexicographic order; throws bound_error past the cap.
  std::vector<Perm> elements(std::size_t cap = Limits{}.max_elements) const;

  // Subgroup fixing every listed point.
  PermGroup pointwise_stabilizer(std::span<const Point> points) const;

  // Orbit of a point, sorted.
  std::vector<Point> orbit_of(Point p) const;
  // Orbit partition of the natural action, each class sorted, classes
  // ordered by least member.
  std::vector<std::vector<Point>> orbits() const;

  bool fixes_all(std::span<const Point> points) const;

private:
  std::size_t degree_ = 0;
  std::uint64_t order_ = 1;
  std::vector<Perm> gens_;
  std::vector<ChainLevel> chain_;

  void build_chain(const std::vector<Perm>& gens, const std::vector<Point>& base_prefix);
  // Strips p through the chain; returns residue (identity iff member).
  Perm sift(const Perm& p) const;
};

// Exhaustive subgroup list (bottom-up cyclic extension), deduplicated,
// ordered by (order, element list).  Requires |g| <= limits.max_group_order.
std::vector<PermGroup> all_subgroups(const PermGroup& g, std::uint64_t max_order,
                                     const Limits& limits = {});

// Conjugation test on generators; requires h <= g.
bool is_normal(const PermGroup& g, const PermGroup& h);

// Intersection as a subgroup of g (element-wise; desk scale).
PermGroup intersect(const PermGroup& g, const PermGroup& h);

// Homomorphism between permutation groups, stored as a full element table and
// verified on construction.
class GroupHom {
public:
  static GroupHom from_action(const PermGroup& dom, const PermGroup& cod,
                              const std::function<Perm(const Perm&)>& act,
                              const Limits& limits = {});
  static GroupHom from_gen_images(const PermGroup& dom, const PermGroup& cod,
                                  const std::vector<Perm>& dom_gens,
                                  const std::vector<Perm>& images,
                                  const Limits& limits = {});
  static GroupHom identity(const PermGroup& g, const Limits& limits = {});

  const PermGroup& domain() const { return dom_; }
  const PermGroup& codomain() const { return cod_; }

  Perm operator()(const Perm& p) const;

  PermGroup kernel() const;
  PermGroup image() const;
  bool is_surjective() const { return image().order() == cod_.order(); }
  bool is_injective() const { return kernel().order() == 1; }

  // Composition: this after other (other first).
  GroupHom after(const GroupHom& other) const;

  const std::map<Perm, Perm>& table() const { return table_; }

  friend bool operator==(const GroupHom& a, const GroupHom& b) {
    return a.table_ == b.table_;
  }

private:
  PermGroup dom_, cod_;
  std::map<Perm, Perm> table_;

  GroupHom(PermGroup dom, PermGroup cod, std::map<Perm, Perm> table);
  void verify() const;
};

// All sections s of a surjective phi (phi . s = id on the codomain), in
// canonical order; empty when none exists.
std::vector<GroupHom> find_sections(const GroupHom& phi, const Limits& limits = {});

// Abstract group isomorphism search; nullopt when verified absent.
std::optional<GroupHom> iso_groups(const PermGroup& g, const PermGroup& h,
                                   const Limits& limits = {});

// Greedy minimal generating sequence (canonical element order).
std::vector<Perm> generating_sequence(const PermGroup& g, const Limits& limits = {});

} // namespace gs
