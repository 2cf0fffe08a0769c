#include "doctest.h"

#include <set>

#include "gs/autcalc.hpp"

using namespace gs;

namespace {

SortedUniverse three_free_points() {
  StructureData d;
  d.sorts.push_back({"V", {"a", "b", "c"}});
  return SortedUniverse(d);
}

SortedUniverse directed_3cycle() {
  StructureData d;
  d.sorts.push_back({"V", {"a", "b", "c"}});
  d.relations.push_back({"E", {"V", "V"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}});
  return SortedUniverse(d);
}

SortedUniverse undirected_4cycle() {
  StructureData d;
  d.sorts.push_back({"V", {"v0", "v1", "v2", "v3"}});
  d.relations.push_back({"E",
                         {"V", "V"},
                         {{"v0", "v1"}, {"v1", "v0"}, {"v1", "v2"}, {"v2", "v1"},
                          {"v2", "v3"}, {"v3", "v2"}, {"v3", "v0"}, {"v0", "v3"}}});
  return SortedUniverse(d);
}

// brute force oracle over all 6 permutations of a 3-point sort
int brute_aut_count(const SortedUniverse& m) {
  REQUIRE(m.size() == 3);
  int count = 0;
  std::vector<Point> img{0, 1, 2};
  std::sort(img.begin(), img.end());
  do {
    Perm p{img};
    if (m.is_sort_preserving(p) && m.fixes_constants(p) && m.preserves_all_relations(p))
      ++count;
  } while (std::next_permutation(img.begin(), img.end()));
  return count;
}

} // namespace

TEST_CASE("aut of free points is the full symmetric group") {
  auto r = aut(three_free_points());
  CHECK(r.group.order() == 6);
  CHECK(r.verify(three_free_points()));
}

TEST_CASE("aut of the directed 3-cycle is cyclic of order 3") {
  auto m = directed_3cycle();
  auto r = aut(m);
  CHECK(r.group.order() == 3);
  CHECK(brute_aut_count(m) == 3);
  CHECK(r.verify(m));
}

TEST_CASE("aut of the undirected 4-cycle is dihedral of order 8") {
  CHECK(aut(undirected_4cycle()).group.order() == 8);
}

TEST_CASE("aut respects the size bound") {
  StructureData d;
  d.sorts.push_back({"V", {}});
  for (int i = 0; i < 30; ++i) d.sorts[0].elements.push_back("e" + std::to_string(i));
  AutOptions opts;
  CHECK_THROWS_AS(aut(SortedUniverse(d), opts), bound_error);
  opts.max_universe = 30;
  CHECK(aut(SortedUniverse(d), opts).group.order() > 0);
}

TEST_CASE("aut with constants") {
  StructureData d;
  d.sorts.push_back({"V", {"a", "b", "c"}});
  d.constants.push_back({"c0", "V", "a"});
  CHECK(aut(SortedUniverse(d)).group.order() == 2);
}

TEST_CASE("group_to_structure round trip") {
  auto z3 = PermGroup::generated(3, {Perm::from_cycles(3, {{0, 1, 2}})});
  auto m = group_to_structure(z3);
  CHECK(m.size() == 3);
  CHECK(m.relations().size() == 1);
  CHECK(m.relations()[0].tuples.size() == 3);
  CHECK(m.relations()[0].signature.size() == 3);
  auto back = aut(m);
  CHECK(back.group.order() == 3);
  CHECK(iso_groups(back.group, z3).has_value());

  auto triv = PermGroup::trivial(1);
  auto mt = group_to_structure(triv);
  CHECK(mt.size() == 1);
  CHECK(aut(mt).group.order() == 1);

  auto s3 = PermGroup::generated(3, {Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{0, 1, 2}})});
  Limits wide;
  wide.max_arity = 6;
  auto ms = group_to_structure(s3, wide);
  CHECK(ms.size() == 6);
  auto s3back = aut(ms);
  CHECK(s3back.group.order() == 6);
  // non-abelian: some pair of generators fails to commute
  bool nonabelian = false;
  for (const auto& x : s3back.group.generators())
    for (const auto& y : s3back.group.generators())
      if (x * y != y * x) nonabelian = true;
  CHECK(nonabelian);
  CHECK(iso_groups(s3back.group, s3).has_value());
}

TEST_CASE("group_to_structure arity cap") {
  auto s3 = PermGroup::generated(3, {Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{0, 1, 2}})});
  Limits tight;
  tight.max_arity = 4;
  CHECK_THROWS_AS(group_to_structure(s3, tight), bound_error);
}

TEST_CASE("canonical_regular") {
  auto m3 = canonical_regular(directed_3cycle());
  CHECK(m3.structure.size() == 3);
  CHECK(aut(m3.structure).group.order() == 3);

  StructureData rigid;
  rigid.sorts.push_back({"V", {"a", "b"}});
  rigid.constants.push_back({"c0", "V", "a"});
  rigid.constants.push_back({"c1", "V", "b"});
  auto mr = canonical_regular(SortedUniverse(rigid));
  CHECK(mr.structure.size() == 1);

  StructureData two;
  two.sorts.push_back({"V", {"a", "b"}});
  auto m2 = canonical_regular(SortedUniverse(two));
  CHECK(m2.structure.size() == 2);
  auto z2 = PermGroup::generated(2, {Perm::from_cycles(2, {{0, 1}})});
  CHECK(iso_groups(aut(m2.structure).group, z2).has_value());
}

TEST_CASE("iso_structures") {
  StructureData d1;
  d1.sorts.push_back({"V", {"x", "y", "z"}});
  d1.relations.push_back({"E", {"V", "V"}, {{"x", "y"}, {"y", "z"}, {"z", "x"}}});
  auto renamed = SortedUniverse(d1);
  CHECK(iso_structures(directed_3cycle(), renamed).has_value());

  CHECK_FALSE(iso_structures(directed_3cycle(), three_free_points()).has_value());

  auto cycle = directed_3cycle();
  auto found = iso_structures(cycle, renamed);
  REQUIRE(found.has_value());
  // verify the witness maps the edge relation onto the edge relation
  const auto& ra = cycle.relations()[0];
  const auto& rb = renamed.relations()[0];
  for (const auto& t : ra.tuples) {
    std::vector<Point> img{(*found)[t[0]], (*found)[t[1]]};
    CHECK(std::binary_search(rb.tuples.begin(), rb.tuples.end(), img));
  }
}

TEST_CASE("aut is relabeling-equivariant") {
  auto m = undirected_4cycle();
  Perm pi = Perm::from_cycles(4, {{0, 2, 1}});
  auto conj = m.relabeled(pi);
  auto a1 = aut(m).group;
  auto a2 = aut(conj).group;
  CHECK(a1.order() == a2.order());
  Perm pii = pi.inverse();
  for (const auto& g : a1.generators()) CHECK(a2.contains(pii * g * pi));
}
