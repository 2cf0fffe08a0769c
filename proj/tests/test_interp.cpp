#include "doctest.h"

#include "gs/interp.hpp"

using namespace gs;

namespace {

SortedUniverse directed_3cycle() {
  StructureData d;
  d.sorts.push_back({"V", {"a", "b", "c"}});
  d.relations.push_back({"E", {"V", "V"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}});
  return SortedUniverse(d);
}

SortedUniverse free_points(int n) {
  StructureData d;
  d.sorts.push_back({"V", {}});
  for (int i = 0; i < n; ++i) d.sorts[0].elements.push_back("p" + std::to_string(i));
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

// fragment of the 4-cycle with the opposite-pair quotient as sort 0
EqFragment pair_fragment() {
  EqFragment frag(undirected_4cycle());
  QuotientSpec spec;
  spec.name = "pairs";
  spec.signature = {SortRef::base_sort(0)};
  spec.tuples = {{0}, {1}, {2}, {3}};
  spec.use_blocks = true;
  spec.blocks = {{{0}, {2}}, {{1}, {3}}};
  return frag.with_quotient(spec);
}

} // namespace

TEST_CASE("identity interpretation validates and is an isomorphism") {
  auto g = identity_interpretation(directed_3cycle());
  CHECK(g.flags.premorphism_ok);
  auto c = classify(g);
  CHECK(c.embedding);
  CHECK(c.surjection);
  CHECK(c.isomorphism);
}

TEST_CASE("3-cycle mapped onto free points fails premorphism validation") {
  auto free3 = free_points(3);
  EqFragment frag(free3);
  QuotientSpec spec;
  spec.name = "id";
  spec.signature = {SortRef::base_sort(0)};
  spec.tuples = {{0}, {1}, {2}};
  spec.use_blocks = true;
  spec.blocks = {{{0}}, {{1}}, {{2}}};
  Interpretation g;
  g.source = directed_3cycle();
  g.target = frag.with_quotient(spec);
  g.sort_index = 0;
  g.map = {0, 1, 2};
  CHECK_THROWS_WITH_AS(validate_premorphism(g), doctest::Contains("not definable"), error);
}

TEST_CASE("embedding without surjection") {
  // M = one marked point plus a swappable pair; N = the marked point alone
  StructureData d;
  d.sorts.push_back({"V", {"a", "b", "c"}});
  d.relations.push_back({"P", {"V"}, {{"a"}}});
  SortedUniverse m(d);

  StructureData nd;
  nd.sorts.push_back({"W", {"x"}});
  SortedUniverse n(nd);

  EqFragment frag(m);
  QuotientSpec spec;
  spec.name = "mark";
  spec.signature = {SortRef::base_sort(0)};
  spec.tuples = {{0}}; // element a
  spec.use_blocks = true;
  spec.blocks = {{{0}}};
  Interpretation g;
  g.source = n;
  g.target = frag.with_quotient(spec);
  g.sort_index = 0;
  g.map = {0};
  g = validate_premorphism(g);
  auto c = classify(g);
  CHECK(c.embedding);
  CHECK_FALSE(c.surjection);
}

TEST_CASE("pair quotient of the 4-cycle: embedding by orbit comparison, no surjection") {
  Interpretation g;
  g.source = free_points(2);
  g.target = pair_fragment();
  g.sort_index = 0;
  g.map = {0, 1};
  g = validate_premorphism(g);
  auto c = classify(g);
  CHECK(c.embedding);        // restricted group realizes the full swap
  CHECK_FALSE(c.surjection); // vertices stay outside dcl of the two classes
  CHECK_FALSE(c.isomorphism);

  auto r = restriction_hom(g);
  CHECK(r.surjective); // embedding => restriction onto Aut(N)
  CHECK(r.hom.kernel().order() == 4);
  CHECK(r.hom.domain().order() == 8);
}

TEST_CASE("classify is stable under post-composition with Aut(M)") {
  Interpretation g;
  g.source = free_points(2);
  g.target = pair_fragment();
  g.sort_index = 0;
  g.map = {0, 1};
  g = validate_premorphism(g);
  auto base = classify(g);

  Interpretation h = g; // post-compose with the class swap realized by Aut(M)
  h.map = {1, 0};
  h = validate_premorphism(h);
  auto moved = classify(h);
  CHECK(base.embedding == moved.embedding);
  CHECK(base.surjection == moved.surjection);

  CHECK(equivalent(g, h).has_value());

  // pre-composition with an automorphism of N permutes the map the same way
  auto rho = aut(g.source).group.generators().at(0);
  Interpretation pre = g;
  for (Point x = 0; x < g.source.size(); ++x) pre.map[x] = g.map[rho[x]];
  pre = validate_premorphism(pre);
  auto pre_cls = classify(pre);
  CHECK(base.embedding == pre_cls.embedding);
  CHECK(base.surjection == pre_cls.surjection);
}

TEST_CASE("equivalence fails when induced class actions differ") {
  // path a-b-c: Aut swaps a and c
  StructureData d;
  d.sorts.push_back({"V", {"a", "b", "c"}});
  d.relations.push_back({"E", {"V", "V"}, {{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "b"}}});
  SortedUniverse m(d);
  EqFragment frag(m);
  CHECK(frag.aut_group().order() == 2);

  // sort 0: two classes each fixed setwise; sort 1: two classes swapped
  QuotientSpec fixed;
  fixed.name = "fixedpair";
  fixed.signature = {SortRef::base_sort(0), SortRef::base_sort(0)};
  fixed.tuples = {{1, 1}, {0, 2}, {2, 0}}; // (b,b), (a,c), (c,a)
  fixed.use_blocks = true;
  fixed.blocks = {{{1, 1}}, {{0, 2}, {2, 0}}};
  QuotientSpec swapped;
  swapped.name = "swappedpair";
  swapped.signature = {SortRef::base_sort(0), SortRef::base_sort(0)};
  swapped.tuples = {{0, 0}, {2, 2}};
  swapped.use_blocks = true;
  swapped.blocks = {{{0, 0}}, {{2, 2}}};

  auto frag2 = frag.with_quotient(fixed).with_quotient(swapped);
  auto n = free_points(2);

  Interpretation g1{n, frag2, 0, {0, 1}, {}};
  Interpretation g2{n, frag2, 1, {0, 1}, {}};
  g1 = validate_premorphism(g1);
  g2 = validate_premorphism(g2);
  CHECK_FALSE(equivalent(g1, g2).has_value());
}

TEST_CASE("projection interpretations into two independent cycles are inequivalent") {
  StructureData d;
  d.sorts.push_back({"V", {"a", "b", "c", "d", "e", "f"}});
  d.relations.push_back({"E1", {"V", "V"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}});
  d.relations.push_back({"E2", {"V", "V"}, {{"d", "e"}, {"e", "f"}, {"f", "d"}}});
  SortedUniverse m(d);
  EqFragment frag(m);
  CHECK(frag.aut_group().order() == 9);

  QuotientSpec left;
  left.name = "left";
  left.signature = {SortRef::base_sort(0)};
  left.tuples = {{0}, {1}, {2}};
  left.use_blocks = true;
  left.blocks = {{{0}}, {{1}}, {{2}}};
  QuotientSpec right;
  right.name = "right";
  right.signature = {SortRef::base_sort(0)};
  right.tuples = {{3}, {4}, {5}};
  right.use_blocks = true;
  right.blocks = {{{3}}, {{4}}, {{5}}};
  auto frag2 = frag.with_quotient(left).with_quotient(right);

  StructureData nd;
  nd.sorts.push_back({"V", {"a", "b", "c"}});
  nd.relations.push_back({"E1", {"V", "V"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}});
  SortedUniverse n(nd);

  Interpretation g1{n, frag2, 0, {0, 1, 2}, {}};
  g1 = validate_premorphism(g1);

  StructureData nd2 = nd; // same N, but E1 now lands in the right copy
  Interpretation g2{SortedUniverse(nd2), frag2, 1, {0, 1, 2}, {}};
  // E1 transported into the right copy's classes: still invariant? the right
  // cycle carries E2 with the same shape, so the transported set is E2's
  // class graph, which is invariant.
  g2 = validate_premorphism(g2);

  CHECK_FALSE(equivalent(g1, g2).has_value());
}

TEST_CASE("invert the identity interpretation") {
  auto n = directed_3cycle();
  auto g = identity_interpretation(n);
  auto h = invert(g);
  CHECK(h.flags.premorphism_ok);
  auto c = classify(h);
  CHECK(c.isomorphism);

  auto round = compose(h, g);
  auto id = identity_interpretation(n);
  CHECK(equivalent(round, id).has_value());
}

TEST_CASE("invert a relabeling interpretation") {
  auto n = directed_3cycle();
  StructureData d;
  d.sorts.push_back({"V", {"x", "y", "z"}});
  d.relations.push_back({"E", {"V", "V"}, {{"x", "y"}, {"y", "z"}, {"z", "x"}}});
  SortedUniverse m(d);

  EqFragment frag(m);
  QuotientSpec spec;
  spec.name = "id";
  spec.signature = {SortRef::base_sort(0)};
  spec.tuples = {{0}, {1}, {2}};
  spec.use_blocks = true;
  spec.blocks = {{{0}}, {{1}}, {{2}}};
  Interpretation g{n, frag.with_quotient(spec), 0, {0, 1, 2}, {}};
  g = validate_premorphism(g);
  REQUIRE(classify(g).isomorphism);

  auto h = invert(g);
  CHECK(classify(h).isomorphism);
  auto round = compose(h, g);
  CHECK(equivalent(round, identity_interpretation(n)).has_value());

  // invert twice lands back at an interpretation equivalent to g
  auto hh = invert(h);
  CHECK(equivalent(hh, g).has_value());
}

TEST_CASE("invert a quotient-by-trivial-E interpretation") {
  auto n = directed_3cycle();
  auto m = directed_3cycle();
  EqFragment frag(m);
  QuotientSpec spec;
  spec.name = "diag";
  spec.signature = {SortRef::base_sort(0), SortRef::base_sort(0)};
  spec.tuples = {{0, 0}, {1, 1}, {2, 2}};
  spec.use_blocks = true;
  spec.blocks = {{{0, 0}}, {{1, 1}}, {{2, 2}}};
  Interpretation g{n, frag.with_quotient(spec), 0, {0, 1, 2}, {}};
  g = validate_premorphism(g);
  REQUIRE(classify(g).isomorphism);
  auto h = invert(g);
  auto round = compose(h, g);
  CHECK(equivalent(round, identity_interpretation(n)).has_value());
}

TEST_CASE("equivalence of premorphisms is reflexive and symmetric at desk scale") {
  Interpretation g;
  g.source = free_points(2);
  g.target = pair_fragment();
  g.sort_index = 0;
  g.map = {0, 1};
  g = validate_premorphism(g);
  Interpretation h = g;
  h.map = {1, 0};
  h = validate_premorphism(h);
  CHECK(equivalent(g, g).has_value());
  CHECK(equivalent(g, h).has_value() == equivalent(h, g).has_value());
}

TEST_CASE("restriction hom is contravariant on a composite") {
  auto n = directed_3cycle();
  auto g = identity_interpretation(n);
  auto h = invert(g);            // h : M -> N fragment (M == N here)
  auto comp = compose(h, g);     // N -> N fragment
  auto r_comp = restriction_hom(comp);
  auto r_g = restriction_hom(g);
  auto r_h = restriction_hom(h);
  CHECK(r_h.surjective);
  CHECK(r_comp.surjective);

  // generator-level law: r_comp(sigma) = r_g(lift(r_h(cut(sigma)))), where
  // cut restricts to h's fragment domain and lift matches base parts inside
  // g's fragment group
  auto lift = [&](const Perm& base_perm) {
    for (const auto& tau : g.target.aut_group().elements()) {
      bool eq = true;
      for (Point p = 0; p < g.target.base().size() && eq; ++p)
        eq = tau[p] == base_perm[p];
      if (eq) return tau;
    }
    throw error("no lift");
  };
  for (const auto& sigma : comp.target.aut_group().generators()) {
    std::vector<Point> cutimg(h.target.domain_size());
    for (Point p = 0; p < cutimg.size(); ++p) cutimg[p] = sigma[p];
    Perm cut{std::vector<Point>(cutimg.begin(), cutimg.end())};
    Perm via = r_g.hom(lift(r_h.hom(cut)));
    CHECK(r_comp.hom(sigma) == via);
  }
}

TEST_CASE("restriction onto a rigid source is trivial") {
  StructureData md;
  md.sorts.push_back({"V", {"a", "b", "c"}});
  md.relations.push_back({"P", {"V"}, {{"a"}}});
  SortedUniverse m(md);

  StructureData nd;
  nd.sorts.push_back({"W", {"x"}});
  SortedUniverse n(nd);

  EqFragment frag(m);
  QuotientSpec spec;
  spec.name = "mark";
  spec.signature = {SortRef::base_sort(0)};
  spec.tuples = {{0}};
  spec.use_blocks = true;
  spec.blocks = {{{0}}};
  Interpretation g{n, frag.with_quotient(spec), 0, {0}, {}};
  g = validate_premorphism(g);
  auto r = restriction_hom(g);
  CHECK(r.hom.image().order() == 1);
  CHECK(r.surjective); // Aut of the rigid source is itself trivial
}
