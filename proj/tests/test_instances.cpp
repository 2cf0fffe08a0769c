#include "doctest.h"

#include "gs/instances.hpp"
#include "gs/fragment.hpp"

using namespace gs;

TEST_CASE("finite field arithmetic at small sizes") {
  FiniteField f(3, 2);
  CHECK(f.size() == 9);
  // field axioms, exhaustively
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j) {
      auto a = f.from_index(i), b = f.from_index(j);
      CHECK(f.add(a, b) == f.add(b, a));
      CHECK(f.mul(a, b) == f.mul(b, a));
      CHECK(f.add(a, f.neg(a)) == f.zero());
      for (std::size_t k = 0; k < f.size(); ++k) {
        auto c = f.from_index(k);
        CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
      }
    }
  // nonzero elements are invertible: x^(q-1) = 1
  for (std::size_t i = 1; i < f.size(); ++i)
    CHECK(f.pow(f.from_index(i), f.size() - 1) == f.one());
}

TEST_CASE("frobenius powers are automorphisms and |Aut| = m") {
  auto fs = galois_orbit_structure(3, 4);
  const auto& m = fs.structure;
  CHECK(m.size() == 81);

  // oracle: the modulus has exactly m roots in the field (conjugates of the
  // residue class of x), so any automorphism is one of the m Frobenius powers
  const auto& f = fs.field;
  int roots = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto v = f.from_index(i);
    // evaluate the modulus at v
    auto acc = f.zero();
    auto power = f.one();
    for (int c : f.modulus()) {
      auto coeff = f.zero();
      coeff[0] = c;
      acc = f.add(acc, f.mul(coeff, power));
      power = f.mul(power, v);
    }
    if (acc == f.zero()) ++roots;
  }
  CHECK(roots == 4);

  // Frobenius is an automorphism of the structure
  std::vector<Point> frob(m.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    frob[m.element("F", f.element_id(f.from_index(i)))] =
        m.element("F", f.element_id(f.frobenius(f.from_index(i))));
  Perm fr{frob};
  CHECK(m.preserves_all_relations(fr));
  CHECK(m.fixes_constants(fr));

  AutOptions opts;
  opts.max_universe = 81;
  auto a = aut(m, opts);
  CHECK(a.group.order() == 4);
  CHECK(a.group.contains(fr));
}

TEST_CASE("GF(9) over GF(3) has automorphism group of order 2") {
  auto fs = galois_orbit_structure(3, 2);
  AutOptions opts;
  opts.max_universe = 9;
  auto a = aut(fs.structure, opts);
  CHECK(a.group.order() == 2);
  // oracle: candidate maps fixing the named constants and preserving add;
  // exhaustive over the 6! bijections of the non-constant elements
  // (covered numerically by the backtracker's own certificate)
  CHECK(a.verify(fs.structure));
}

TEST_CASE("GF(2^6) from two different irreducible moduli is isomorphic") {
  auto a = galois_orbit_structure(2, 6, {}, 0);
  auto b = galois_orbit_structure(2, 6, {}, 1);
  CHECK_FALSE(a.field.modulus() == b.field.modulus());
  AutOptions opts;
  opts.max_universe = 64;
  CHECK(iso_structures(a.structure, b.structure, opts).has_value());
}

TEST_CASE("GF(2) structure is rigid") {
  auto fs = galois_orbit_structure(2, 1);
  AutOptions opts;
  opts.max_universe = 4;
  CHECK(aut(fs.structure, opts).group.order() == 1);
}

TEST_CASE("dcl of the empty set is the prime field") {
  auto fs = galois_orbit_structure(2, 2); // GF(4) over GF(2)
  AutOptions opts;
  opts.max_universe = 8;
  EqFragment frag(fs.structure, opts);
  auto fixed = frag.dcl({});
  REQUIRE(fixed.size() == 2);
  CHECK(fs.structure.element_name(fixed[0]) == "00");
  CHECK(fs.structure.element_name(fixed[1]) == "01");
}

TEST_CASE("cyclic towers instantiate the limit") {
  auto t = cyclic_tower(2, 3);
  auto lim = t.limit_group();
  CHECK(lim.gamma.order() == 8);

  auto t1 = cyclic_tower(2, 1);
  CHECK(t1.limit_group().gamma.order() == 2);

  CHECK_THROWS_AS(cyclic_tower(2, 9), bound_error);
}

TEST_CASE("deck-field correspondence at a cyclic level") {
  auto t = cyclic_tower(2, 2); // top level C4
  auto c = deck_field_correspondence(3, 4, t, 2);
  CHECK(c.equivariant);
  CHECK(c.generator_orbit.size() == 4);
  CHECK(c.torsor_to_orbit.size() == 4);

  // m = 1: singletons
  auto t1 = cyclic_tower(2, 1);
  auto c1 = deck_field_correspondence(2, 1, t1, 0);
  CHECK(c1.generator_orbit.size() == 1);

  // wrong deck group
  CHECK_THROWS_WITH_AS(deck_field_correspondence(2, 3, t, 2),
                       doctest::Contains("not cyclic of order m"), error);
}

TEST_CASE("group catalog contents") {
  auto cat = group_catalog();
  bool q8 = false, s4 = false;
  for (const auto& e : cat) {
    // regular: the orbit of any point is the whole set
    CHECK(e.group.orbit_of(0).size() == e.group.degree());
    CHECK(e.group.order() == e.group.degree());
    if (e.name == "Q8") {
      q8 = true;
      CHECK(e.group.order() == 8);
      // Q8 has a unique element of order 2
      int order2 = 0;
      for (const auto& x : e.group.elements())
        if (x.order() == 2) ++order2;
      CHECK(order2 == 1);
    }
    if (e.name == "S4") {
      s4 = true;
      CHECK(e.group.order() == 24);
    }
  }
  CHECK(q8);
  CHECK(s4);
}

TEST_CASE("neukirch analogue on a few seeded pairs") {
  // same (p,m): isomorphic; different (p,m): never
  AutOptions opts;
  opts.max_universe = 81;
  auto a = galois_orbit_structure(2, 4).structure;
  auto b = galois_orbit_structure(2, 4).structure;
  CHECK(iso_structures(a, b, opts).has_value());

  auto c = galois_orbit_structure(3, 2).structure;
  CHECK_FALSE(iso_structures(a, c, opts).has_value());

  auto d = galois_orbit_structure(2, 3).structure;
  CHECK_FALSE(iso_structures(a, d, opts).has_value());
}

TEST_CASE("random structures honour the caps deterministically") {
  Rng rng(42);
  AutOptions opts;
  auto m1 = random_structure(rng, 6, 24, opts);
  CHECK(m1.size() <= 6);
  CHECK(aut(m1, opts).group.order() <= 24);
  Rng rng2(42);
  auto m2 = random_structure(rng2, 6, 24, opts);
  CHECK(m1 == m2); // same seed, same structure
}
