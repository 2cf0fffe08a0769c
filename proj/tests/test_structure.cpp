#include "doctest.h"

#include "gs/structure.hpp"

using namespace gs;

TEST_CASE("validate: well-formed directed 3-cycle") {
  StructureData d;
  d.sorts.push_back({"V", {"a", "b", "c"}});
  d.relations.push_back({"E", {"V", "V"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}});
  auto rep = validate(d);
  CHECK(rep.ok);
  CHECK(rep.violations.empty());
}

TEST_CASE("validate: missing element is reported") {
  StructureData d;
  d.sorts.push_back({"V", {"a", "b"}});
  d.relations.push_back({"E", {"V", "V"}, {{"a", "zzz"}}});
  auto rep = validate(d);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].find("zzz") != std::string::npos);
  CHECK_THROWS_AS(SortedUniverse{d}, parse_error);
}

TEST_CASE("validate: empty structure is ok with a warning") {
  StructureData d;
  auto rep = validate(d);
  CHECK(rep.ok);
  CHECK_FALSE(rep.warnings.empty());

  StructureData e;
  e.sorts.push_back({"V", {}});
  auto rep2 = validate(e);
  CHECK(rep2.ok);
  CHECK_FALSE(rep2.warnings.empty());
}

TEST_CASE("validate: arity cap") {
  StructureData d;
  d.sorts.push_back({"V", {"a"}});
  StructureData::Relation r;
  r.name = "R";
  r.signature.assign(13, "V");
  d.relations.push_back(r);
  Limits l; // default cap 12
  auto rep = validate(d, l);
  CHECK_FALSE(rep.ok);
  l.max_arity = 16;
  CHECK(validate(d, l).ok);
}

TEST_CASE("canonicalization is deterministic") {
  StructureData d;
  d.sorts.push_back({"W", {"q", "p"}});
  d.sorts.push_back({"V", {"b", "a"}});
  d.relations.push_back({"R", {"V", "W"}, {{"b", "q"}, {"a", "p"}}});
  SortedUniverse m(d);
  CHECK(m.sort_name(0) == "V");
  CHECK(m.sort_name(1) == "W");
  CHECK(m.element_name(0) == "a");
  auto round = SortedUniverse(m.data());
  CHECK(round == m);
}

TEST_CASE("every relation is invariant under computed generators") {
  StructureData d;
  d.sorts.push_back({"V", {"x", "y", "z", "w"}});
  d.relations.push_back({"E", {"V", "V"}, {{"x", "y"}, {"y", "x"}, {"z", "w"}, {"w", "z"}}});
  SortedUniverse m(d);
  // hand-built symmetry: swap the two edges
  Perm p = Perm::from_cycles(4, {{m.element("V", "x"), m.element("V", "z")},
                                 {m.element("V", "y"), m.element("V", "w")}});
  CHECK(m.preserves_all_relations(p));
}
