#include "doctest.h"

#include "gs/instances.hpp"
#include "gs/io.hpp"

using namespace gs;

namespace {

SortedUniverse sample() {
  StructureData d;
  d.sorts.push_back({"W", {"q", "p"}});
  d.sorts.push_back({"V", {"b", "a", "c"}});
  d.relations.push_back({"E", {"V", "W"}, {{"b", "q"}, {"a", "p"}}});
  d.relations.push_back({"U", {"V"}, {{"c"}}});
  d.constants.push_back({"c0", "V", "a"});
  return SortedUniverse(d);
}

} // namespace

TEST_CASE("canonical text round trip is byte-stable") {
  auto m = sample();
  std::string once = io::print_structure(m);
  auto parsed = io::structure_from_text(once);
  std::string twice = io::print_structure(parsed);
  CHECK(once == twice);
  CHECK(parsed == m);
}

TEST_CASE("json round trip preserves the structure") {
  auto m = sample();
  std::string j = io::print_structure_json(m);
  auto parsed = io::structure_from_text(j); // auto-detected as JSON
  CHECK(parsed == m);
  CHECK(io::print_structure_json(parsed) == j);
}

TEST_CASE("text parser reports malformed declarations") {
  CHECK_THROWS_AS(io::parse_structure_text("sort"), parse_error);
  CHECK_THROWS_AS(io::parse_structure_text("rel E V V = a b"), parse_error);
  CHECK_THROWS_AS(io::parse_structure_text("rel E : V V = a"), parse_error);
  CHECK_THROWS_AS(io::parse_structure_text("frob x"), parse_error);
  CHECK_NOTHROW(io::parse_structure_text("# only a comment\n\nsort V a\n"));
}

TEST_CASE("empty relations survive the round trip") {
  StructureData d;
  d.sorts.push_back({"V", {"a", "b"}});
  d.relations.push_back({"E", {"V", "V"}, {}});
  SortedUniverse m(d);
  std::string text = io::print_structure(m);
  CHECK(io::structure_from_text(text) == m);
}

TEST_CASE("permutation io: mapping tables and cycles") {
  StructureData d;
  d.sorts.push_back({"V", {"a", "b", "c"}});
  SortedUniverse m(d);

  Perm rot = io::parse_perm(m, "(a b c)");
  CHECK(rot[m.element("V", "a")] == m.element("V", "b"));

  std::string j = io::print_perm_json(m, rot);
  Perm back = io::parse_perm(m, j);
  CHECK(back == rot);

  CHECK_THROWS_AS(io::parse_perm(m, "(a b"), parse_error);
  CHECK_THROWS_AS(io::parse_perm(sample(), "(a b)"), parse_error); // multi-sort
}

TEST_CASE("group json round trip") {
  auto s3 = PermGroup::generated(3, {Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{0, 1, 2}})});
  auto back = io::parse_group_json(io::print_group_json(s3));
  CHECK(back.same_group(s3));
}

TEST_CASE("tower json: generated cyclic file loads and limits correctly") {
  std::string file = io::print_tower_json(2, 3);
  Tower t = io::tower_from_json(file, {});
  CHECK(t.num_levels() == 4);
  CHECK(t.limit_group().gamma.order() == 8);
}

TEST_CASE("tower json: mixed file with explicit one-step twist") {
  std::string file = R"({
    "chain": {"groups": [{"name":"1","type":"trivial"},
                          {"name":"C2","type":"cyclic","order":2},
                          {"name":"C4","type":"cyclic","order":4}],
               "epis": "auto"},
    "gk": {"ngens": 1},
    "covers": [
      {"label":"mu1","geometric":"C2","zeros":["b0","b1"],"gkAction":[[1,0]],"constantField":"auto"},
      {"label":"mu2","geometric":"C4","zeros":["a0","a1"],"gkAction":[[1,0]],"constantField":"auto"}],
    "distinguished": {"onestep": [{"level":"mu2","zero":"a1","twist":1}]}
  })";
  Tower t = io::tower_from_json(file, {});
  auto sh = t.sharp();
  CHECK_FALSE(sh.equals_gk);
  CHECK(sh.g_sharp.order() == 1);
}

TEST_CASE("tower json: bad input is a parse error") {
  CHECK_THROWS_AS(io::tower_from_json("{", {}), parse_error);
  CHECK_THROWS_AS(io::tower_from_json(R"({"chain":{"groups":[],"epis":"auto"},"covers":[]})", {}),
                  parse_error);
}

TEST_CASE("interp bundle loads and validates") {
  std::string bundle = R"({
    "source": {"sorts":[{"name":"N","elements":["x","y"]}],"relations":[],"constants":[]},
    "target": {
      "structure": {"sorts":[{"name":"V","elements":["v0","v1","v2","v3"]}],
        "relations":[{"name":"E","signature":["V","V"],
          "tuples":[["v0","v1"],["v1","v0"],["v1","v2"],["v2","v1"],["v2","v3"],["v3","v2"],["v3","v0"],["v0","v3"]]}],
        "constants":[]},
      "imaginaries": [{"name":"pairs","signature":["V"],
        "classes": [[["v0"],["v2"]],[["v1"],["v3"]]]}],
      "sort": "pairs"},
    "map": {"x": 0, "y": 1}
  })";
  auto loaded = io::interp_bundle_from_json(bundle, {});
  auto g = validate_premorphism(loaded.interp);
  auto c = classify(g);
  CHECK(c.embedding);
  CHECK_FALSE(c.surjection);
}

TEST_CASE("field structures print deterministically") {
  auto a = galois_orbit_structure(2, 3).structure;
  auto b = galois_orbit_structure(2, 3).structure;
  CHECK(io::print_structure(a) == io::print_structure(b));
  CHECK(io::print_structure_json(a) == io::print_structure_json(b));
}
