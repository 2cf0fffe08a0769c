#include "doctest.h"

#include <set>

#include "gs/permgroup.hpp"

using namespace gs;

namespace {

Perm cyc(std::size_t n, std::vector<std::vector<Point>> cycles) {
  return Perm::from_cycles(n, cycles);
}

// Independent order oracle: breadth-first closure under multiplication.
std::uint64_t closure_order(std::size_t degree, const std::vector<Perm>& gens) {
  std::set<Perm> elems{Perm(degree)};
  std::vector<Perm> queue{Perm(degree)};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (const auto& g : gens) {
      Perm q = queue[i] * g;
      if (elems.insert(q).second) queue.push_back(q);
    }
  return elems.size();
}

} // namespace

TEST_CASE("group_from_generators basic orders") {
  auto c3 = PermGroup::generated(3, {cyc(3, {{0, 1, 2}})});
  CHECK(c3.order() == 3);

  auto s3 = PermGroup::generated(3, {cyc(3, {{0, 1}}), cyc(3, {{0, 1, 2}})});
  CHECK(s3.order() == 6);

  auto triv = PermGroup::generated(4, {});
  CHECK(triv.order() == 1);
  CHECK(triv.contains(Perm(4)));
  CHECK_FALSE(triv.contains(cyc(4, {{0, 1}})));
}

TEST_CASE("generator degree mismatch is rejected") {
  CHECK_THROWS_AS(PermGroup::generated(3, {cyc(4, {{0, 1}})}), error);
}

TEST_CASE("order equals exhaustive closure count at desk scale") {
  std::vector<std::vector<Perm>> cases = {
      {cyc(4, {{0, 1, 2, 3}})},
      {cyc(4, {{0, 1, 2, 3}}), cyc(4, {{0, 2}})},            // D4
      {cyc(5, {{0, 1, 2, 3, 4}}), cyc(5, {{1, 4}, {2, 3}})}, // D5
      {cyc(4, {{0, 1}}), cyc(4, {{0, 1, 2, 3}})},            // S4
      {cyc(6, {{0, 1, 2}}), cyc(6, {{3, 4, 5}})},
  };
  for (const auto& gens : cases) {
    auto g = PermGroup::generated(gens[0].degree(), gens);
    CHECK(g.order() == closure_order(gens[0].degree(), gens));
    CHECK(g.elements().size() == g.order());
  }
}

TEST_CASE("order equals closure count up to order 120") {
  // S5 on 5 points
  auto gens = std::vector<Perm>{cyc(5, {{0, 1}}), cyc(5, {{0, 1, 2, 3, 4}})};
  auto g = PermGroup::generated(5, gens);
  CHECK(g.order() == 120);
  CHECK(g.order() == closure_order(5, gens));
  CHECK(g.elements().size() == 120);
}

TEST_CASE("membership after sifting") {
  auto s4 = PermGroup::generated(4, {cyc(4, {{0, 1}}), cyc(4, {{0, 1, 2, 3}})});
  CHECK(s4.contains(cyc(4, {{2, 3}})));
  CHECK(s4.contains(cyc(4, {{0, 3, 1}})));
  auto a4 = PermGroup::generated(4, {cyc(4, {{0, 1, 2}}), cyc(4, {{1, 2, 3}})});
  CHECK(a4.order() == 12);
  CHECK_FALSE(a4.contains(cyc(4, {{0, 1}})));
}

TEST_CASE("pointwise stabilizer") {
  auto s3 = PermGroup::generated(3, {cyc(3, {{0, 1}}), cyc(3, {{0, 1, 2}})});
  Point a = 0;
  auto stab = s3.pointwise_stabilizer(std::span(&a, 1));
  CHECK(stab.order() == 2);

  auto whole = s3.pointwise_stabilizer({});
  CHECK(whole.order() == 6);

  auto z4 = PermGroup::generated(4, {cyc(4, {{0, 1, 2, 3}})});
  Point v0 = 0;
  CHECK(z4.pointwise_stabilizer(std::span(&v0, 1)).order() == 1);
}

TEST_CASE("stabilizer composes: stab(A u B) = stab(stab(A), B)") {
  auto s4 = PermGroup::generated(4, {cyc(4, {{0, 1}}), cyc(4, {{0, 1, 2, 3}})});
  std::vector<Point> ab{0, 2};
  auto joint = s4.pointwise_stabilizer(ab);
  Point a = 0, b = 2;
  auto nested = s4.pointwise_stabilizer(std::span(&a, 1)).pointwise_stabilizer(std::span(&b, 1));
  CHECK(joint.same_group(nested));
}

TEST_CASE("all_subgroups counts") {
  auto s3 = PermGroup::generated(3, {cyc(3, {{0, 1}}), cyc(3, {{0, 1, 2}})});
  CHECK(all_subgroups(s3, s3.order()).size() == 6);

  auto z4 = PermGroup::generated(4, {cyc(4, {{0, 1, 2, 3}})});
  CHECK(all_subgroups(z4, z4.order()).size() == 3);

  auto triv = PermGroup::trivial(2);
  CHECK(all_subgroups(triv, 1).size() == 1);

  // oracle: subsets of S3 closed under multiplication
  auto elems = s3.elements();
  int closed = 0;
  for (unsigned mask = 1; mask < 64; ++mask) {
    std::set<Perm> sub;
    for (int i = 0; i < 6; ++i)
      if (mask & (1u << i)) sub.insert(elems[static_cast<std::size_t>(i)]);
    if (!sub.count(Perm(3))) continue;
    bool ok = true;
    for (const auto& x : sub)
      for (const auto& y : sub)
        if (!sub.count(x * y)) ok = false;
    if (ok) ++closed;
  }
  CHECK(closed == 6);
}

TEST_CASE("kernel, image, normality of the sign map") {
  auto s3 = PermGroup::generated(3, {cyc(3, {{0, 1}}), cyc(3, {{0, 1, 2}})});
  auto z2 = PermGroup::generated(2, {cyc(2, {{0, 1}})});
  auto sign = GroupHom::from_action(s3, z2, [](const Perm& p) {
    int transpositions = 0;
    std::vector<bool> seen(p.degree(), false);
    for (Point s = 0; s < p.degree(); ++s) {
      if (seen[s]) continue;
      int len = 0;
      Point q = s;
      do {
        seen[q] = true;
        q = p[q];
        ++len;
      } while (q != s);
      transpositions += len - 1;
    }
    return transpositions % 2 ? Perm::from_cycles(2, {{0, 1}}) : Perm(2);
  });
  CHECK(sign.kernel().order() == 3);
  CHECK(sign.image().order() == 2);
  CHECK(sign.is_surjective());
  CHECK(is_normal(s3, sign.kernel()));

  auto h2 = PermGroup::generated(3, {cyc(3, {{0, 1}})});
  CHECK_FALSE(is_normal(s3, h2));
  CHECK(s3.order() == sign.kernel().order() * sign.image().order());
}

TEST_CASE("find_sections") {
  auto s3 = PermGroup::generated(3, {cyc(3, {{0, 1}}), cyc(3, {{0, 1, 2}})});
  auto z2 = PermGroup::generated(2, {cyc(2, {{0, 1}})});
  auto sign = GroupHom::from_action(s3, z2, [](const Perm& p) {
    return p.order() == 2 ? Perm::from_cycles(2, {{0, 1}})
                          : (p.order() == 1 ? Perm(2) : Perm(2));
  });
  auto sections = find_sections(sign);
  CHECK(sections.size() == 3);
  for (const auto& s : sections)
    for (const auto& [q, sq] : s.table()) CHECK(sign(sq) == q);

  // Z4 ->> Z2 is non-split
  auto z4 = PermGroup::generated(4, {cyc(4, {{0, 1, 2, 3}})});
  auto mod2 = GroupHom::from_action(z4, z2, [](const Perm& p) {
    return p[0] % 2 ? Perm::from_cycles(2, {{0, 1}}) : Perm(2);
  });
  CHECK(mod2.is_surjective());
  CHECK(find_sections(mod2).empty());

  // identity has exactly one section
  auto id = GroupHom::identity(s3);
  CHECK(find_sections(id).size() == 1);

  auto nonsurj = GroupHom::from_action(s3, s3, [&](const Perm&) { return Perm(3); });
  CHECK_THROWS_AS(find_sections(nonsurj), error);
}

TEST_CASE("iso_groups") {
  auto z4a = PermGroup::generated(4, {cyc(4, {{0, 1, 2, 3}})});
  auto z4b = PermGroup::generated(5, {cyc(5, {{0, 2, 4, 1}})});
  CHECK(iso_groups(z4a, z4b).has_value());

  auto v4 = PermGroup::generated(4, {cyc(4, {{0, 1}, {2, 3}}), cyc(4, {{0, 2}, {1, 3}})});
  CHECK(v4.order() == 4);
  CHECK_FALSE(iso_groups(z4a, v4).has_value());
}

TEST_CASE("intersect") {
  auto s3 = PermGroup::generated(3, {cyc(3, {{0, 1}}), cyc(3, {{0, 1, 2}})});
  auto a3 = PermGroup::generated(3, {cyc(3, {{0, 1, 2}})});
  auto h2 = PermGroup::generated(3, {cyc(3, {{0, 1}})});
  CHECK(intersect(a3, h2).order() == 1);
  CHECK(intersect(s3, a3).same_group(a3));
}
