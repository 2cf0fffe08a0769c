#include "gs/acceptance.hpp"

#include <chrono>
#include <set>

#include "gs/galois.hpp"
#include "gs/instances.hpp"
#include "gs/io.hpp"
#include "gs/tower.hpp"

namespace gs {

namespace {

using Clock = std::chrono::steady_clock;

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

SortedUniverse directed_cycle(int n) {
  StructureData d;
  d.sorts.push_back({"V", {}});
  for (int i = 0; i < n; ++i) d.sorts[0].elements.push_back("v" + std::to_string(i));
  StructureData::Relation e{"E", {"V", "V"}, {}};
  for (int i = 0; i < n; ++i)
    e.tuples.push_back({"v" + std::to_string(i), "v" + std::to_string((i + 1) % n)});
  d.relations.push_back(e);
  return SortedUniverse(d);
}

std::vector<std::pair<std::string, SortedUniverse>> galois_corpus() {
  std::vector<std::pair<std::string, SortedUniverse>> out;
  out.emplace_back("3 free points", free_points(3));
  out.emplace_back("directed 3-cycle", directed_cycle(3));
  out.emplace_back("4-cycle", undirected_4cycle());
  out.emplace_back("directed 4-cycle", directed_cycle(4));
  out.emplace_back("4 free points", free_points(4));
  {
    StructureData d;
    d.sorts.push_back({"A", {"a0", "a1"}});
    d.sorts.push_back({"B", {"b0", "b1"}});
    out.emplace_back("two sorts 2+2", SortedUniverse(d));
  }
  {
    StructureData d;
    d.sorts.push_back({"V", {"a", "b", "c"}});
    d.relations.push_back({"E", {"V", "V"}, {{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "b"}}});
    out.emplace_back("path of length 2", SortedUniverse(d));
  }
  {
    StructureData d;
    d.sorts.push_back({"V", {"a", "b", "c"}});
    d.relations.push_back({"E", {"V", "V"}, {{"a", "b"}, {"b", "c"}}});
    out.emplace_back("rigid chain", SortedUniverse(d));
  }
  out.emplace_back("GF(4) over GF(2)", galois_orbit_structure(2, 2).structure);
  {
    StructureData d;
    d.sorts.push_back({"V", {"a", "b", "c", "d"}});
    d.relations.push_back({"E", {"V", "V"}, {{"a", "b"}, {"b", "a"}, {"c", "d"}, {"d", "c"}}});
    out.emplace_back("two disjoint edges", SortedUniverse(d));
  }
  return out;
}

// the orientation quotient of three free points: S3 ->> Z2
EqFragment orientation_fragment() {
  EqFragment frag(free_points(3));
  QuotientSpec spec;
  spec.name = "orient";
  spec.signature = {SortRef::base_sort(0), SortRef::base_sort(0), SortRef::base_sort(0)};
  spec.use_blocks = true;
  spec.blocks = {{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, {{0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
  for (const auto& b : spec.blocks)
    for (const auto& t : b) spec.tuples.push_back(t);
  return frag.with_quotient(spec);
}

EqFragment pair_fragment(const SortedUniverse& m) {
  EqFragment frag(m);
  QuotientSpec spec;
  spec.name = "pairs";
  spec.signature = {SortRef::base_sort(0)};
  spec.tuples = {{0}, {1}, {2}, {3}};
  spec.use_blocks = true;
  spec.blocks = {{{0}, {2}}, {{1}, {3}}};
  return frag.with_quotient(spec);
}

EqFragment identity_fragment(const SortedUniverse& m) {
  EqFragment frag(m);
  QuotientSpec spec;
  spec.name = "copy";
  spec.signature = {SortRef::base_sort(0)};
  spec.use_blocks = true;
  for (Point p = 0; p < m.size(); ++p) {
    spec.tuples.push_back({static_cast<int>(p)});
    spec.blocks.push_back({{static_cast<int>(p)}});
  }
  return frag.with_quotient(spec);
}

CriterionResult criterion_functor() {
  CriterionResult r{1, "functor equivalence: aut(group_to_structure(G)) iso G, |G| <= 16", false,
                    0, 180, {}};
  auto start = Clock::now();
  bool ok = true;
  Limits wide;
  wide.max_arity = 16;
  for (const auto& entry : group_catalog()) {
    if (entry.group.order() > 16) continue;
    auto case_start = Clock::now();
    SortedUniverse m = group_to_structure(entry.group, wide);
    AutOptions opts;
    opts.max_universe = std::max<std::size_t>(24, m.size());
    auto a = aut(m, opts);
    bool iso = iso_groups(a.group, entry.group).has_value();
    double case_secs = std::chrono::duration<double>(Clock::now() - case_start).count();
    if (!iso || case_secs >= 10.0) {
      ok = false;
      r.notes.push_back("FAIL " + entry.name);
    }
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.pass = ok && r.seconds < r.budget_seconds;
  r.notes.push_back("catalog cases of order <= 16 round-tripped");
  return r;
}

CriterionResult criterion_reconstruction(std::uint64_t seed) {
  CriterionResult r{2, "reconstruction: Aut(canonical_regular(N)) iso Aut(N), orbits agree", false,
                    0, 120, {}};
  auto start = Clock::now();
  Rng rng(seed);
  AutOptions opts;
  bool ok = true;
  for (int i = 0; i < 50 && ok; ++i) {
    SortedUniverse n = random_structure(rng, 6, 24, opts);
    auto aut_n = aut(n, opts).group;
    auto reg = canonical_regular(n, opts);
    AutOptions wide;
    wide.max_universe = std::max<std::size_t>(24, reg.structure.size());
    auto aut_m = aut(reg.structure, wide).group;
    if (!iso_groups(aut_m, aut_n).has_value()) {
      ok = false;
      r.notes.push_back("iso failed on case " + std::to_string(i));
      break;
    }
    // transport every automorphism of M' to Aut(N) through the orbit tuples
    auto n_elems = aut_n.elements();
    std::vector<Perm> transported;
    for (const auto& tau : aut_m.generators()) {
      const Perm& h = n_elems[tau[0]]; // image of the identity tuple
      for (std::size_t k = 0; k < n_elems.size(); ++k)
        if (!(n_elems[tau[static_cast<Point>(k)]] == h * n_elems[k])) {
          ok = false;
          r.notes.push_back("transport failed on case " + std::to_string(i));
        }
      transported.push_back(h);
    }
    if (!ok) break;
    if (!PermGroup::generated(n.size(), transported).same_group(aut_n)) {
      ok = false;
      r.notes.push_back("transported group mismatch on case " + std::to_string(i));
      break;
    }
    std::vector<Point> domain(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) domain[k] = static_cast<Point>(k);
    for (std::size_t k = 1; k <= n.size() && ok; ++k) {
      auto pa = tuple_orbit_partition(aut_n.generators(), domain, k);
      auto pb = tuple_orbit_partition(transported, domain, k);
      if (pa != pb) {
        ok = false;
        r.notes.push_back("orbit partitions differ on case " + std::to_string(i));
      }
    }
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.pass = ok && r.seconds < r.budget_seconds;
  if (ok) r.notes.push_back("50 seeded structures reconstructed");
  return r;
}

CriterionResult criterion_galois() {
  CriterionResult r{3, "galois correspondence: anchor stabilizers and normality law", false, 0,
                    180, {}};
  auto start = Clock::now();
  bool ok = true;
  int subgroups = 0;
  for (const auto& [name, m] : galois_corpus()) {
    auto g = aut(m).group;
    if (g.order() > 24) {
      ok = false;
      r.notes.push_back(name + ": group too large for the corpus");
      continue;
    }
    for (const auto& h : all_subgroups(g, g.order())) {
      ++subgroups;
      auto ci = coset_imaginary(m, h);
      Point anchor = ci.anchor;
      auto stab = ci.fragment.aut_group().pointwise_stabilizer(std::span(&anchor, 1));
      if (stab.order() != h.order()) {
        ok = false;
        r.notes.push_back(name + ": stabilizer order mismatch");
      }
      for (const auto& hg : h.generators()) {
        bool found = false;
        for (const auto& s : stab.elements()) {
          bool eq = true;
          for (Point p = 0; p < m.size() && eq; ++p) eq = s[p] == hg[p];
          if (eq) found = true;
        }
        if (!found) {
          ok = false;
          r.notes.push_back(name + ": H escaped the stabilizer");
        }
      }
      auto nc = normal_iff_zero_definable(ci);
      if (nc.is_normal != nc.anchor_orbit_singleton) {
        ok = false;
        r.notes.push_back(name + ": normality law failed");
      }
    }
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.pass = ok && r.seconds < r.budget_seconds;
  r.notes.push_back(std::to_string(subgroups) + " subgroups checked across 10 structures");
  return r;
}

CriterionResult criterion_sections() {
  CriterionResult r{4, "exact sequences and sections: Pr1 law, witnesses, non-split case", false,
                    0, 60, {}};
  auto start = Clock::now();
  bool ok = true;

  // five exact-sequence pairs
  std::vector<std::pair<std::string, std::pair<EqFragment, std::size_t>>> pairs;
  pairs.emplace_back("4-cycle pairs", std::make_pair(pair_fragment(undirected_4cycle()), 0));
  pairs.emplace_back("orientation", std::make_pair(orientation_fragment(), 0));
  pairs.emplace_back("identity sort", std::make_pair(identity_fragment(undirected_4cycle()), 0));
  {
    EqFragment frag(undirected_4cycle());
    QuotientSpec spec;
    spec.name = "pt";
    spec.signature = {SortRef::base_sort(0)};
    spec.tuples = {{0}, {1}, {2}, {3}};
    spec.use_blocks = true;
    spec.blocks = {{{0}, {1}, {2}, {3}}};
    pairs.emplace_back("single class", std::make_pair(frag.with_quotient(spec), 0));
  }
  {
    auto gf4 = galois_orbit_structure(2, 2).structure;
    AutOptions opts;
    opts.max_universe = 8;
    EqFragment frag(gf4, opts);
    QuotientSpec spec;
    spec.name = "orbits";
    spec.signature = {SortRef::base_sort(0)};
    spec.use_blocks = true;
    spec.tuples = {{0}, {1}, {2}, {3}};
    spec.blocks = {{{0}}, {{1}}, {{2}, {3}}};
    pairs.emplace_back("GF(4) Frobenius orbits", std::make_pair(frag.with_quotient(spec), 0));
  }
  for (auto& [name, fs] : pairs) {
    auto seq = exact_sequence(fs.first, fs.second);
    if (!seq.exact) {
      ok = false;
      r.notes.push_back(name + ": exactness failed");
    }
    if (seq.kernel.order() * seq.restriction.image().order() !=
        seq.restriction.domain().order()) {
      ok = false;
      r.notes.push_back(name + ": order law failed");
    }
  }

  // three split cases with verified witnesses
  int witnesses = 0;
  {
    auto seq = exact_sequence(orientation_fragment(), 0);
    auto sections = find_sections(seq.restriction);
    if (sections.size() != 3) {
      ok = false;
      r.notes.push_back("orientation: expected 3 sections");
    }
    for (const auto& s : sections) {
      auto w = section_to_interpretation(seq, s);
      if (w.cond_dcl && w.cond_intersection) ++witnesses;
    }
  }
  for (auto n : {2, 3}) {
    auto seq = exact_sequence(identity_fragment(free_points(n)), 0);
    auto sections = find_sections(seq.restriction);
    if (sections.size() != 1) {
      ok = false;
      r.notes.push_back("identity: expected a unique section");
    }
    auto w = section_to_interpretation(seq, sections[0]);
    if (w.cond_dcl && w.cond_intersection) ++witnesses;
  }
  if (witnesses < 3) {
    ok = false;
    r.notes.push_back("fewer than 3 verified witnesses");
  }

  // the non-split covering Z4 ->> Z2
  auto seq = exact_sequence(pair_fragment(directed_cycle(4)), 0);
  if (!find_sections(seq.restriction).empty()) {
    ok = false;
    r.notes.push_back("directed 4-cycle: unexpected section");
  }

  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.pass = ok && r.seconds < r.budget_seconds;
  r.notes.push_back(std::to_string(witnesses) + " section witnesses verified");
  return r;
}

CriterionResult criterion_tower() {
  CriterionResult r{5, "tower laws: closure, deck differences, periods, torsor axioms", false, 0,
                    120, {}};
  auto start = Clock::now();
  bool ok = true;
  std::vector<Tower> towers;
  for (int depth = 1; depth <= 6; ++depth) towers.push_back(cyclic_tower(2, depth));
  towers.push_back(mixed_tower());

  Limits limits;
  for (std::size_t ti = 0; ti < towers.size(); ++ti) {
    const Tower& t = towers[ti];
    std::string tag = ti + 1 <= 6 ? "cyclic(2," + std::to_string(ti + 1) + ")" : "mixed";
    auto lim = t.limit_group(limits);
    auto laws = t.limit_laws(lim);
    if (!laws.projection_law || !laws.periods_normal || !laws.periods_finite_index ||
        !laws.quotients_match_deck || !laws.residually_trivial) {
      ok = false;
      r.notes.push_back(tag + ": limit law failed");
    }
    auto torsor = t.torsor_axioms(lim);
    if (!torsor.evaluation_surjective || !torsor.action_equivariant ||
        !torsor.free_transitive || !torsor.a3_witness) {
      ok = false;
      r.notes.push_back(tag + ": torsor axiom failed");
    }
    // deck differences over all morphism pairs of all compatible copies
    for (std::size_t i = 0; i < t.num_levels(); ++i)
      for (std::size_t z = 0; z < t.level(i).zeros.size(); ++z)
        for (std::size_t j = 0; j <= i; ++j) {
          if (!t.level_compatible(i, j)) continue;
          LevelPoint from{i, z};
          LevelPoint to{j, t.project_zero(i, z, j)};
          auto ms = t.intermediate_morphisms(from, to);
          if (ms.size() != t.degree_of(j)) {
            ok = false;
            r.notes.push_back(tag + ": coset size mismatch");
          }
          for (const auto& m1 : ms)
            for (const auto& m2 : ms) {
              try {
                (void)t.deck_difference(m1, m2);
              } catch (const error&) {
                ok = false;
                r.notes.push_back(tag + ": deck difference failed");
              }
            }
        }
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.pass = ok && r.seconds < r.budget_seconds;
  r.notes.push_back("cyclic towers to depth 6 plus the mixed tower checked");
  return r;
}

CriterionResult criterion_pi1() {
  CriterionResult r{6, "pi1 identity: Aut of the forgetful fiber structure iso Gamma", false, 0,
                    60, {}};
  auto start = Clock::now();
  bool ok = true;
  {
    auto t = cyclic_tower(2, 6);
    auto fs = t.fiber_structure();
    auto pi1 = t.pi1_et(fs);
    auto lim = t.limit_group();
    if (!iso_groups(pi1, lim.gamma).has_value()) {
      ok = false;
      r.notes.push_back("cyclic(2,6): pi1 differs from Gamma");
    } else {
      r.notes.push_back("cyclic(2,6): pi1 order " + std::to_string(pi1.order()));
    }
  }
  {
    auto t = mixed_tower();
    auto fs = t.fiber_structure();
    auto pi1 = t.pi1_et(fs);
    auto lim = t.limit_group();
    if (!iso_groups(pi1, lim.gamma).has_value()) {
      ok = false;
      r.notes.push_back("mixed: pi1 differs from Gamma");
    } else {
      r.notes.push_back("mixed: pi1 order " + std::to_string(pi1.order()));
    }
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.pass = ok && r.seconds < r.budget_seconds;
  return r;
}

CriterionResult criterion_sharp() {
  CriterionResult r{7, "sharp subgroup and the section demo", false, 0, 30, {}};
  auto start = Clock::now();
  bool ok = true;
  {
    auto t = mixed_tower();
    auto sh = t.sharp();
    if (!sh.equals_gk) {
      ok = false;
      r.notes.push_back("equivariant table: G# is proper");
    }
    auto demo = t.section_demo();
    if (!demo || !demo->gk_image.same_group(t.gk())) {
      ok = false;
      r.notes.push_back("equivariant table: no verified section");
    }
  }
  {
    auto t = mixed_tower(true);
    auto sh = t.sharp();
    if (sh.equals_gk || !sh.obstruction.has_value()) {
      ok = false;
      r.notes.push_back("twisted table: obstruction missing");
    } else {
      auto [from, to, elem] = *sh.obstruction;
      r.notes.push_back("twist obstruction at (" + t.level(from.level).label + "," +
                        t.level(from.level).zeros[from.zero] + ") -> " +
                        t.level(to.level).label);
      (void)elem;
    }
    if (t.section_demo().has_value()) {
      ok = false;
      r.notes.push_back("twisted table: unexpected section");
    }
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.pass = ok && r.seconds < r.budget_seconds;
  return r;
}

CriterionResult criterion_fields(std::uint64_t seed) {
  CriterionResult r{8, "finite-field instances: Frobenius groups, dcl, correspondences", false, 0,
                    120, {}};
  auto start = Clock::now();
  bool ok = true;

  for (auto [p, m] : std::vector<std::pair<int, int>>{{2, 4}, {3, 4}, {2, 6}}) {
    auto fs = galois_orbit_structure(p, m);
    AutOptions opts;
    opts.max_universe = fs.structure.size();
    EqFragment frag(fs.structure, opts);
    if (frag.aut_group().order() != static_cast<std::uint64_t>(m)) {
      ok = false;
      r.notes.push_back("GF(" + std::to_string(p) + "^" + std::to_string(m) +
                        "): |Aut| != m");
    }
    auto fixed = frag.dcl({});
    if (fixed.size() != static_cast<std::size_t>(p)) {
      ok = false;
      r.notes.push_back("GF(" + std::to_string(p) + "^" + std::to_string(m) +
                        "): dcl(0) is not the prime field");
    }
  }

  // deck/field correspondences on cyclic levels of orders 4 and 6
  {
    auto t4 = cyclic_tower(2, 2);
    auto c4 = deck_field_correspondence(3, 4, t4, 2);
    if (!c4.equivariant) ok = false;
    GroupChain chain6 = cyclic_chain({6});
    auto t6 = Tower::build(chain6, {{"mu", 1, {"a0"}, {}, {}}}, {}, {});
    auto c6 = deck_field_correspondence(2, 6, t6, 1);
    if (!c6.equivariant) ok = false;
  }

  // Neukirch analogue on 20 seeded pairs
  Rng rng(seed ^ 0x6el);
  std::vector<std::pair<int, int>> pool{{2, 2}, {2, 3}, {3, 2}, {2, 4}, {5, 2}, {3, 3}, {2, 6}, {7, 2}};
  int agree = 0;
  for (int i = 0; i < 20; ++i) {
    auto [p1, m1] = pool[rng.below(pool.size())];
    auto [p2, m2] = pool[rng.below(pool.size())];
    auto a = galois_orbit_structure(p1, m1, {}, rng.below(3));
    auto b = galois_orbit_structure(p2, m2, {}, rng.below(3));
    AutOptions opts;
    opts.max_universe = std::max(a.structure.size(), b.structure.size());
    bool iso = iso_structures(a.structure, b.structure, opts).has_value();
    bool same_field = p1 == p2 && m1 == m2;
    if (iso == same_field)
      ++agree;
    else {
      ok = false;
      r.notes.push_back("pair " + std::to_string(i) + ": iso/equality mismatch");
    }
  }
  r.notes.push_back(std::to_string(agree) + "/20 pairs agree with field equality");

  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.pass = ok && r.seconds < r.budget_seconds;
  return r;
}

} // namespace

std::vector<std::string> acceptance_selectors() {
  return {"functor", "reconstruction", "galois", "sections", "tower", "pi1", "sharp", "fields"};
}

std::vector<CriterionResult> run_acceptance(const std::string& selector, std::uint64_t seed) {
  std::vector<CriterionResult> out;
  auto want = [&](const std::string& name) { return selector == "all" || selector == name; };
  if (want("functor")) out.push_back(criterion_functor());
  if (want("reconstruction")) out.push_back(criterion_reconstruction(seed));
  if (want("galois")) out.push_back(criterion_galois());
  if (want("sections")) out.push_back(criterion_sections());
  if (want("tower")) out.push_back(criterion_tower());
  if (want("pi1")) out.push_back(criterion_pi1());
  if (want("sharp")) out.push_back(criterion_sharp());
  if (want("fields")) out.push_back(criterion_fields(seed));
  if (out.empty()) throw error("unknown acceptance selector '" + selector + "'");
  return out;
}

} // namespace gs
