#include "gs/tower.hpp"

#include <algorithm>
#include <set>

namespace gs {

void GroupChain::validate(const Limits& limits) const {
  if (levels.empty()) throw error("chain: no levels");
  if (levels[0].order() != 1) throw error("chain: level 0 must be the trivial group");
  if (names.size() != levels.size()) throw error("chain: name/level count mismatch");
  if (epis.size() != levels.size()) throw error("chain: epi table shape mismatch");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (epis[i].size() != i + 1) throw error("chain: epi row shape mismatch");
    for (std::size_t j = 0; j <= i; ++j) {
      const GroupHom& e = epis[i][j];
      if (e.domain().order() != levels[i].order() || e.codomain().order() != levels[j].order())
        throw error("chain: epi endpoints mismatch at (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
      if (e.image().order() != levels[j].order())
        throw error("chain: epi (" + std::to_string(i) + "," + std::to_string(j) +
                    ") is not surjective");
    }
    if (!(epis[i][i] == GroupHom::identity(levels[i], limits)))
      throw error("chain: epis(" + std::to_string(i) + "," + std::to_string(i) +
                  ") is not the identity");
  }
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = 0; k <= j; ++k)
        if (!(epis[j][k].after(epis[i][j]) == epis[i][k]))
          throw error("chain: composition law fails at (" + std::to_string(i) + "," +
                      std::to_string(j) + "," + std::to_string(k) + ")");
}

GroupChain cyclic_chain(const std::vector<std::uint64_t>& orders, const Limits& limits) {
  GroupChain chain;
  chain.levels.push_back(PermGroup::trivial(1));
  chain.names.push_back("1");
  for (std::uint64_t n : orders) {
    if (n == 0) throw error("cyclic_chain: zero order");
    std::vector<Point> cyc(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i) cyc[i] = static_cast<Point>((i + 1) % n);
    chain.levels.push_back(PermGroup::generated(static_cast<std::size_t>(n), {Perm(cyc)}));
    chain.names.push_back("C" + std::to_string(n));
  }
  for (std::size_t i = 0; i < chain.levels.size(); ++i) {
    chain.epis.emplace_back();
    for (std::size_t j = 0; j <= i; ++j) {
      const PermGroup& dom = chain.levels[i];
      const PermGroup& cod = chain.levels[j];
      std::uint64_t m = dom.order(), l = cod.order();
      if (l > 1 && m % l != 0) throw error("cyclic_chain: orders do not divide");
      chain.epis[i].push_back(GroupHom::from_action(
          dom, cod,
          [&](const Perm& p) {
            // x -> x mod l on the canonical cyclic generators
            std::uint64_t k = l == 1 ? 0 : p[0] % l;
            std::vector<Point> img(static_cast<std::size_t>(l));
            for (std::size_t x = 0; x < l; ++x)
              img[x] = static_cast<Point>((x + k) % l);
            return Perm(std::move(img));
          },
          limits));
    }
  }
  chain.validate(limits);
  return chain;
}

int Tower::element_index(std::size_t chain_index, const Perm& p) const {
  const auto& list = elems_[chain_index];
  auto it = std::lower_bound(list.begin(), list.end(), p);
  if (it == list.end() || !(*it == p)) throw error("tower: element outside the chain group");
  return static_cast<int>(it - list.begin());
}

Perm Tower::epi_apply(std::size_t from_chain, std::size_t to_chain, const Perm& p) const {
  return chain_.epis[from_chain][to_chain](p);
}

const std::vector<Perm>& Tower::elements(std::size_t level) const {
  return elems_[levels_[level].chain_index];
}

std::size_t Tower::degree_of(std::size_t level) const {
  return elems_[levels_[level].chain_index].size();
}

PermGroup Tower::deck_group(std::size_t level) const {
  const auto& list = elements(level);
  std::vector<Perm> gens;
  for (const auto& h : generating_sequence(chain_.levels[levels_[level].chain_index])) {
    std::vector<Point> img(list.size());
    for (std::size_t x = 0; x < list.size(); ++x)
      img[x] = static_cast<Point>(element_index(levels_[level].chain_index, h * list[x]));
    gens.push_back(Perm(std::move(img)));
  }
  return PermGroup::generated(list.size(), gens);
}

bool Tower::level_compatible(std::size_t from_level, std::size_t to_level) const {
  if (from_level >= levels_.size() || to_level >= levels_.size()) return false;
  if (from_level < to_level) return false;
  // a morphism needs the chain epi and the constant-field containment
  if (levels_[from_level].chain_index < levels_[to_level].chain_index) return false;
  return levels_[from_level].constant_field.is_subgroup_of(
      levels_[to_level].constant_field);
}

bool Tower::compatible(LevelPoint from, LevelPoint to) const {
  if (!level_compatible(from.level, to.level)) return false;
  if (from.zero >= levels_[from.level].zeros.size() ||
      to.zero >= levels_[to.level].zeros.size())
    return false;
  return project_zero(from.level, from.zero, to.level) == to.zero;
}

std::size_t Tower::project_zero(std::size_t from_level, std::size_t zero,
                                std::size_t to_level) const {
  if (!level_compatible(from_level, to_level))
    throw error("project_zero: no morphism between the levels");
  const CoverLevel& from = levels_[from_level];
  const CoverLevel& to = levels_[to_level];
  // witness sigma with sigma(base zero of `from`) = zero, found by BFS
  Point base = static_cast<Point>(from.zero_offset);
  Point target = static_cast<Point>(from.zero_offset + zero);
  std::vector<int> seen(gk_.degree(), -1);
  std::vector<Perm> witness{Perm(gk_.degree())};
  std::vector<Point> queue{base};
  seen[base] = 0;
  for (std::size_t i = 0; i < queue.size() && seen[target] < 0; ++i) {
    for (const auto& g : gk_.generators()) {
      Point q = g[queue[i]];
      if (seen[q] < 0) {
        seen[q] = static_cast<int>(witness.size());
        witness.push_back(witness[static_cast<std::size_t>(seen[queue[i]])] * g);
        queue.push_back(q);
      }
    }
  }
  if (seen[target] < 0) throw error("project_zero: zero outside the Gk orbit");
  const Perm& sigma = witness[static_cast<std::size_t>(seen[target])];
  Point image = sigma[static_cast<Point>(to.zero_offset)];
  return static_cast<std::size_t>(image - to.zero_offset);
}

Tower Tower::build(GroupChain chain, std::vector<CoverSpec> covers,
                   std::vector<Perm> gk_generators, const DistinguishedSpec& dist,
                   const Limits& limits) {
  chain.validate(limits);

  Tower t;
  t.chain_ = std::move(chain);
  for (std::size_t c = 0; c < t.chain_.levels.size(); ++c)
    t.elems_.push_back(t.chain_.levels[c].elements(limits.max_elements));

  // base level + covers, zeros concatenated into the Gk domain
  std::size_t offset = 0;
  CoverLevel base{"X", 0, {"x0"}, PermGroup::trivial(0), offset};
  t.levels_.push_back(base);
  offset += 1;
  std::set<std::string> labels{"X"};
  for (auto& c : covers) {
    if (c.label.empty() || !labels.insert(c.label).second)
      throw error("tower: duplicate or empty cover label '" + c.label + "'");
    if (c.chain_index >= t.chain_.levels.size())
      throw error("tower: cover '" + c.label + "' references a missing chain group");
    if (c.zeros.empty()) throw error("tower: cover '" + c.label + "' has no zeros");
    std::vector<std::string> zeros = c.zeros;
    std::sort(zeros.begin(), zeros.end());
    if (std::adjacent_find(zeros.begin(), zeros.end()) != zeros.end())
      throw error("tower: cover '" + c.label + "' has duplicate zero labels");
    CoverLevel lvl{c.label, c.chain_index, zeros, PermGroup::trivial(0), offset};
    offset += zeros.size();
    t.levels_.push_back(lvl);
  }

  // the base-Galois group on the combined zeros domain
  for (const auto& g : gk_generators)
    if (g.degree() != offset)
      throw error("tower: Gk generator degree does not match the zeros domain");
  t.gk_ = PermGroup::generated(offset, gk_generators);
  for (const auto& g : t.gk_.generators())
    for (std::size_t i = 0; i < t.levels_.size(); ++i) {
      auto& lvl = t.levels_[i];
      for (std::size_t z = 0; z < lvl.zeros.size(); ++z) {
        Point p = static_cast<Point>(lvl.zero_offset + z);
        if (g[p] < lvl.zero_offset || g[p] >= lvl.zero_offset + lvl.zeros.size())
          throw error("tower: Gk action does not preserve the zeros of '" + lvl.label + "'");
      }
    }

  // transitivity per zero set; constant field = stabilizer of the first zero
  for (std::size_t i = 0; i < t.levels_.size(); ++i) {
    auto& lvl = t.levels_[i];
    Point base_zero = static_cast<Point>(lvl.zero_offset);
    auto orbit = t.gk_.orbit_of(base_zero);
    std::size_t inside = 0;
    for (Point p : orbit)
      if (p >= lvl.zero_offset && p < lvl.zero_offset + lvl.zeros.size()) ++inside;
    if (inside != lvl.zeros.size())
      throw error("tower: Gk is not transitive on the zeros of '" + lvl.label + "'");
    lvl.constant_field = t.gk_.pointwise_stabilizer(std::span(&base_zero, 1));
    if (i >= 1) {
      const auto& supplied = covers[i - 1].constant_field;
      if (supplied && !supplied->same_group(lvl.constant_field))
        throw error("tower: constant field of '" + lvl.label +
                    "' is not the stabilizer of its first zero");
    }
  }
  // every cover must map somewhere (the base always works)
  for (std::size_t i = 1; i < t.levels_.size(); ++i)
    if (!t.level_compatible(i, 0))
      throw error("tower: level '" + t.levels_[i].label + "' has no morphism to the base");

  // distinguished table on the compatible pairs
  auto key = [](std::size_t i, std::size_t z, std::size_t j) {
    return std::make_tuple(i, z, j);
  };
  auto name_of = [&](std::size_t i, std::size_t z) {
    return "(" + t.levels_[i].label + "," + t.levels_[i].zeros[z] + ")";
  };
  auto parent = [&](std::size_t i, std::size_t target) {
    // largest level strictly between target and i usable as a waypoint
    for (std::size_t mid = i; mid-- > target + 1;)
      if (t.level_compatible(i, mid) && t.level_compatible(mid, target)) return mid;
    return i; // no waypoint: the entry is a direct one-step
  };
  if (dist.explicit_table) {
    for (std::size_t i = 0; i < t.levels_.size(); ++i)
      for (std::size_t z = 0; z < t.levels_[i].zeros.size(); ++z)
        for (std::size_t j = 0; j <= i; ++j) {
          if (!t.level_compatible(i, j)) continue;
          auto it = dist.table.find(key(i, z, j));
          if (it == dist.table.end()) {
            if (i == j)
              throw error("distinguished table: missing identity entry for " + name_of(i, z));
            throw error("distinguished table: missing entry " + name_of(i, z) + " -> level " +
                        t.levels_[j].label);
          }
          std::size_t ci = t.levels_[j].chain_index;
          if (it->second >= t.elems_[ci].size())
            throw error("distinguished table: twist index out of range at " + name_of(i, z));
          t.table_[key(i, z, j)] = t.elems_[ci][it->second];
        }
    for (std::size_t i = 0; i < t.levels_.size(); ++i)
      for (std::size_t z = 0; z < t.levels_[i].zeros.size(); ++z)
        if (!t.table_[key(i, z, i)].is_identity())
          throw error("distinguished table: identity entry at " + name_of(i, z) +
                      " is not the identity");
  } else {
    // default: identity one-step twists with optional overrides; entries
    // with a waypoint level derived by composition
    for (std::size_t i = 0; i < t.levels_.size(); ++i)
      for (std::size_t z = 0; z < t.levels_[i].zeros.size(); ++z) {
        t.table_[key(i, z, i)] = Perm(t.elems_[t.levels_[i].chain_index][0].degree());
        for (std::size_t back = 1; back <= i; ++back) {
          std::size_t j = i - back;
          if (!t.level_compatible(i, j)) continue;
          std::size_t mid = parent(i, j);
          if (mid == i) {
            std::size_t cj = t.levels_[j].chain_index;
            Perm onestep = Perm(t.elems_[cj][0].degree());
            auto it = dist.onestep.find({i, z});
            if (it != dist.onestep.end()) {
              if (it->second >= t.elems_[cj].size())
                throw error("distinguished table: twist index out of range at " +
                            name_of(i, z));
              onestep = t.elems_[cj][it->second];
            }
            t.table_[key(i, z, j)] = onestep;
          } else {
            std::size_t zmid = t.project_zero(i, z, mid);
            const Perm& t1 = t.table_.at(key(i, z, mid));    // in G_mid
            const Perm& t2 = t.table_.at(key(mid, zmid, j)); // in G_j
            t.table_[key(i, z, j)] = t2 * t.epi_apply(t.levels_[mid].chain_index,
                                                      t.levels_[j].chain_index, t1);
          }
        }
      }
  }

  // composition closure, verified exhaustively; violations name the triple
  for (std::size_t i = 0; i < t.levels_.size(); ++i)
    for (std::size_t z = 0; z < t.levels_[i].zeros.size(); ++z)
      for (std::size_t j = 0; j <= i; ++j) {
        if (!t.level_compatible(i, j)) continue;
        for (std::size_t k = 0; k <= j; ++k) {
          if (!t.level_compatible(j, k) || !t.level_compatible(i, k)) continue;
          std::size_t zj = t.project_zero(i, z, j);
          const Perm& t_ij = t.table_.at(key(i, z, j));
          const Perm& t_jk = t.table_.at(key(j, zj, k));
          const Perm& t_ik = t.table_.at(key(i, z, k));
          Perm composite =
              t_jk * t.epi_apply(t.levels_[j].chain_index, t.levels_[k].chain_index, t_ij);
          if (!(composite == t_ik))
            throw error("distinguished table: composition closure fails on " + name_of(i, z) +
                        " -> " + name_of(j, zj) + " -> level " + t.levels_[k].label);
        }
      }

  return t;
}

Morphism Tower::distinguished(LevelPoint from, LevelPoint to) const {
  if (!level_compatible(from.level, to.level))
    throw error("tower: no epi between the levels");
  if (!compatible(from, to))
    throw error("tower: the copies are not conjugate-compatible");
  return Morphism{from, to, table_.at({from.level, from.zero, to.level})};
}

std::vector<Morphism> Tower::intermediate_morphisms(LevelPoint from, LevelPoint to) const {
  distinguished(from, to); // validates that a morphism exists at all
  std::vector<Morphism> out;
  for (const auto& a : elems_[levels_[to.level].chain_index])
    out.push_back(Morphism{from, to, a});
  return out;
}

int Tower::apply_morphism(const Morphism& m, int point) const {
  const Perm& g = elems_[levels_[m.from.level].chain_index][static_cast<std::size_t>(point)];
  Perm image = m.twist * epi_apply(levels_[m.from.level].chain_index,
                                   levels_[m.to.level].chain_index, g);
  return element_index(levels_[m.to.level].chain_index, image);
}

Perm Tower::deck_difference(const Morphism& m1, const Morphism& m2) const {
  if (!(m1.from == m2.from) || !(m1.to == m2.to))
    throw error("deck_difference: morphisms with different sources or targets");
  Perm g = m2.twist * m1.twist.inverse();
  // verify g . m1 = m2 pointwise and uniqueness via freeness
  for (int x = 0; x < static_cast<int>(degree_of(m1.from.level)); ++x) {
    const Perm& y1 = elems_[levels_[m1.to.level].chain_index]
                           [static_cast<std::size_t>(apply_morphism(m1, x))];
    const Perm& y2 = elems_[levels_[m2.to.level].chain_index]
                           [static_cast<std::size_t>(apply_morphism(m2, x))];
    if (!(g * y1 == y2)) throw error("deck_difference: composition check failed");
  }
  return g;
}

FactorResult Tower::factor_cover(LevelPoint lp) const {
  if (lp.level >= levels_.size() || lp.zero >= levels_[lp.level].zeros.size())
    throw error("factor_cover: unknown level point");
  const CoverLevel& lvl = levels_[lp.level];
  FactorResult out;
  out.syntactic_constant_field = lvl.constant_field;
  std::uint64_t gk_order = std::max<std::uint64_t>(gk_.order(), 1);
  out.syntactic_degree = gk_order / std::max<std::uint64_t>(lvl.constant_field.order(), 1);
  out.syntactic_pure = true;
  out.geometric_deck = deck_group(lp.level);
  out.geometric_degree = out.geometric_deck.order();
  out.constant_fields_match = true; // both ends of the geometric layer carry k^mu
  // encoded Gal(K_mu : K_nu): the kernel of the chain epi to the base
  PermGroup galois = chain_.epis[lvl.chain_index][0].kernel();
  out.deck_matches_galois = iso_groups(out.geometric_deck, galois).has_value();
  out.recomposition_ok = out.deck_matches_galois &&
                         out.geometric_degree == degree_of(lp.level) &&
                         out.syntactic_degree * lvl.constant_field.order() == gk_order;
  return out;
}

CoverLevel Tower::amalgamate_syntactic(std::size_t level_a, std::size_t level_b) const {
  // the base itself counts as the trivial pure syntactic cover
  auto check = [&](std::size_t l) {
    if (l >= levels_.size()) throw error("amalgamate: unknown level");
    if (chain_.levels[levels_[l].chain_index].order() != 1)
      throw error("amalgamate: level '" + levels_[l].label + "' is not pure syntactic");
  };
  check(level_a);
  check(level_b);
  PermGroup meet = intersect(levels_[level_a].constant_field, levels_[level_b].constant_field);
  if (!meet.is_subgroup_of(levels_[level_a].constant_field) ||
      !meet.is_subgroup_of(levels_[level_b].constant_field))
    throw error("amalgamate: intersection escaped the inputs");

  // zeros of the amalgam = blocks H*r of the compositum subgroup
  auto gk_elems = gk_.elements();
  auto h_elems = meet.elements();
  std::set<Perm> placed;
  std::size_t count = 0;
  for (const auto& r : gk_elems) {
    if (placed.count(r)) continue;
    for (const auto& h : h_elems) placed.insert(h * r);
    ++count;
  }
  CoverLevel out;
  out.label = "amalgam(" + levels_[level_a].label + "," + levels_[level_b].label + ")";
  out.chain_index = 0;
  for (std::size_t k = 0; k < count; ++k) out.zeros.push_back("am" + std::to_string(k));
  out.constant_field = meet;
  out.zero_offset = 0;
  return out;
}

TruncatedLimit Tower::limit_group(const Limits& limits) const {
  TruncatedLimit lim;
  for (std::size_t i = 0; i < levels_.size(); ++i)
    for (std::size_t z = 0; z < levels_[i].zeros.size(); ++z)
      lim.slots.push_back({i, z});
  std::size_t domain = 0;
  for (const auto& s : lim.slots) {
    lim.slot_offsets.push_back(domain);
    domain += degree_of(s.level);
  }

  // maximal levels: nothing compatible sits above them
  std::vector<bool> maximal(levels_.size(), true);
  for (std::size_t i = 0; i < levels_.size(); ++i)
    for (std::size_t j = i + 1; j < levels_.size(); ++j)
      if (level_compatible(j, i)) maximal[i] = false;
  std::vector<std::size_t> top_slots;
  for (std::size_t s = 0; s < lim.slots.size(); ++s)
    if (maximal[lim.slots[s].level]) top_slots.push_back(s);
  std::uint64_t combos = 1;
  for (std::size_t k = 0; k < top_slots.size(); ++k) {
    combos *= degree_of(lim.slots[top_slots[k]].level);
    if (combos > limits.max_elements)
      throw bound_error("limit_group: truncation too large to enumerate");
  }

  auto slot_of = [&](LevelPoint lp) {
    for (std::size_t s = 0; s < lim.slots.size(); ++s)
      if (lim.slots[s] == lp) return s;
    throw error("limit_group: unknown slot");
  };

  // all distinguished entries as slot pairs
  struct Entry {
    std::size_t from, to;
    Perm twist;
    std::size_t from_chain, to_chain;
  };
  std::vector<Entry> entries;
  for (std::size_t s = 0; s < lim.slots.size(); ++s) {
    LevelPoint from = lim.slots[s];
    for (std::size_t j = 0; j < from.level; ++j) {
      if (!level_compatible(from.level, j)) continue;
      LevelPoint to{j, project_zero(from.level, from.zero, j)};
      entries.push_back({s, slot_of(to), table_.at({from.level, from.zero, j}),
                         levels_[from.level].chain_index, levels_[j].chain_index});
    }
  }

  // enumerate compatible tuples: free values on the top slots, everything
  // else transported along the distinguished system and cross-checked
  auto derive = [&](const std::vector<std::size_t>& choice, bool conjugate)
      -> std::optional<std::vector<int>> {
    std::vector<int> vals(lim.slots.size(), -1);
    for (std::size_t k = 0; k < top_slots.size(); ++k)
      vals[top_slots[k]] = static_cast<int>(choice[k]);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& e : entries) {
        if (vals[e.from] < 0) continue;
        const Perm& g = elems_[e.from_chain][static_cast<std::size_t>(vals[e.from])];
        Perm image = conjugate
                         ? e.twist * epi_apply(e.from_chain, e.to_chain, g) * e.twist.inverse()
                         : e.twist * epi_apply(e.from_chain, e.to_chain, g);
        int idx = element_index(e.to_chain, image);
        if (vals[e.to] < 0) {
          vals[e.to] = idx;
          changed = true;
        } else if (vals[e.to] != idx) {
          return std::nullopt;
        }
      }
    }
    for (int v : vals)
      if (v < 0) return std::nullopt;
    return vals;
  };

  std::vector<std::size_t> choice(top_slots.size(), 0);
  bool done = top_slots.empty();
  while (!done) {
    if (auto vals = derive(choice, false)) lim.space.push_back(*vals);
    if (auto vals = derive(choice, true)) {
      std::vector<Perm> tuple;
      for (std::size_t s = 0; s < lim.slots.size(); ++s)
        tuple.push_back(elems_[levels_[lim.slots[s].level].chain_index]
                              [static_cast<std::size_t>((*vals)[s])]);
      lim.tuples.push_back(std::move(tuple));
    }
    std::size_t k = 0;
    while (k < choice.size()) {
      if (++choice[k] < degree_of(lim.slots[top_slots[k]].level)) break;
      choice[k] = 0;
      ++k;
    }
    if (k == choice.size()) done = true;
  }
  std::sort(lim.space.begin(), lim.space.end());
  std::sort(lim.tuples.begin(), lim.tuples.end());

  // gamma acts by per-slot left translation
  std::vector<Perm> gens;
  for (const auto& tuple : lim.tuples) {
    std::vector<Point> img(domain);
    for (std::size_t s = 0; s < lim.slots.size(); ++s) {
      std::size_t ci = levels_[lim.slots[s].level].chain_index;
      for (std::size_t x = 0; x < elems_[ci].size(); ++x)
        img[lim.slot_offsets[s] + x] = static_cast<Point>(
            lim.slot_offsets[s] +
            static_cast<std::size_t>(element_index(ci, tuple[s] * elems_[ci][x])));
    }
    gens.push_back(Perm(std::move(img)));
  }
  lim.gamma = PermGroup::generated(domain, gens);

  for (std::size_t s = 0; s < lim.slots.size(); ++s) {
    PermGroup deck = deck_group(lim.slots[s].level);
    GroupHom proj = GroupHom::from_action(
        lim.gamma, deck,
        [&](const Perm& big) {
          std::size_t ci = levels_[lim.slots[s].level].chain_index;
          std::vector<Point> img(elems_[ci].size());
          for (std::size_t x = 0; x < img.size(); ++x)
            img[x] = static_cast<Point>(big[static_cast<Point>(lim.slot_offsets[s] + x)] -
                                        lim.slot_offsets[s]);
          return Perm(std::move(img));
        },
        limits);
    lim.periods.push_back(proj.kernel());
    lim.projections.push_back(std::move(proj));
  }
  return lim;
}

TruncatedLimit::Laws Tower::limit_laws(const TruncatedLimit& lim) const {
  TruncatedLimit::Laws laws;
  laws.projection_law = true;
  for (std::size_t s = 0; s < lim.slots.size(); ++s) {
    LevelPoint from = lim.slots[s];
    for (std::size_t j = 0; j < from.level; ++j) {
      if (!level_compatible(from.level, j)) continue;
      LevelPoint to{j, project_zero(from.level, from.zero, j)};
      Morphism m = distinguished(from, to);
      std::size_t ts = 0;
      for (; ts < lim.slots.size(); ++ts)
        if (lim.slots[ts] == to) break;
      for (const auto& u : lim.space)
        if (apply_morphism(m, u[s]) != u[ts]) laws.projection_law = false;
    }
  }

  laws.periods_normal = true;
  laws.periods_finite_index = true;
  laws.quotients_match_deck = true;
  for (std::size_t s = 0; s < lim.slots.size(); ++s) {
    if (!is_normal(lim.gamma, lim.periods[s])) laws.periods_normal = false;
    std::uint64_t index = lim.gamma.order() / lim.periods[s].order();
    if (index * lim.periods[s].order() != lim.gamma.order()) laws.periods_finite_index = false;
    PermGroup image = lim.projections[s].image();
    PermGroup deck = deck_group(lim.slots[s].level);
    if (!(image.order() == index)) laws.periods_finite_index = false;
    if (!image.same_group(deck)) laws.quotients_match_deck = false;
  }

  PermGroup meet = lim.gamma;
  for (const auto& p : lim.periods) meet = intersect(meet, p);
  laws.residually_trivial = meet.order() == 1;
  return laws;
}

FiberStructure Tower::fiber_structure(const Limits& limits) const {
  TruncatedLimit lim = limit_group(limits);
  if (lim.space.empty()) throw error("fiber_structure: empty limit space");
  FiberStructure fs;
  fs.slots = lim.slots;
  fs.basepoint = lim.space[0]; // lex-least compatible tuple

  auto pad = [](std::size_t v, std::size_t width) {
    std::string s = std::to_string(v);
    return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
  };
  std::size_t width = 2;

  auto slot_tag = [&](std::size_t s) {
    const LevelPoint& lp = fs.slots[s];
    return levels_[lp.level].label + "_" + levels_[lp.level].zeros[lp.zero];
  };

  StructureData forget, full;
  for (std::size_t s = 0; s < fs.slots.size(); ++s) {
    std::size_t n = degree_of(fs.slots[s].level);
    StructureData::Sort deck{"p_" + slot_tag(s), {}};
    StructureData::Sort fiber{"f_" + slot_tag(s), {}};
    for (std::size_t x = 0; x < n; ++x) {
      deck.elements.push_back("e" + pad(x, width));
      fiber.elements.push_back("e" + pad(x, width));
    }
    forget.sorts.push_back(deck);
    full.sorts.push_back(deck);
    full.sorts.push_back(fiber);
  }

  auto add_diff_relations = [&](StructureData& into, const std::string& prefix,
                                std::size_t s) {
    std::size_t ci = levels_[fs.slots[s].level].chain_index;
    auto gens = generating_sequence(chain_.levels[ci]);
    for (std::size_t k = 0; k < gens.size(); ++k) {
      StructureData::Relation rel;
      rel.name = "d_" + prefix + slot_tag(s) + "_" + std::to_string(k);
      rel.signature = {prefix + slot_tag(s), prefix + slot_tag(s)};
      for (std::size_t x = 0; x < elems_[ci].size(); ++x) {
        std::size_t y =
            static_cast<std::size_t>(element_index(ci, elems_[ci][x] * gens[k]));
        rel.tuples.push_back({"e" + pad(x, width), "e" + pad(y, width)});
      }
      into.relations.push_back(rel);
    }
  };

  for (std::size_t s = 0; s < fs.slots.size(); ++s) {
    add_diff_relations(forget, "p_", s);
    add_diff_relations(full, "p_", s);
    add_diff_relations(full, "f_", s);
  }

  auto slot_of = [&](LevelPoint lp) {
    for (std::size_t s = 0; s < fs.slots.size(); ++s)
      if (fs.slots[s] == lp) return s;
    throw error("fiber_structure: unknown slot");
  };

  for (std::size_t s = 0; s < fs.slots.size(); ++s) {
    LevelPoint from = fs.slots[s];
    std::size_t cfrom = levels_[from.level].chain_index;
    for (std::size_t j = 0; j < from.level; ++j) {
      if (!level_compatible(from.level, j)) continue;
      LevelPoint to{j, project_zero(from.level, from.zero, j)};
      std::size_t ts = slot_of(to);
      std::size_t cto = levels_[j].chain_index;
      const Perm& d = table_.at({from.level, from.zero, j});

      StructureData::Relation deck_graph, fiber_graph;
      deck_graph.name = "tp_" + slot_tag(s) + "__" + slot_tag(ts);
      deck_graph.signature = {"p_" + slot_tag(s), "p_" + slot_tag(ts)};
      fiber_graph.name = "tf_" + slot_tag(s) + "__" + slot_tag(ts);
      fiber_graph.signature = {"f_" + slot_tag(s), "f_" + slot_tag(ts)};
      for (std::size_t x = 0; x < elems_[cfrom].size(); ++x) {
        const Perm& g = elems_[cfrom][x];
        std::size_t deck_img = static_cast<std::size_t>(
            element_index(cto, d * epi_apply(cfrom, cto, g) * d.inverse()));
        std::size_t fiber_img =
            static_cast<std::size_t>(element_index(cto, d * epi_apply(cfrom, cto, g)));
        deck_graph.tuples.push_back({"e" + pad(x, width), "e" + pad(deck_img, width)});
        fiber_graph.tuples.push_back({"e" + pad(x, width), "e" + pad(fiber_img, width)});
      }
      forget.relations.push_back(deck_graph);
      full.relations.push_back(deck_graph);
      full.relations.push_back(fiber_graph);
    }
  }

  // i_x : deck sort -> fiber sort, p -> p(basepoint)
  for (std::size_t s = 0; s < fs.slots.size(); ++s) {
    std::size_t ci = levels_[fs.slots[s].level].chain_index;
    StructureData::Relation ix;
    ix.name = "ix_" + slot_tag(s);
    ix.signature = {"p_" + slot_tag(s), "f_" + slot_tag(s)};
    std::vector<int> map(elems_[ci].size());
    const Perm& u = elems_[ci][static_cast<std::size_t>(fs.basepoint[s])];
    for (std::size_t g = 0; g < elems_[ci].size(); ++g) {
      int img = element_index(ci, elems_[ci][g] * u);
      map[g] = img;
      ix.tuples.push_back(
          {"e" + pad(g, width), "e" + pad(static_cast<std::size_t>(img), width)});
    }
    fs.ix.push_back(std::move(map));
    full.relations.push_back(ix);

    // verify i_x is a bijection commuting with the distinguished graphs
    std::vector<bool> hit(elems_[ci].size(), false);
    for (int v : fs.ix.back()) {
      if (hit[static_cast<std::size_t>(v)])
        throw error("fiber_structure: i_x is not a bijection");
      hit[static_cast<std::size_t>(v)] = true;
    }
  }
  for (std::size_t s = 0; s < fs.slots.size(); ++s) {
    LevelPoint from = fs.slots[s];
    std::size_t cfrom = levels_[from.level].chain_index;
    for (std::size_t j = 0; j < from.level; ++j) {
      if (!level_compatible(from.level, j)) continue;
      LevelPoint to{j, project_zero(from.level, from.zero, j)};
      std::size_t ts = slot_of(to);
      std::size_t cto = levels_[j].chain_index;
      const Perm& d = table_.at({from.level, from.zero, j});
      for (std::size_t g = 0; g < elems_[cfrom].size(); ++g) {
        int deck_img = element_index(cto, d * epi_apply(cfrom, cto, elems_[cfrom][g]) * d.inverse());
        int lhs = fs.ix[ts][static_cast<std::size_t>(deck_img)];
        int rhs = element_index(
            cto, d * epi_apply(cfrom, cto,
                               elems_[cfrom][static_cast<std::size_t>(fs.ix[s][g])]));
        if (lhs != rhs) throw error("fiber_structure: i_x does not commute with morphisms");
      }
    }
  }

  Limits wide = limits;
  wide.max_arity = std::max<std::size_t>(wide.max_arity, 4);
  fs.forget = SortedUniverse(forget, wide);
  fs.full = SortedUniverse(full, wide);
  return fs;
}

PermGroup Tower::pi1_et(const FiberStructure& fs, const Limits& limits) const {
  (void)limits;
  AutOptions opts;
  opts.max_universe = fs.forget.size();
  return aut(fs.forget, opts).group;
}

TorsorLaws Tower::torsor_axioms(const TruncatedLimit& lim) const {
  TorsorLaws laws{true, true, true, true};
  for (std::size_t s = 0; s < lim.slots.size(); ++s) {
    std::size_t ci = levels_[lim.slots[s].level].chain_index;
    const auto& list = elems_[ci];

    // A2': evaluation of any torsor element is onto the fiber
    std::set<int> seen;
    for (const auto& u : lim.space) seen.insert(u[s]);
    if (seen.size() != list.size()) laws.evaluation_surjective = false;

    // A2': the deck action commutes with evaluation
    for (const auto& a : generating_sequence(chain_.levels[ci]))
      for (const auto& g : list)
        for (const auto& u : lim.space) {
          const Perm& up = list[static_cast<std::size_t>(u[s])];
          if (!((a * g) * up == a * (g * up))) laws.action_equivariant = false;
        }

    // A2': free transitive action on the torsor
    for (const auto& p1 : list)
      for (const auto& p2 : list) {
        int count = 0;
        for (const auto& a : list)
          if (a * p1 == p2) ++count;
        if (count != 1) laws.free_transitive = false;
      }

    // A3': some torsor element evaluates to the projection itself
    bool witness = false;
    for (const auto& g : list) {
      bool all = true;
      for (const auto& u : lim.space) {
        const Perm& up = list[static_cast<std::size_t>(u[s])];
        if (!(g * up == up)) {
          all = false;
          break;
        }
      }
      if (all) witness = true;
    }
    if (!witness) laws.a3_witness = false;
  }
  return laws;
}

SharpResult Tower::sharp() const {
  SharpResult out;
  out.gk = gk_;
  std::vector<Perm> members;
  bool first_obstruction = true;
  auto gk_elems = gk_.elements();
  for (std::size_t ei = 0; ei < gk_elems.size(); ++ei) {
    const Perm& sigma = gk_elems[ei];
    bool ok = true;
    for (std::size_t i = 0; i < levels_.size() && ok; ++i)
      for (std::size_t z = 0; z < levels_[i].zeros.size() && ok; ++z)
        for (std::size_t j = 0; j <= i && ok; ++j) {
          if (!level_compatible(i, j)) continue;
          std::size_t sz = static_cast<std::size_t>(
              sigma[static_cast<Point>(levels_[i].zero_offset + z)] - levels_[i].zero_offset);
          const Perm& plain = table_.at({i, z, j});
          const Perm& moved = table_.at({i, sz, j});
          if (!(plain == moved)) {
            ok = false;
            if (first_obstruction) {
              out.obstruction = {{LevelPoint{i, z},
                                  LevelPoint{j, project_zero(i, z, j)}, ei}};
              first_obstruction = false;
            }
          }
        }
    if (ok) members.push_back(sigma);
  }
  out.g_sharp = PermGroup::generated(gk_.degree(), members);
  out.equals_gk = out.g_sharp.order() == gk_.order();
  out.k_sharp_label =
      out.equals_gk ? "k"
                    : "k-extension of degree " +
                          std::to_string(gk_.order() / out.g_sharp.order());
  return out;
}

SortedUniverse Tower::tower_structure(const Limits& limits) const {
  auto pad = [](std::size_t v) {
    std::string s = std::to_string(v);
    return std::string(s.size() < 2 ? 2 - s.size() : 0, '0') + s;
  };
  StructureData d;
  std::size_t total_zeros = 0;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    StructureData::Sort zsort{"zl" + pad(i), {}};
    for (std::size_t z = 0; z < levels_[i].zeros.size(); ++z)
      zsort.elements.push_back("z" + pad(z));
    d.sorts.push_back(zsort);
    total_zeros += levels_[i].zeros.size();

    StructureData::Sort psort{"pl" + pad(i), {}};
    std::size_t n = degree_of(i);
    for (std::size_t z = 0; z < levels_[i].zeros.size(); ++z)
      for (std::size_t g = 0; g < n; ++g)
        psort.elements.push_back("z" + pad(z) + "e" + pad(g));
    d.sorts.push_back(psort);
  }
  auto zid = [&](std::size_t z) { return "z" + pad(z); };
  auto pid = [&](std::size_t z, std::size_t g) { return "z" + pad(z) + "e" + pad(g); };

  // the Gk orbit of the canonical all-zeros tuple pins the zeros-side group
  StructureData::Relation orb;
  orb.name = "gkorb";
  for (std::size_t i = 0; i < levels_.size(); ++i)
    for (std::size_t z = 0; z < levels_[i].zeros.size(); ++z) {
      orb.signature.push_back("zl" + pad(i));
      (void)z;
    }
  for (const auto& sigma : gk_.elements()) {
    std::vector<std::string> row;
    for (std::size_t i = 0; i < levels_.size(); ++i)
      for (std::size_t z = 0; z < levels_[i].zeros.size(); ++z)
        row.push_back(zid(static_cast<std::size_t>(
            sigma[static_cast<Point>(levels_[i].zero_offset + z)] - levels_[i].zero_offset)));
    orb.tuples.push_back(row);
  }
  d.relations.push_back(orb);

  for (std::size_t i = 0; i < levels_.size(); ++i) {
    std::size_t ci = levels_[i].chain_index;
    std::size_t n = degree_of(i);

    StructureData::Relation member;
    member.name = "in" + pad(i);
    member.signature = {"pl" + pad(i), "zl" + pad(i)};
    for (std::size_t z = 0; z < levels_[i].zeros.size(); ++z)
      for (std::size_t g = 0; g < n; ++g) member.tuples.push_back({pid(z, g), zid(z)});
    d.relations.push_back(member);

    auto gens = generating_sequence(chain_.levels[ci]);
    for (std::size_t k = 0; k < gens.size(); ++k) {
      StructureData::Relation rel;
      rel.name = "d" + pad(i) + "_" + std::to_string(k);
      rel.signature = {"pl" + pad(i), "pl" + pad(i)};
      for (std::size_t z = 0; z < levels_[i].zeros.size(); ++z)
        for (std::size_t g = 0; g < n; ++g) {
          std::size_t y = static_cast<std::size_t>(element_index(ci, elems_[ci][g] * gens[k]));
          rel.tuples.push_back({pid(z, g), pid(z, y)});
        }
      d.relations.push_back(rel);
    }

    for (std::size_t j = 0; j < i; ++j) {
      if (!level_compatible(i, j)) continue;
      std::size_t cj = levels_[j].chain_index;
      StructureData::Relation tmap, pimap;
      tmap.name = "t" + pad(i) + "_" + pad(j);
      tmap.signature = {"pl" + pad(i), "pl" + pad(j)};
      pimap.name = "pi" + pad(i) + "_" + pad(j);
      pimap.signature = {"zl" + pad(i), "zl" + pad(j)};
      for (std::size_t z = 0; z < levels_[i].zeros.size(); ++z) {
        std::size_t pz = project_zero(i, z, j);
        pimap.tuples.push_back({zid(z), zid(pz)});
        const Perm& dtw = table_.at({i, z, j});
        for (std::size_t g = 0; g < n; ++g) {
          std::size_t y = static_cast<std::size_t>(
              element_index(cj, dtw * epi_apply(ci, cj, elems_[ci][g]) * dtw.inverse()));
          tmap.tuples.push_back({pid(z, g), pid(pz, y)});
        }
      }
      d.relations.push_back(tmap);
      d.relations.push_back(pimap);
    }
  }

  Limits wide = limits;
  wide.max_arity = std::max(wide.max_arity, total_zeros);
  return SortedUniverse(d, wide);
}

std::optional<SectionDemo> Tower::section_demo(const Limits& limits) const {
  SharpResult sh = sharp();
  if (!sh.equals_gk) return std::nullopt;

  SortedUniverse full = tower_structure(limits);
  AutOptions opts;
  opts.max_universe = full.size();
  PermGroup aut_full = aut(full, opts).group;

  // domain layout: sorts sorted by name, pl00 < pl01 < ... < zl00 < zl01 ...
  std::size_t zeros_offset = 0;
  for (std::size_t i = 0; i < levels_.size(); ++i) zeros_offset += degree_of(i) * levels_[i].zeros.size();
  std::size_t zeros_total = gk_.degree();

  auto restrict_to_zeros = [&](const Perm& big) {
    std::vector<Point> img(zeros_total);
    for (std::size_t k = 0; k < zeros_total; ++k)
      img[k] = static_cast<Point>(big[static_cast<Point>(zeros_offset + k)] - zeros_offset);
    return Perm(std::move(img));
  };

  std::vector<Perm> image_gens;
  for (const auto& g : aut_full.generators()) {
    Perm r = restrict_to_zeros(g);
    if (!gk_.contains(r))
      throw error("section_demo: the zeros-side action escaped Gk");
    image_gens.push_back(r);
  }
  PermGroup gk_image = PermGroup::generated(zeros_total, image_gens);

  // the slot-relabeling section
  auto lift = [&](const Perm& sigma) {
    std::vector<Point> img(full.size());
    std::size_t poffset = 0;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      std::size_t n = degree_of(i);
      for (std::size_t z = 0; z < levels_[i].zeros.size(); ++z) {
        std::size_t sz = static_cast<std::size_t>(
            sigma[static_cast<Point>(levels_[i].zero_offset + z)] - levels_[i].zero_offset);
        for (std::size_t g = 0; g < n; ++g)
          img[poffset + z * n + g] = static_cast<Point>(poffset + sz * n + g);
      }
      poffset += n * levels_[i].zeros.size();
    }
    for (std::size_t k = 0; k < zeros_total; ++k)
      img[zeros_offset + k] = static_cast<Point>(zeros_offset + sigma[static_cast<Point>(k)]);
    return Perm(std::move(img));
  };

  std::vector<Perm> section_images;
  for (const auto& g : gk_.generators()) {
    Perm lifted = lift(g);
    if (!full.is_sort_preserving(lifted) || !full.preserves_all_relations(lifted))
      throw error("section_demo: lifted generator is not an automorphism");
    if (!aut_full.contains(lifted))
      throw error("section_demo: lifted generator missing from Aut");
    section_images.push_back(lifted);
  }
  GroupHom section = GroupHom::from_gen_images(gk_, aut_full, gk_.generators(),
                                               section_images, limits);
  // verified section: restriction . section = identity on Gk
  for (const auto& [sigma, lifted] : section.table())
    if (!(restrict_to_zeros(lifted) == sigma))
      throw error("section_demo: restriction round trip failed");

  return SectionDemo{full, aut_full, gk_image, section};
}

} // namespace gs
