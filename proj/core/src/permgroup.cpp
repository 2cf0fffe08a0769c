#include "gs/permgroup.hpp"

#include <algorithm>
#include <set>

namespace gs {

PermGroup PermGroup::trivial(std::size_t degree) {
  PermGroup g;
  g.degree_ = degree;
  g.order_ = 1;
  return g;
}

PermGroup PermGroup::generated(std::size_t degree, std::vector<Perm> gens) {
  return generated_with_base(degree, std::move(gens), {});
}

PermGroup PermGroup::generated_with_base(std::size_t degree, std::vector<Perm> gens,
                                         std::vector<Point> base_prefix) {
  PermGroup g;
  g.degree_ = degree;
  std::vector<Perm> kept;
  for (auto& p : gens) {
    if (p.degree() != degree) throw error("PermGroup: generator degree mismatch");
    if (!p.is_identity()) kept.push_back(std::move(p));
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  g.gens_ = kept;
  g.build_chain(kept, base_prefix);
  return g;
}

void PermGroup::build_chain(const std::vector<Perm>& gens, const std::vector<Point>& base_prefix) {
  order_ = 1;
  chain_.clear();
  std::vector<Perm> current = gens;
  std::size_t prefix_pos = 0;
  std::vector<bool> used(degree_, false);

  while (true) {
    Point base = degree_; // sentinel
    // forced prefix points first, then the least point moved by a generator
    while (prefix_pos < base_prefix.size()) {
      Point c = base_prefix[prefix_pos];
      if (c >= degree_) throw error("PermGroup: base point out of range");
      ++prefix_pos;
      if (!used[c]) {
        base = c;
        break;
      }
    }
    if (base == degree_) {
      if (current.empty()) break;
      for (Point p = 0; p < degree_ && base == degree_; ++p) {
        if (used[p]) continue;
        for (const auto& s : current)
          if (s[p] != p) {
            base = p;
            break;
          }
      }
      if (base == degree_) break; // remaining generators are identity
    }
    used[base] = true;

    ChainLevel level;
    level.base = base;
    level.generators = current;
    std::vector<int> pos(degree_, -1);
    level.orbit.push_back(base);
    level.transversal.push_back(Perm(degree_));
    pos[base] = 0;
    for (std::size_t i = 0; i < level.orbit.size(); ++i) {
      for (const auto& s : current) {
        Point q = s[level.orbit[i]];
        if (pos[q] < 0) {
          pos[q] = static_cast<int>(level.orbit.size());
          level.orbit.push_back(q);
          level.transversal.push_back(level.transversal[i] * s);
        }
      }
    }
    order_ *= level.orbit.size();

    // Schreier generators for the stabilizer of `base`
    std::set<Perm> next;
    for (std::size_t i = 0; i < level.orbit.size(); ++i) {
      for (const auto& s : current) {
        Point q = s[level.orbit[i]];
        Perm schreier = level.transversal[i] * s * level.transversal[static_cast<std::size_t>(pos[q])].inverse();
        if (!schreier.is_identity()) next.insert(std::move(schreier));
      }
    }
    chain_.push_back(std::move(level));
    current.assign(next.begin(), next.end());
  }
}

Perm PermGroup::sift(const Perm& p) const {
  Perm r = p;
  for (const auto& level : chain_) {
    Point q = r[level.base];
    auto it = std::find(level.orbit.begin(), level.orbit.end(), q);
    if (it == level.orbit.end()) return r;
    r = r * level.transversal[static_cast<std::size_t>(it - level.orbit.begin())].inverse();
  }
  return r;
}

bool PermGroup::contains(const Perm& p) const {
  if (p.degree() != degree_) return false;
  return sift(p).is_identity();
}

bool PermGroup::is_subgroup_of(const PermGroup& g) const {
  for (const auto& s : gens_)
    if (!g.contains(s)) return false;
  return true;
}

bool PermGroup::same_group(const PermGroup& other) const {
  return order_ == other.order_ && is_subgroup_of(other);
}

std::vector<Perm> PermGroup::elements(std::size_t cap) const {
  if (order_ > cap) throw bound_error("PermGroup: element enumeration beyond cap");
  std::vector<Perm> out;
  out.reserve(static_cast<std::size_t>(order_));
  out.push_back(Perm(degree_));
  // product over chain transversals
  for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) {
    std::vector<Perm> next;
    next.reserve(out.size() * it->transversal.size());
    for (const auto& t : it->transversal)
      for (const auto& e : out) next.push_back(e * t);
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PermGroup PermGroup::pointwise_stabilizer(std::span<const Point> points) const {
  std::vector<Point> prefix(points.begin(), points.end());
  std::sort(prefix.begin(), prefix.end());
  prefix.erase(std::unique(prefix.begin(), prefix.end()), prefix.end());
  for (Point p : prefix)
    if (p >= degree_) throw error("pointwise_stabilizer: unknown point");
  if (prefix.empty()) return *this;
  // With the prefix forced in front of the base, the first |prefix| chain
  // levels stabilize exactly those points, so the generators stored at the
  // next level generate the stabilizer.  A shorter chain means the chain
  // became trivial inside the prefix.
  PermGroup with_base = generated_with_base(degree_, gens_, prefix);
  if (with_base.chain_.size() > prefix.size())
    return generated(degree_, with_base.chain_[prefix.size()].generators);
  return trivial(degree_);
}

std::vector<Point> PermGroup::orbit_of(Point p) const {
  std::vector<Point> orbit{p};
  std::vector<bool> seen(degree_, false);
  seen[p] = true;
  for (std::size_t i = 0; i < orbit.size(); ++i)
    for (const auto& s : gens_) {
      Point q = s[orbit[i]];
      if (!seen[q]) {
        seen[q] = true;
        orbit.push_back(q);
      }
    }
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

std::vector<std::vector<Point>> PermGroup::orbits() const {
  std::vector<std::vector<Point>> out;
  std::vector<bool> done(degree_, false);
  for (Point p = 0; p < degree_; ++p) {
    if (done[p]) continue;
    auto orb = orbit_of(p);
    for (Point q : orb) done[q] = true;
    out.push_back(std::move(orb));
  }
  return out;
}

bool PermGroup::fixes_all(std::span<const Point> points) const {
  for (const auto& s : gens_)
    for (Point p : points)
      if (s[p] != p) return false;
  return true;
}

namespace {

std::vector<Perm> closure(std::size_t degree, std::vector<Perm> gens) {
  std::set<Perm> elems;
  elems.insert(Perm(degree));
  std::vector<Perm> queue{Perm(degree)};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& g : gens) {
      Perm q = queue[i] * g;
      if (elems.insert(q).second) queue.push_back(std::move(q));
    }
  }
  return {elems.begin(), elems.end()};
}

} // namespace

std::vector<PermGroup> all_subgroups(const PermGroup& g, std::uint64_t max_order,
                                     const Limits& limits) {
  if (g.order() > limits.max_group_order)
    throw bound_error("all_subgroups: group order exceeds bound");
  auto all = g.elements(limits.max_elements);

  // subgroup identified by its sorted element list
  std::set<std::vector<Perm>> seen;
  std::vector<std::vector<Perm>> work;
  std::vector<Perm> triv{Perm(g.degree())};
  seen.insert(triv);
  work.push_back(triv);

  for (std::size_t i = 0; i < work.size(); ++i) {
    const auto current = work[i];
    for (const auto& x : all) {
      if (std::binary_search(current.begin(), current.end(), x)) continue;
      std::vector<Perm> gens(current.begin(), current.end());
      gens.push_back(x);
      auto ext = closure(g.degree(), gens);
      if (static_cast<std::uint64_t>(ext.size()) > max_order) continue;
      if (seen.insert(ext).second) work.push_back(std::move(ext));
    }
  }

  std::vector<std::vector<Perm>> lists(seen.begin(), seen.end());
  std::sort(lists.begin(), lists.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::vector<PermGroup> out;
  out.reserve(lists.size());
  for (auto& l : lists) out.push_back(PermGroup::generated(g.degree(), l));
  return out;
}

bool is_normal(const PermGroup& g, const PermGroup& h) {
  if (!h.is_subgroup_of(g)) throw error("is_normal: H is not a subgroup of G");
  for (const auto& x : g.generators()) {
    Perm xi = x.inverse();
    for (const auto& y : h.generators())
      if (!h.contains(xi * y * x)) return false;
  }
  return true;
}

PermGroup intersect(const PermGroup& g, const PermGroup& h) {
  const PermGroup& small = g.order() <= h.order() ? g : h;
  const PermGroup& other = g.order() <= h.order() ? h : g;
  std::vector<Perm> kept;
  for (const auto& e : small.elements())
    if (other.contains(e)) kept.push_back(e);
  return PermGroup::generated(g.degree(), kept);
}

GroupHom::GroupHom(PermGroup dom, PermGroup cod, std::map<Perm, Perm> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
  verify();
}

void GroupHom::verify() const {
  if (table_.size() != dom_.order()) throw error("GroupHom: table does not cover the domain");
  for (const auto& [a, fa] : table_) {
    if (!cod_.contains(fa)) throw error("GroupHom: image outside the codomain");
    for (const auto& g : dom_.generators()) {
      auto it = table_.find(a * g);
      auto ig = table_.find(g);
      if (it == table_.end() || ig == table_.end() || it->second != fa * ig->second)
        throw error("GroupHom: generator relations are not preserved");
    }
  }
}

GroupHom GroupHom::from_action(const PermGroup& dom, const PermGroup& cod,
                               const std::function<Perm(const Perm&)>& act,
                               const Limits& limits) {
  std::map<Perm, Perm> table;
  for (const auto& e : dom.elements(limits.max_elements)) table.emplace(e, act(e));
  return GroupHom(dom, cod, std::move(table));
}

GroupHom GroupHom::from_gen_images(const PermGroup& dom, const PermGroup& cod,
                                   const std::vector<Perm>& dom_gens,
                                   const std::vector<Perm>& images, const Limits& limits) {
  if (dom_gens.size() != images.size()) throw error("GroupHom: generator/image count mismatch");
  (void)limits;
  std::map<Perm, Perm> table;
  table.emplace(Perm(dom.degree()), Perm(cod.degree()));
  std::vector<Perm> queue{Perm(dom.degree())};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Perm fa = table.at(queue[i]);
    for (std::size_t k = 0; k < dom_gens.size(); ++k) {
      Perm b = queue[i] * dom_gens[k];
      Perm fb = fa * images[k];
      auto [it, inserted] = table.emplace(b, fb);
      if (inserted)
        queue.push_back(std::move(b));
      else if (it->second != fb)
        throw error("GroupHom: generator images do not extend to a homomorphism");
    }
  }
  if (table.size() != dom.order())
    throw error("GroupHom: generators do not generate the domain");
  return GroupHom(dom, cod, std::move(table));
}

GroupHom GroupHom::identity(const PermGroup& g, const Limits& limits) {
  return from_action(g, g, [](const Perm& p) { return p; }, limits);
}

Perm GroupHom::operator()(const Perm& p) const {
  auto it = table_.find(p);
  if (it == table_.end()) throw error("GroupHom: element outside the domain");
  return it->second;
}

PermGroup GroupHom::kernel() const {
  std::vector<Perm> ker;
  for (const auto& [a, fa] : table_)
    if (fa.is_identity()) ker.push_back(a);
  return PermGroup::generated(dom_.degree(), ker);
}

PermGroup GroupHom::image() const {
  std::vector<Perm> img;
  for (const auto& [a, fa] : table_) img.push_back(fa);
  return PermGroup::generated(cod_.degree(), img);
}

GroupHom GroupHom::after(const GroupHom& other) const {
  std::map<Perm, Perm> table;
  for (const auto& [a, fa] : other.table_) table.emplace(a, (*this)(fa));
  return GroupHom(other.dom_, cod_, std::move(table));
}

std::vector<Perm> generating_sequence(const PermGroup& g, const Limits& limits) {
  std::vector<Perm> gens;
  PermGroup current = PermGroup::trivial(g.degree());
  for (const auto& e : g.elements(limits.max_elements)) {
    if (current.order() == g.order()) break;
    if (current.contains(e)) continue;
    gens.push_back(e);
    std::vector<Perm> next = gens;
    current = PermGroup::generated(g.degree(), next);
  }
  return gens;
}

std::vector<GroupHom> find_sections(const GroupHom& phi, const Limits& limits) {
  if (!phi.is_surjective()) throw error("find_sections: homomorphism is not surjective");
  const PermGroup& q = phi.codomain();
  const PermGroup& g = phi.domain();

  auto qgens = generating_sequence(q, limits);
  if (qgens.empty()) {
    // trivial codomain: the unique section sends identity to identity
    std::vector<GroupHom> out;
    out.push_back(GroupHom::from_gen_images(q, g, {}, {}, limits));
    return out;
  }

  // candidate images: full preimage coset per generator
  std::vector<std::vector<Perm>> candidates(qgens.size());
  auto gelems = g.elements(limits.max_elements);
  for (std::size_t i = 0; i < qgens.size(); ++i)
    for (const auto& e : gelems)
      if (phi(e) == qgens[i]) candidates[i].push_back(e);

  std::vector<GroupHom> sections;
  std::vector<Perm> pick(qgens.size(), Perm(g.degree()));
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == qgens.size()) {
      try {
        GroupHom s = GroupHom::from_gen_images(q, g, qgens, pick, limits);
        for (const auto& [a, sa] : s.table())
          if (phi(sa) != a) return;
        sections.push_back(std::move(s));
      } catch (const error&) {
        // not a homomorphism; skip
      }
      return;
    }
    for (const auto& c : candidates[i]) {
      pick[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return sections;
}

std::optional<GroupHom> iso_groups(const PermGroup& g, const PermGroup& h, const Limits& limits) {
  if (g.order() != h.order()) return std::nullopt;
  auto gelems = g.elements(limits.max_elements);
  auto helems = h.elements(limits.max_elements);

  // order profiles must match
  std::map<std::uint64_t, std::size_t> pg, ph;
  for (const auto& e : gelems) pg[e.order()]++;
  for (const auto& e : helems) ph[e.order()]++;
  if (pg != ph) return std::nullopt;

  auto ggens = generating_sequence(g, limits);
  std::vector<Perm> pick(ggens.size(), Perm(h.degree()));
  std::optional<GroupHom> found;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (found) return;
    if (i == ggens.size()) {
      try {
        GroupHom f = GroupHom::from_gen_images(g, h, ggens, pick, limits);
        if (f.is_injective() && f.is_surjective()) found = std::move(f);
      } catch (const error&) {
      }
      return;
    }
    std::uint64_t want = ggens[i].order();
    for (const auto& c : helems) {
      if (c.order() != want) continue;
      pick[i] = c;
      rec(i + 1);
      if (found) return;
    }
  };
  rec(0);
  return found;
}

} // namespace gs
