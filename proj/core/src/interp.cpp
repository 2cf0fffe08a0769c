#include "gs/interp.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace gs {

namespace {

// class-index permutation induced on the receiving sort by an extended
// automorphism of the target fragment
std::vector<int> class_action(const Interpretation& g, const Perm& sigma) {
  int n = g.class_count();
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    Point cp = g.target.class_point(g.sort_index, c);
    out[static_cast<std::size_t>(c)] = g.target.class_of_point(sigma[cp]).second;
  }
  return out;
}

// the same action transported to a permutation of the source points
Perm transported_action(const Interpretation& g, const Perm& sigma) {
  auto cls = class_action(g, sigma);
  std::vector<int> class_to_src(cls.size());
  for (std::size_t x = 0; x < g.source.size(); ++x)
    class_to_src[static_cast<std::size_t>(g.map[x])] = static_cast<int>(x);
  std::vector<Point> img(g.source.size());
  for (std::size_t x = 0; x < g.source.size(); ++x)
    img[x] = static_cast<Point>(class_to_src[static_cast<std::size_t>(
        cls[static_cast<std::size_t>(g.map[x])])]);
  return Perm(std::move(img));
}

std::vector<XTuple> transported_relation(const Interpretation& g,
                                         const SortedUniverse::Relation& r) {
  std::vector<XTuple> out;
  for (const auto& t : r.tuples) {
    XTuple ct(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) ct[i] = g.map[t[i]];
    out.push_back(std::move(ct));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool class_set_invariant(const Interpretation& g, const std::vector<XTuple>& tuples) {
  std::set<XTuple> set(tuples.begin(), tuples.end());
  for (const auto& sigma : g.target.aut_group().generators()) {
    auto act = class_action(g, sigma);
    for (const auto& t : tuples) {
      XTuple img(t.size());
      for (std::size_t i = 0; i < t.size(); ++i)
        img[i] = act[static_cast<std::size_t>(t[i])];
      if (!set.count(img)) return false;
    }
  }
  return true;
}

// Copies sort `idx` of `src` (and, recursively, the imaginaries its
// signature references) into `dst`, reusing structurally identical sorts.
// Fragments must share the base structure.
std::size_t transplant_sort(EqFragment& dst, const EqFragment& src, std::size_t idx) {
  const auto& q = src.imaginary(idx);
  std::vector<SortRef> signature = q.signature;
  for (auto& ref : signature)
    if (ref.kind == SortRef::Kind::imaginary)
      ref.index = transplant_sort(dst, src, ref.index);

  for (std::size_t i = 0; i < dst.num_imaginaries(); ++i) {
    const auto& cand = dst.imaginary(i);
    if (cand.signature == signature && cand.tuples == q.tuples &&
        cand.class_of == q.class_of)
      return i;
  }

  QuotientSpec spec;
  spec.name = "xp" + std::to_string(dst.num_imaginaries());
  spec.signature = signature;
  spec.tuples = q.tuples;
  spec.use_blocks = true;
  spec.blocks.resize(static_cast<std::size_t>(q.class_count));
  for (std::size_t i = 0; i < q.tuples.size(); ++i)
    spec.blocks[static_cast<std::size_t>(q.class_of[i])].push_back(q.tuples[i]);
  Limits wide;
  wide.max_arity = std::max(Limits{}.max_arity, signature.size());
  dst = dst.with_quotient(spec, wide);
  return dst.num_imaginaries() - 1;
}

} // namespace

Interpretation validate_premorphism(Interpretation g) {
  if (g.sort_index >= g.target.num_imaginaries())
    throw error("interpretation: missing quotient sort");
  int classes = g.class_count();
  if (g.map.size() != g.source.size())
    throw error("interpretation: map does not cover the source universe");
  std::vector<bool> hit(static_cast<std::size_t>(classes), false);
  for (int c : g.map) {
    if (c < 0 || c >= classes) throw error("interpretation: map value out of range");
    if (hit[static_cast<std::size_t>(c)])
      throw error("interpretation: map is not injective");
    hit[static_cast<std::size_t>(c)] = true;
  }
  if (g.source.size() != static_cast<std::size_t>(classes))
    throw error("interpretation: map is not onto the quotient sort");

  // transported relations, sort predicates and constants must be invariant
  for (const auto& r : g.source.relations())
    if (!class_set_invariant(g, transported_relation(g, r)))
      throw error("interpretation: transported relation '" + r.name +
                  "' is not definable in the target");
  for (std::size_t s = 0; s < g.source.num_sorts(); ++s) {
    auto [b, e] = g.source.sort_range(s);
    std::vector<XTuple> pred;
    for (Point p = b; p < e; ++p) pred.push_back({g.map[p]});
    if (!class_set_invariant(g, pred))
      throw error("interpretation: transported sort '" + g.source.sort_name(s) +
                  "' is not definable in the target");
  }
  for (const auto& c : g.source.constants()) {
    std::vector<XTuple> single{{g.map[c.element]}};
    if (!class_set_invariant(g, single))
      throw error("interpretation: transported constant '" + c.name +
                  "' is not definable in the target");
  }
  g.flags.premorphism_ok = true;
  return g;
}

std::vector<std::size_t> tuple_orbit_partition(const std::vector<Perm>& gens,
                                               const std::vector<Point>& domain,
                                               std::size_t k) {
  std::map<Point, std::size_t> pos;
  for (std::size_t i = 0; i < domain.size(); ++i) pos[domain[i]] = i;
  std::size_t n = domain.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= n;

  auto decode = [&](std::size_t code) {
    std::vector<std::size_t> t(k);
    for (std::size_t i = k; i-- > 0;) {
      t[i] = code % n;
      code /= n;
    }
    return t;
  };
  auto encode = [&](const std::vector<std::size_t>& t) {
    std::size_t code = 0;
    for (std::size_t v : t) code = code * n + v;
    return code;
  };

  std::vector<std::size_t> orbit_id(total, total);
  for (std::size_t start = 0; start < total; ++start) {
    if (orbit_id[start] != total) continue;
    std::vector<std::size_t> queue{start};
    orbit_id[start] = start;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      auto t = decode(queue[qi]);
      for (const auto& g : gens) {
        std::vector<std::size_t> img(k);
        for (std::size_t i = 0; i < k; ++i) img[i] = pos.at(g[domain[t[i]]]);
        std::size_t code = encode(img);
        if (orbit_id[code] == total) {
          orbit_id[code] = start;
          queue.push_back(code);
        }
      }
    }
  }
  return orbit_id;
}

Classification classify(const Interpretation& g, std::size_t arity_cap) {
  if (!g.flags.premorphism_ok)
    throw error("classify: interpretation has not passed premorphism validation");
  Classification out;
  std::size_t n = g.source.size();
  std::size_t cap = arity_cap == 0 ? n : std::min(arity_cap, n);
  out.verified_arity = cap;

  // embedding: orbit partitions of Aut(N) and of the transported restriction
  // of the target group agree on all k-tuples
  auto aut_n = aut(g.source, g.target.options()).group;
  std::vector<Perm> restricted;
  for (const auto& sigma : g.target.aut_group().generators())
    restricted.push_back(transported_action(g, sigma));
  std::vector<Point> domain(n);
  for (std::size_t i = 0; i < n; ++i) domain[i] = static_cast<Point>(i);

  out.embedding = true;
  for (std::size_t k = 1; k <= cap && out.embedding; ++k) {
    auto pa = tuple_orbit_partition(aut_n.generators(), domain, k);
    auto pb = tuple_orbit_partition(restricted, domain, k);
    if (pa != pb) out.embedding = false;
  }

  // surjection: every base point of the target is fixed by the stabilizer of
  // the image classes
  std::vector<Point> classes;
  for (int c = 0; c < g.class_count(); ++c)
    classes.push_back(g.target.class_point(g.sort_index, c));
  auto fixed = g.target.dcl(classes);
  out.surjection = true;
  for (Point p = 0; p < g.target.base().size(); ++p)
    if (!std::binary_search(fixed.begin(), fixed.end(), p)) {
      out.surjection = false;
      break;
    }

  out.isomorphism = out.embedding && out.surjection;
  return out;
}

Interpretation classify_into(Interpretation g, std::size_t arity_cap) {
  auto c = classify(g, arity_cap);
  g.flags.embedding = c.embedding;
  g.flags.surjection = c.surjection;
  g.flags.classified = true;
  g.flags.verified_arity = c.verified_arity;
  return g;
}

RestrictionHom restriction_hom(const Interpretation& g, const Limits& limits) {
  if (!g.flags.premorphism_ok)
    throw error("restriction_hom: interpretation has not passed premorphism validation");
  auto aut_n = aut(g.source, g.target.options()).group;
  for (const auto& sigma : g.target.aut_group().generators()) {
    Perm induced = transported_action(g, sigma);
    if (!g.source.preserves_all_relations(induced) || !g.source.fixes_constants(induced) ||
        !g.source.is_sort_preserving(induced))
      throw error("restriction_hom: an automorphism does not act on the image as an "
                  "automorphism of the source (invalid interpretation)");
  }
  GroupHom hom = GroupHom::from_action(
      g.target.aut_group(), aut_n,
      [&](const Perm& sigma) { return transported_action(g, sigma); }, limits);
  RestrictionHom out{hom, hom.image().order() == aut_n.order()};
  return out;
}

std::optional<DefinableBijection> equivalent(const Interpretation& g1,
                                             const Interpretation& g2) {
  if (!(g1.source == g2.source)) throw error("equivalent: source structures differ");
  if (!(g1.target.base() == g2.target.base()))
    throw error("equivalent: target bases differ");
  if (!g1.flags.premorphism_ok || !g2.flags.premorphism_ok)
    throw error("equivalent: both interpretations must be validated");

  // Both sorts must live in one fragment to compare; transplant g2's sort
  // (with its imaginary dependencies) into g1's fragment, reusing any
  // structurally identical sort already present.
  std::size_t s1 = g1.sort_index;
  EqFragment merged = g1.target;
  std::size_t s2 = transplant_sort(merged, g2.target, g2.sort_index);

  int n = g1.class_count();
  if (n != g2.class_count()) return std::nullopt;

  // transported structures on both sides, as sorted tuple sets per relation
  auto transported = [&](const Interpretation& g) {
    std::vector<std::vector<XTuple>> rels;
    for (const auto& r : g.source.relations()) rels.push_back(transported_relation(g, r));
    for (std::size_t s = 0; s < g.source.num_sorts(); ++s) {
      auto [b, e] = g.source.sort_range(s);
      std::vector<XTuple> pred;
      for (Point p = b; p < e; ++p) pred.push_back({g.map[p]});
      std::sort(pred.begin(), pred.end());
      rels.push_back(std::move(pred));
    }
    for (const auto& c : g.source.constants()) rels.push_back({{g.map[c.element]}});
    return rels;
  };
  auto rels1 = transported(g1);
  auto rels2 = transported(g2);
  for (std::size_t r = 0; r < rels1.size(); ++r)
    if (rels1[r].size() != rels2[r].size()) return std::nullopt;

  // generator actions on both class sets
  std::vector<std::vector<int>> act1, act2;
  for (const auto& sigma : merged.aut_group().generators()) {
    std::vector<int> a1(static_cast<std::size_t>(n)), a2(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
      a1[static_cast<std::size_t>(c)] =
          merged.class_of_point(sigma[merged.class_point(s1, c)]).second;
      a2[static_cast<std::size_t>(c)] =
          merged.class_of_point(sigma[merged.class_point(s2, c)]).second;
    }
    act1.push_back(std::move(a1));
    act2.push_back(std::move(a2));
  }

  // backtracking over class bijections: equivariant and structure-respecting
  std::vector<int> h(static_cast<std::size_t>(n), -1), hinv(static_cast<std::size_t>(n), -1);
  std::function<bool(int)> rec = [&](int c) -> bool {
    if (c == n) {
      for (std::size_t r = 0; r < rels1.size(); ++r) {
        std::set<XTuple> want(rels2[r].begin(), rels2[r].end());
        for (const auto& t : rels1[r]) {
          XTuple img(t.size());
          for (std::size_t i = 0; i < t.size(); ++i)
            img[i] = h[static_cast<std::size_t>(t[i])];
          if (!want.count(img)) return false;
        }
      }
      return true;
    }
    if (h[static_cast<std::size_t>(c)] >= 0) return rec(c + 1);
    for (int v = 0; v < n; ++v) {
      if (hinv[static_cast<std::size_t>(v)] >= 0) continue;
      std::vector<std::pair<int, int>> placed;
      std::function<bool(int, int)> place = [&](int x, int y) -> bool {
        if (h[static_cast<std::size_t>(x)] >= 0) return h[static_cast<std::size_t>(x)] == y;
        if (hinv[static_cast<std::size_t>(y)] >= 0) return false;
        h[static_cast<std::size_t>(x)] = y;
        hinv[static_cast<std::size_t>(y)] = x;
        placed.emplace_back(x, y);
        for (std::size_t gi = 0; gi < act1.size(); ++gi)
          if (!place(act1[gi][static_cast<std::size_t>(x)],
                     act2[gi][static_cast<std::size_t>(y)]))
            return false;
        return true;
      };
      bool ok = place(c, v) && rec(c + 1);
      if (ok) return true;
      for (auto it = placed.rbegin(); it != placed.rend(); ++it) {
        h[static_cast<std::size_t>(it->first)] = -1;
        hinv[static_cast<std::size_t>(it->second)] = -1;
      }
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return DefinableBijection{g1.sort_index, g2.sort_index, h};
}

Interpretation invert(const Interpretation& g, const Limits& limits) {
  auto cls = classify(g);
  if (!cls.isomorphism) throw error("invert: interpretation is not an isomorphism");

  const SortedUniverse& n = g.source;
  const SortedUniverse& m = g.target.base();
  auto aut_n = aut(n, g.target.options()).group;

  if (n.size() > limits.max_arity)
    throw bound_error("invert: source size exceeds the arity cap");

  // for each rho in Aut(N), the lex-least sigma in Aut(fragment) matching it
  // on the image classes
  std::map<Perm, Perm> match;
  auto sigmas = g.target.aut_group().elements(limits.max_elements);
  for (const auto& rho : aut_n.elements(limits.max_elements)) {
    bool found = false;
    for (const auto& sigma : sigmas) {
      bool agrees = true;
      for (Point x = 0; x < n.size() && agrees; ++x)
        agrees = sigma[g.image_point(x)] == g.image_point(rho[x]);
      if (agrees) {
        match.emplace(rho, sigma);
        found = true;
        break;
      }
    }
    if (!found)
      throw error("invert: restriction is not surjective (not an embedding)");
  }

  // D = orbit of the canonical source tuple, tagged by target base point;
  // (rho(b), tag m) and (rho'(b), tag m') collapse when the witness values
  // sigma(m) agree
  std::vector<SortRef> signature;
  for (Point x = 0; x < n.size(); ++x)
    signature.push_back(SortRef::base_sort(n.sort_of(x)));
  signature.push_back(SortRef::tag(static_cast<int>(m.size())));

  std::map<XTuple, Point> value; // witness tuple -> target base point
  for (const auto& [rho, sigma] : match) {
    for (Point v = 0; v < m.size(); ++v) {
      XTuple t;
      for (Point x = 0; x < n.size(); ++x) t.push_back(static_cast<int>(rho[x]));
      t.push_back(static_cast<int>(v));
      value[t] = sigma[v];
    }
  }

  QuotientSpec spec;
  spec.name = "inv";
  spec.signature = signature;
  spec.use_blocks = true;
  spec.blocks.resize(m.size());
  for (const auto& [t, v] : value) {
    spec.tuples.push_back(t);
    spec.blocks[v].push_back(t);
  }

  Limits wide = limits;
  wide.max_arity = std::max(wide.max_arity, signature.size());
  EqFragment frag(n, g.target.options());
  frag = frag.with_quotient(spec, wide);
  const auto& q = frag.imaginary(frag.num_imaginaries() - 1);

  Interpretation h;
  h.source = m;
  h.target = frag;
  h.sort_index = frag.num_imaginaries() - 1;
  h.map.assign(m.size(), -1);
  for (Point v = 0; v < m.size(); ++v) {
    // class of (b, tag v): the identity witness h_v(b) = v
    XTuple t;
    for (Point x = 0; x < n.size(); ++x) t.push_back(static_cast<int>(x));
    t.push_back(static_cast<int>(v));
    int c = q.class_of_tuple(t);
    if (c < 0) throw error("invert: canonical witness missing");
    h.map[v] = c;
  }
  return validate_premorphism(std::move(h));
}

Interpretation compose(const Interpretation& f, const Interpretation& g,
                       const Limits& limits) {
  if (!(g.target.base() == f.source))
    throw error("compose: middle structures differ");
  const auto& qg = g.target.imaginary(g.sort_index);
  for (const auto& ref : qg.signature)
    if (ref.kind == SortRef::Kind::imaginary)
      throw error("compose: receiving sort of g must have a base/tag-only signature");

  // transport g's receiving sort through f
  std::vector<SortRef> signature;
  for (const auto& ref : qg.signature)
    signature.push_back(ref.kind == SortRef::Kind::tag
                            ? ref
                            : SortRef::imaginary(f.sort_index));
  auto transport = [&](const XTuple& t) {
    XTuple out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      out[i] = qg.signature[i].kind == SortRef::Kind::tag
                   ? t[i]
                   : f.map[static_cast<std::size_t>(t[i])];
    return out;
  };

  QuotientSpec spec;
  spec.name = "comp" + std::to_string(f.target.num_imaginaries());
  spec.signature = signature;
  spec.use_blocks = true;
  spec.blocks.resize(static_cast<std::size_t>(qg.class_count));
  for (std::size_t i = 0; i < qg.tuples.size(); ++i) {
    XTuple t = transport(qg.tuples[i]);
    spec.tuples.push_back(t);
    spec.blocks[static_cast<std::size_t>(qg.class_of[i])].push_back(t);
  }

  Limits wide = limits;
  wide.max_arity = std::max(wide.max_arity, signature.size());
  EqFragment frag = f.target.with_quotient(spec, wide);
  const auto& q = frag.imaginary(frag.num_imaginaries() - 1);

  Interpretation out;
  out.source = g.source;
  out.target = frag;
  out.sort_index = frag.num_imaginaries() - 1;
  out.map.assign(g.source.size(), -1);
  for (Point x = 0; x < g.source.size(); ++x) {
    const XTuple& rep = qg.representative(g.map[x]);
    out.map[x] = q.class_of_tuple(transport(rep));
  }
  return validate_premorphism(std::move(out));
}

Interpretation identity_interpretation(const SortedUniverse& n) {
  if (n.num_sorts() != 1)
    throw error("identity_interpretation: single-sort sources only");
  EqFragment frag(n);
  QuotientSpec spec;
  spec.name = "id";
  spec.signature = {SortRef::base_sort(0)};
  spec.use_blocks = true;
  for (Point p = 0; p < n.size(); ++p) {
    spec.tuples.push_back({static_cast<int>(p)});
    spec.blocks.push_back({{static_cast<int>(p)}});
  }
  Interpretation g;
  g.source = n;
  g.target = frag.with_quotient(spec);
  g.sort_index = 0;
  g.map.resize(n.size());
  for (Point p = 0; p < n.size(); ++p) g.map[p] = static_cast<int>(p);
  return validate_premorphism(std::move(g));
}

} // namespace gs
