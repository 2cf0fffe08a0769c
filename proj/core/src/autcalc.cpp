#include "gs/autcalc.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gs {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

// Shared matching context for aut (a == b) and iso searches.
struct MatchCtx {
  const SortedUniverse& a;
  const SortedUniverse& b;
  bool compatible = true;

  // index[rel][pos][point] -> tuple ids, per side
  std::vector<std::vector<std::vector<std::vector<int>>>> a_at, b_at;

  MatchCtx(const SortedUniverse& a_, const SortedUniverse& b_) : a(a_), b(b_) {
    compatible = precheck();
    if (!compatible) return;
    a_at = build_index(a);
    b_at = build_index(b);
  }

  bool precheck() const {
    if (a.num_sorts() != b.num_sorts() || a.size() != b.size()) return false;
    for (std::size_t s = 0; s < a.num_sorts(); ++s) {
      if (a.sort_name(s) != b.sort_name(s)) return false;
      if (a.sort_range(s) != b.sort_range(s)) return false;
    }
    if (a.relations().size() != b.relations().size()) return false;
    for (std::size_t r = 0; r < a.relations().size(); ++r) {
      const auto& ra = a.relations()[r];
      const auto& rb = b.relations()[r];
      if (ra.name != rb.name || ra.signature != rb.signature ||
          ra.tuples.size() != rb.tuples.size())
        return false;
    }
    if (a.constants().size() != b.constants().size()) return false;
    for (std::size_t c = 0; c < a.constants().size(); ++c) {
      if (a.constants()[c].name != b.constants()[c].name) return false;
      if (a.sort_of(a.constants()[c].element) != b.sort_of(b.constants()[c].element))
        return false;
    }
    return true;
  }

  static std::vector<std::vector<std::vector<std::vector<int>>>> build_index(
      const SortedUniverse& m) {
    std::vector<std::vector<std::vector<std::vector<int>>>> idx(m.relations().size());
    for (std::size_t r = 0; r < m.relations().size(); ++r) {
      const auto& rel = m.relations()[r];
      idx[r].assign(rel.signature.size(), std::vector<std::vector<int>>(m.size()));
      for (std::size_t t = 0; t < rel.tuples.size(); ++t)
        for (std::size_t i = 0; i < rel.signature.size(); ++i)
          idx[r][i][rel.tuples[t][i]].push_back(static_cast<int>(t));
    }
    return idx;
  }

  // Joint iterated refinement.  `pins` forces phi(a_pt) = b_pt singletons.
  // Returns {colors_a, colors_b}; empty on a detected mismatch.
  std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> refine(
      const std::vector<std::pair<Point, Point>>& pins) const {
    std::size_t n = a.size();
    std::vector<std::uint64_t> ca(n), cb(n);
    for (Point p = 0; p < n; ++p) {
      ca[p] = mix(1, a.sort_of(p));
      cb[p] = mix(1, b.sort_of(p));
    }
    for (std::size_t c = 0; c < a.constants().size(); ++c) {
      ca[a.constants()[c].element] = mix(ca[a.constants()[c].element], 100 + c);
      cb[b.constants()[c].element] = mix(cb[b.constants()[c].element], 100 + c);
    }
    for (std::size_t k = 0; k < pins.size(); ++k) {
      ca[pins[k].first] = mix(0xabcd, k);
      cb[pins[k].second] = mix(0xabcd, k);
    }

    auto distinct = [&] {
      std::set<std::uint64_t> s(ca.begin(), ca.end());
      s.insert(cb.begin(), cb.end());
      return s.size();
    };

    std::size_t classes = distinct();
    for (std::size_t round = 0; round < n + 1; ++round) {
      auto pass = [&](const SortedUniverse& m, const std::vector<std::uint64_t>& cols) {
        std::vector<std::vector<std::uint64_t>> contrib(m.size());
        for (std::size_t r = 0; r < m.relations().size(); ++r) {
          const auto& rel = m.relations()[r];
          for (const auto& t : rel.tuples) {
            std::uint64_t ht = mix(0x51ab, r);
            for (Point p : t) ht = mix(ht, cols[p]);
            for (std::size_t i = 0; i < t.size(); ++i)
              contrib[t[i]].push_back(mix(ht, i));
          }
        }
        std::vector<std::uint64_t> next(m.size());
        for (std::size_t p = 0; p < m.size(); ++p) {
          std::sort(contrib[p].begin(), contrib[p].end());
          std::uint64_t h = cols[p];
          for (auto v : contrib[p]) h = mix(h, v);
          next[p] = h;
        }
        return next;
      };
      ca = pass(a, ca);
      cb = pass(b, cb);
      std::size_t now = distinct();
      if (now == classes) break;
      classes = now;
    }

    // class sizes must agree across the two sides
    std::map<std::uint64_t, long> count;
    for (auto v : ca) count[v]++;
    for (auto v : cb) count[v]--;
    for (const auto& [v, c] : count)
      if (c != 0) return {};
    return {ca, cb};
  }
};

// Backtracking search for one full match extending the seed.
class Search {
public:
  Search(const MatchCtx& ctx, std::vector<std::uint64_t> ca, std::vector<std::uint64_t> cb)
      : ctx_(ctx), ca_(std::move(ca)), cb_(std::move(cb)), n_(ctx.a.size()),
        a2b_(n_, -1), b2a_(n_, -1) {}

  std::optional<std::vector<Point>> run(const std::vector<std::pair<Point, Point>>& seed) {
    queue_.clear();
    for (const auto& [x, y] : seed)
      if (!assign(x, y)) return std::nullopt;
    if (!propagate()) return std::nullopt;
    if (!dfs()) return std::nullopt;
    std::vector<Point> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = static_cast<Point>(a2b_[i]);
    return out;
  }

private:
  const MatchCtx& ctx_;
  std::vector<std::uint64_t> ca_, cb_;
  std::size_t n_;
  std::vector<int> a2b_, b2a_;
  std::vector<Point> trail_;
  std::vector<Point> queue_;

  bool assign(Point x, Point y) {
    if (a2b_[x] >= 0) return a2b_[x] == static_cast<int>(y);
    if (b2a_[y] >= 0) return false;
    if (ca_[x] != cb_[y]) return false;
    a2b_[x] = static_cast<int>(y);
    b2a_[y] = static_cast<int>(x);
    trail_.push_back(x);
    queue_.push_back(x);
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      Point x = trail_.back();
      trail_.pop_back();
      b2a_[a2b_[x]] = -1;
      a2b_[x] = -1;
    }
    queue_.clear();
  }

  // Forward check around newly assigned points; forces unique completions.
  bool propagate() {
    while (!queue_.empty()) {
      Point x = queue_.back();
      queue_.pop_back();
      Point y = static_cast<Point>(a2b_[x]);
      for (std::size_t r = 0; r < ctx_.a.relations().size(); ++r) {
        const auto& rela = ctx_.a.relations()[r];
        const auto& relb = ctx_.b.relations()[r];
        for (std::size_t i = 0; i < rela.signature.size(); ++i) {
          for (int tid : ctx_.a_at[r][i][x]) {
            const auto& t = rela.tuples[static_cast<std::size_t>(tid)];
            // candidates: b tuples with y at position i
            int matches = 0;
            const std::vector<Point>* unique_match = nullptr;
            for (int uid : ctx_.b_at[r][i][y]) {
              const auto& u = relb.tuples[static_cast<std::size_t>(uid)];
              bool ok = true;
              for (std::size_t k = 0; k < t.size() && ok; ++k) {
                if (a2b_[t[k]] >= 0)
                  ok = u[k] == static_cast<Point>(a2b_[t[k]]);
                else
                  ok = b2a_[u[k]] < 0 && ca_[t[k]] == cb_[u[k]];
              }
              if (ok) {
                ++matches;
                unique_match = &u;
                if (matches > 1) break;
              }
            }
            if (matches == 0) return false;
            if (matches == 1) {
              for (std::size_t k = 0; k < t.size(); ++k)
                if (a2b_[t[k]] < 0 && !assign(t[k], (*unique_match)[k])) return false;
            }
          }
          // reverse direction: every b tuple through y needs a preimage pattern
          for (int uid : ctx_.b_at[r][i][y]) {
            const auto& u = relb.tuples[static_cast<std::size_t>(uid)];
            bool any = false;
            for (int tid : ctx_.a_at[r][i][x]) {
              const auto& t = rela.tuples[static_cast<std::size_t>(tid)];
              bool ok = true;
              for (std::size_t k = 0; k < t.size() && ok; ++k) {
                if (b2a_[u[k]] >= 0)
                  ok = t[k] == static_cast<Point>(b2a_[u[k]]);
                else
                  ok = a2b_[t[k]] < 0 && ca_[t[k]] == cb_[u[k]];
              }
              if (ok) {
                any = true;
                break;
              }
            }
            if (!any) return false;
          }
        }
      }
    }
    return true;
  }

  // Branch point: fewest candidates, ties by point order.
  bool dfs() {
    int best = -1;
    std::size_t best_count = n_ + 1;
    std::vector<Point> best_cands;
    for (Point x = 0; x < n_; ++x) {
      if (a2b_[x] >= 0) continue;
      std::vector<Point> cands;
      for (Point y = 0; y < n_; ++y)
        if (b2a_[y] < 0 && cb_[y] == ca_[x]) cands.push_back(y);
      if (cands.empty()) return false;
      if (cands.size() < best_count) {
        best = static_cast<int>(x);
        best_count = cands.size();
        best_cands = std::move(cands);
        if (best_count == 1) break;
      }
    }
    if (best < 0) return verify_full();
    for (Point y : best_cands) {
      std::size_t mark = trail_.size();
      if (assign(static_cast<Point>(best), y) && propagate() && dfs()) return true;
      undo_to(mark);
    }
    return false;
  }

  bool verify_full() const {
    for (std::size_t r = 0; r < ctx_.a.relations().size(); ++r) {
      const auto& rela = ctx_.a.relations()[r];
      const auto& relb = ctx_.b.relations()[r];
      for (const auto& t : rela.tuples) {
        std::vector<Point> img(t.size());
        for (std::size_t k = 0; k < t.size(); ++k) img[k] = static_cast<Point>(a2b_[t[k]]);
        if (!std::binary_search(relb.tuples.begin(), relb.tuples.end(), img)) return false;
      }
    }
    for (std::size_t c = 0; c < ctx_.a.constants().size(); ++c)
      if (a2b_[ctx_.a.constants()[c].element] !=
          static_cast<int>(ctx_.b.constants()[c].element))
        return false;
    return true;
  }
};

std::vector<std::pair<Point, Point>> constant_seed(const MatchCtx& ctx) {
  std::vector<std::pair<Point, Point>> seed;
  for (std::size_t c = 0; c < ctx.a.constants().size(); ++c)
    seed.emplace_back(ctx.a.constants()[c].element, ctx.b.constants()[c].element);
  return seed;
}

} // namespace

AutResult aut(const SortedUniverse& m, const AutOptions& opts) {
  if (m.size() > opts.max_universe)
    throw bound_error("aut: universe size " + std::to_string(m.size()) +
                      " exceeds bound " + std::to_string(opts.max_universe));

  std::size_t n = m.size();
  MatchCtx ctx(m, m);
  std::vector<Perm> gens;

  if (n > 0) {
    auto [base_ca, base_cb] = ctx.refine({});
    if (base_ca.empty()) throw error("aut: refinement rejected the identity");

    // bottom-up over the canonical base: level i collects coset
    // representatives for the stabilizer of 0..i-1 moving i
    for (std::size_t i = n; i-- > 0;) {
      // pinned colors refine the base colors, so a level with no base-color
      // twin past i has no candidates at all
      bool twin = false;
      for (Point q = static_cast<Point>(i) + 1; q < n && !twin; ++q)
        twin = base_ca[q] == base_ca[i];
      if (!twin) continue;

      std::vector<std::pair<Point, Point>> pins;
      for (Point p = 0; p < static_cast<Point>(i); ++p) pins.emplace_back(p, p);
      auto [ca, cb] = ctx.refine(pins);
      if (ca.empty()) continue;

      // orbit of i under the generators found so far (they all fix 0..i-1)
      auto orbit = PermGroup::generated(n, gens).orbit_of(static_cast<Point>(i));
      for (Point q = static_cast<Point>(i) + 1; q < n; ++q) {
        if (cb[q] != ca[i]) continue;
        if (std::binary_search(orbit.begin(), orbit.end(), q)) continue;
        auto seed = pins;
        seed.emplace_back(static_cast<Point>(i), q);
        for (auto& cs : constant_seed(ctx)) seed.push_back(cs);
        Search search(ctx, ca, cb);
        if (auto found = search.run(seed)) {
          gens.push_back(Perm(std::move(*found)));
          orbit = PermGroup::generated(n, gens).orbit_of(static_cast<Point>(i));
        }
      }
    }
  }

  AutResult result{PermGroup::generated(n, gens), {}};
  if (opts.certify) {
    for (std::size_t g = 0; g < result.group.generators().size(); ++g) {
      const Perm& p = result.group.generators()[g];
      std::string tag = "gen" + std::to_string(g);
      result.certificate.push_back({tag + " sort-preserving", m.is_sort_preserving(p)});
      result.certificate.push_back({tag + " fixes constants", m.fixes_constants(p)});
      for (const auto& r : m.relations())
        result.certificate.push_back(
            {tag + " preserves " + r.name, m.preserves_relation(p, r)});
    }
    for (const auto& law : result.certificate)
      if (!law.pass) throw error("aut: certificate law failed: " + law.name);
  }
  return result;
}

bool AutResult::verify(const SortedUniverse& m) const {
  for (const auto& p : group.generators()) {
    if (!m.is_sort_preserving(p)) return false;
    if (!m.fixes_constants(p)) return false;
    if (!m.preserves_all_relations(p)) return false;
  }
  return true;
}

SortedUniverse group_to_structure(const PermGroup& g, const Limits& limits) {
  auto elems = g.elements(limits.max_elements);
  std::size_t n = elems.size();
  if (n > limits.max_arity)
    throw bound_error("group_to_structure: group order " + std::to_string(n) +
                      " exceeds the arity cap " + std::to_string(limits.max_arity));

  int width = 1;
  for (std::size_t v = n > 0 ? n - 1 : 0; v >= 10; v /= 10) ++width;
  auto id = [&](std::size_t k) {
    std::string s = std::to_string(k);
    return "g" + std::string(static_cast<std::size_t>(width) - s.size(), '0') + s;
  };

  std::map<Perm, std::size_t> index;
  for (std::size_t k = 0; k < n; ++k) index[elems[k]] = k;

  StructureData d;
  StructureData::Sort sort{"G", {}};
  for (std::size_t k = 0; k < n; ++k) sort.elements.push_back(id(k));
  d.sorts.push_back(sort);

  StructureData::Relation rel;
  rel.name = "translation";
  rel.signature.assign(n, "G");
  for (const auto& h : elems) {
    std::vector<std::string> row;
    for (const auto& e : elems) row.push_back(id(index.at(h * e)));
    rel.tuples.push_back(std::move(row));
  }
  d.relations.push_back(std::move(rel));
  Limits wide = limits;
  wide.max_arity = std::max(wide.max_arity, n);
  return SortedUniverse(d, wide);
}

RegularResult canonical_regular(const SortedUniverse& n, const AutOptions& opts) {
  AutResult a = aut(n, opts);
  Limits limits;
  limits.max_arity = std::max<std::size_t>(limits.max_arity,
                                           static_cast<std::size_t>(a.group.order()));
  RegularResult out{group_to_structure(a.group, limits), {}};
  for (const auto& e : a.group.elements()) out.tuples.push_back(e.images());
  return out;
}

std::optional<std::vector<Point>> iso_structures(const SortedUniverse& a,
                                                 const SortedUniverse& b,
                                                 const AutOptions& opts) {
  if (a.size() > opts.max_universe || b.size() > opts.max_universe)
    throw bound_error("iso_structures: universe size exceeds bound");
  MatchCtx ctx(a, b);
  if (!ctx.compatible) return std::nullopt;
  auto [ca, cb] = ctx.refine({});
  if (ca.empty()) return std::nullopt;
  Search search(ctx, ca, cb);
  return search.run(constant_seed(ctx));
}

} // namespace gs
