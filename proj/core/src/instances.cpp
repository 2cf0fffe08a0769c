#include "gs/instances.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gs {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// polynomial arithmetic over GF(p), little-endian coefficient vectors
std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& m, int p) {
  while (a.size() >= m.size()) {
    int lead = a.back();
    if (lead != 0) {
      std::size_t shift = a.size() - m.size();
      for (std::size_t i = 0; i < m.size(); ++i) {
        a[shift + i] = (a[shift + i] - lead * m[i]) % p;
        if (a[shift + i] < 0) a[shift + i] += p;
      }
    }
    a.pop_back();
  }
  return a;
}

std::vector<int> poly_mul(const std::vector<int>& a, const std::vector<int>& b, int p) {
  std::vector<int> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  return out;
}

bool is_irreducible(const std::vector<int>& m, int p) {
  // no roots and no monic factor of degree <= deg/2, by exhaustive division
  int deg = static_cast<int>(m.size()) - 1;
  for (int d = 1; d <= deg / 2; ++d) {
    // enumerate monic candidates of degree d
    std::size_t combos = 1;
    for (int i = 0; i < d; ++i) combos *= static_cast<std::size_t>(p);
    for (std::size_t code = 0; code < combos; ++code) {
      std::vector<int> cand(static_cast<std::size_t>(d) + 1, 0);
      std::size_t c = code;
      for (int i = 0; i < d; ++i) {
        cand[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::size_t>(p));
        c /= static_cast<std::size_t>(p);
      }
      cand.back() = 1;
      auto rem = poly_mod(std::vector<int>(m), cand, p);
      bool zero = true;
      for (int v : rem)
        if (v != 0) zero = false;
      if (zero) return false;
    }
  }
  return true;
}

} // namespace

FiniteField::FiniteField(int p, int m, const Limits& limits, std::size_t modulus_rank)
    : p_(p), m_(m) {
  if (!is_prime(p)) throw error("FiniteField: characteristic must be prime");
  if (m < 1) throw error("FiniteField: degree must be positive");
  size_ = 1;
  for (int i = 0; i < m; ++i) {
    size_ *= static_cast<std::size_t>(p);
    if (size_ > 729) throw bound_error("FiniteField: p^m exceeds 729");
  }
  (void)limits;
  // monic irreducibles in lexicographic order (low coefficients first);
  // modulus_rank wraps around the available count
  std::vector<std::vector<int>> irreducibles;
  std::size_t combos = 1;
  for (int i = 0; i < m; ++i) combos *= static_cast<std::size_t>(p);
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<int> cand(static_cast<std::size_t>(m) + 1, 0);
    std::size_t c = code;
    for (int i = 0; i < m; ++i) {
      cand[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::size_t>(p));
      c /= static_cast<std::size_t>(p);
    }
    cand.back() = 1;
    if (m == 1 || is_irreducible(cand, p)) {
      irreducibles.push_back(cand);
      if (irreducibles.size() > modulus_rank && modulus_rank == 0) break;
    }
  }
  if (irreducibles.empty()) throw error("FiniteField: no irreducible modulus found");
  modulus_ = irreducibles[modulus_rank % irreducibles.size()];
}

FiniteField::Elem FiniteField::zero() const { return Elem(static_cast<std::size_t>(m_), 0); }

FiniteField::Elem FiniteField::one() const {
  Elem e = zero();
  e[0] = 1;
  return e;
}

FiniteField::Elem FiniteField::from_index(std::size_t k) const {
  Elem e(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) {
    e[static_cast<std::size_t>(i)] = static_cast<int>(k % static_cast<std::size_t>(p_));
    k /= static_cast<std::size_t>(p_);
  }
  return e;
}

std::size_t FiniteField::index(const Elem& a) const {
  std::size_t k = 0;
  for (int i = m_; i-- > 0;)
    k = k * static_cast<std::size_t>(p_) + static_cast<std::size_t>(a[static_cast<std::size_t>(i)]);
  return k;
}

FiniteField::Elem FiniteField::add(const Elem& a, const Elem& b) const {
  Elem out(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i)
    out[static_cast<std::size_t>(i)] =
        (a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)]) % p_;
  return out;
}

FiniteField::Elem FiniteField::neg(const Elem& a) const {
  Elem out(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i)
    out[static_cast<std::size_t>(i)] = (p_ - a[static_cast<std::size_t>(i)]) % p_;
  return out;
}

FiniteField::Elem FiniteField::mul(const Elem& a, const Elem& b) const {
  auto prod = poly_mod(poly_mul(a, b, p_), modulus_, p_);
  prod.resize(static_cast<std::size_t>(m_), 0);
  return prod;
}

FiniteField::Elem FiniteField::pow(const Elem& a, std::uint64_t e) const {
  Elem base = a, out = one();
  while (e) {
    if (e & 1) out = mul(out, base);
    base = mul(base, base);
    e >>= 1;
  }
  return out;
}

FiniteField::Elem FiniteField::frobenius(const Elem& a) const {
  return pow(a, static_cast<std::uint64_t>(p_));
}

int FiniteField::element_degree(const Elem& a) const {
  Elem x = frobenius(a);
  int d = 1;
  while (!(x == a)) {
    x = frobenius(x);
    ++d;
  }
  return d;
}

std::string FiniteField::element_id(const Elem& a) const {
  // high coefficient first so lexicographic id order equals index order
  std::string s;
  for (int i = m_; i-- > 0;) s += static_cast<char>('0' + a[static_cast<std::size_t>(i)]);
  return s;
}

FieldStructure galois_orbit_structure(int p, int m, const Limits& limits,
                                      std::size_t modulus_rank) {
  FiniteField f(p, m, limits, modulus_rank);
  StructureData d;
  StructureData::Sort sort{"F", {}};
  for (std::size_t k = 0; k < f.size(); ++k) sort.elements.push_back(f.element_id(f.from_index(k)));
  d.sorts.push_back(sort);

  StructureData::Relation add{"add", {"F", "F", "F"}, {}};
  StructureData::Relation mul{"mul", {"F", "F", "F"}, {}};
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j) {
      auto a = f.from_index(i), b = f.from_index(j);
      add.tuples.push_back(
          {f.element_id(a), f.element_id(b), f.element_id(f.add(a, b))});
      mul.tuples.push_back(
          {f.element_id(a), f.element_id(b), f.element_id(f.mul(a, b))});
    }
  d.relations.push_back(std::move(add));
  d.relations.push_back(std::move(mul));

  for (int c = 0; c < p; ++c) {
    auto e = f.zero();
    e[0] = c;
    d.constants.push_back({"k" + std::to_string(c), "F", f.element_id(e)});
  }

  FieldStructure out{SortedUniverse(d, limits), f, {}};
  std::vector<bool> seen(f.size(), false);
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (seen[k]) continue;
    std::vector<std::size_t> orbit;
    auto x = f.from_index(k);
    do {
      std::size_t idx = f.index(x);
      if (seen[idx]) break;
      seen[idx] = true;
      orbit.push_back(idx);
      x = f.frobenius(x);
    } while (true);
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

Tower cyclic_tower(int p, int depth, const Limits& limits) {
  if (!is_prime(p)) throw error("cyclic_tower: p must be prime");
  if (depth < 1 || depth > 8) throw bound_error("cyclic_tower: depth must be in 1..8");
  std::vector<std::uint64_t> orders;
  std::uint64_t n = 1;
  for (int i = 0; i < depth; ++i) {
    n *= static_cast<std::uint64_t>(p);
    orders.push_back(n);
  }
  Limits wide = limits;
  wide.max_elements = std::max<std::size_t>(wide.max_elements, static_cast<std::size_t>(n) * 4);
  GroupChain chain = cyclic_chain(orders, wide);
  std::vector<CoverSpec> covers;
  for (int i = 0; i < depth; ++i)
    covers.push_back(
        {"lvl" + std::to_string(i + 1), static_cast<std::size_t>(i + 1), {"a0"}, {}, {}});
  return Tower::build(std::move(chain), std::move(covers), {}, {}, wide);
}

Tower mixed_tower(bool twisted, const Limits& limits) {
  GroupChain chain = cyclic_chain({2, 4}, limits);
  std::vector<CoverSpec> covers;
  covers.push_back({"mu1", 1, {"b0", "b1"}, {}, {}});
  covers.push_back({"mu2", 2, {"a0", "a1"}, {}, {}});
  // combined zeros domain: x0, b0, b1, a0, a1
  Perm swap = Perm::from_cycles(5, {{1, 2}, {3, 4}});
  DistinguishedSpec dist;
  if (twisted) dist.onestep[{2, 1}] = 1; // flip the (mu2,a1) -> mu1 entry
  return Tower::build(std::move(chain), std::move(covers), {swap}, dist, limits);
}

DeckFieldCorrespondence deck_field_correspondence(int p, int m, const Tower& tower,
                                                  std::size_t level, const Limits& limits) {
  if (level >= tower.num_levels()) throw error("deck_field_correspondence: unknown level");
  const auto& elems = tower.elements(level);
  // the deck group must be cyclic of order m, the Galois group of GF(p^m)/GF(p)
  PermGroup deck = tower.deck_group(level);
  bool cyclic = false;
  for (const auto& e : deck.elements(limits.max_elements))
    if (e.order() == deck.order()) cyclic = true;
  if (deck.order() != static_cast<std::uint64_t>(m) || !cyclic)
    throw error("deck_field_correspondence: deck group is not cyclic of order m");

  FiniteField f(p, m, limits);
  // lexicographically least generator of degree m
  FiniteField::Elem gen;
  for (std::size_t k = 0; k < f.size(); ++k) {
    auto cand = f.from_index(k);
    if (f.element_degree(cand) == m) {
      gen = cand;
      break;
    }
  }
  if (gen.empty()) throw error("deck_field_correspondence: no degree-m generator");

  DeckFieldCorrespondence out;
  auto x = gen;
  for (int i = 0; i < m; ++i) {
    out.generator_orbit.push_back(f.index(x));
    x = f.frobenius(x);
  }

  // cyclic generator of the deck: least element of full order, matched with
  // Frobenius; the torsor map g^k * p0 -> Frob^k(gen)
  Perm c(elems[0].degree());
  for (const auto& e : elems)
    if (e.order() == static_cast<std::uint64_t>(m)) {
      c = e;
      break;
    }
  std::map<Perm, int> expo;
  Perm acc(elems[0].degree());
  for (int k = 0; k < m; ++k) {
    expo[acc] = k;
    acc = acc * c;
  }
  out.torsor_to_orbit.resize(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i)
    out.torsor_to_orbit[i] =
        out.generator_orbit[static_cast<std::size_t>(expo.at(elems[i]))];

  // equivariance: multiplying by c on the torsor side applies Frobenius on
  // the field side
  out.equivariant = true;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    Perm moved = c * elems[i]; // c * g : one more Frobenius step
    std::size_t lhs = out.torsor_to_orbit[static_cast<std::size_t>(
        std::lower_bound(elems.begin(), elems.end(), moved) - elems.begin())];
    std::size_t rhs = f.index(f.frobenius(f.from_index(out.torsor_to_orbit[i])));
    if (lhs != rhs) out.equivariant = false;
  }
  if (!out.equivariant)
    throw error("deck_field_correspondence: equivariance check failed");
  return out;
}

namespace {

// regular permutation group from an abstract multiplication table
PermGroup regular_from_table(const std::vector<std::vector<int>>& mult) {
  std::size_t n = mult.size();
  std::vector<Perm> gens;
  for (std::size_t h = 0; h < n; ++h) {
    std::vector<Point> img(n);
    for (std::size_t x = 0; x < n; ++x) img[x] = static_cast<Point>(mult[h][x]);
    gens.push_back(Perm(std::move(img)));
  }
  return PermGroup::generated(n, gens);
}

std::vector<std::vector<int>> cyclic_table(int n) {
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n),
                                  std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
  return t;
}

std::vector<std::vector<int>> dihedral_table(int n) {
  // elements r^i (0..n-1) and s r^i (n..2n-1); s r^i * s r^j = r^{j-i}
  int N = 2 * n;
  std::vector<std::vector<int>> t(static_cast<std::size_t>(N),
                                  std::vector<int>(static_cast<std::size_t>(N)));
  auto idx = [&](bool flip, int rot) { return (flip ? n : 0) + ((rot % n + n) % n); };
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      bool fa = a >= n, fb = b >= n;
      int ra = a % n, rb = b % n;
      // (s^fa r^ra)(s^fb r^rb) = s^(fa+fb) r^(rb + (fb ? -ra : ra))
      bool f = fa != fb;
      int r = rb + (fb ? -ra : ra);
      t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = idx(f, r);
    }
  return t;
}

std::vector<std::vector<int>> quaternion_table() {
  // 1, -1, i, -i, j, -j, k, -k
  auto mulq = [](int a, int b) {
    // encode unit quaternions as (sign, axis) with axis 0=1,1=i,2=j,3=k
    int sa = a % 2 ? -1 : 1, xa = a / 2;
    int sb = b % 2 ? -1 : 1, xb = b / 2;
    static const int axis[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    int x = axis[xa][xb];
    int s = sa * sb * sign[xa][xb];
    return 2 * x + (s < 0 ? 1 : 0);
  };
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = mulq(a, b);
  return t;
}

PermGroup regularize(const PermGroup& g, const Limits& limits) {
  auto elems = g.elements(limits.max_elements);
  std::map<Perm, int> pos;
  for (std::size_t i = 0; i < elems.size(); ++i) pos[elems[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> table(elems.size(), std::vector<int>(elems.size()));
  for (std::size_t a = 0; a < elems.size(); ++a)
    for (std::size_t b = 0; b < elems.size(); ++b)
      table[a][b] = pos.at(elems[a] * elems[b]);
  return regular_from_table(table);
}

} // namespace

std::vector<CatalogEntry> group_catalog() {
  Limits limits;
  std::vector<CatalogEntry> out;
  for (int n = 1; n <= 16; ++n)
    out.push_back({"C" + std::to_string(n), regular_from_table(cyclic_table(n))});
  for (int n = 3; n <= 8; ++n)
    out.push_back({"D" + std::to_string(n), regular_from_table(dihedral_table(n))});
  auto s3 = PermGroup::generated(3, {Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{0, 1, 2}})});
  out.push_back({"S3", regularize(s3, limits)});
  auto s4 = PermGroup::generated(4, {Perm::from_cycles(4, {{0, 1}}), Perm::from_cycles(4, {{0, 1, 2, 3}})});
  out.push_back({"S4", regularize(s4, limits)});
  auto a4 = PermGroup::generated(4, {Perm::from_cycles(4, {{0, 1, 2}}), Perm::from_cycles(4, {{1, 2, 3}})});
  out.push_back({"A4", regularize(a4, limits)});
  out.push_back({"Q8", regular_from_table(quaternion_table())});
  auto v4 = PermGroup::generated(4, {Perm::from_cycles(4, {{0, 1}, {2, 3}}),
                                     Perm::from_cycles(4, {{0, 2}, {1, 3}})});
  out.push_back({"V4", regularize(v4, limits)});
  std::sort(out.begin(), out.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
  return out;
}

SortedUniverse random_structure(Rng& rng, std::size_t max_elems, std::uint64_t max_aut,
                                const AutOptions& opts) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::size_t n = 2 + rng.below(max_elems - 1);
    StructureData d;
    StructureData::Sort sort{"V", {}};
    for (std::size_t i = 0; i < n; ++i) sort.elements.push_back("v" + std::to_string(i));
    std::sort(sort.elements.begin(), sort.elements.end());
    d.sorts.push_back(sort);
    // mix shapes so nontrivial symmetry shows up often: free points, cycles,
    // symmetrized random relations, plain random relations
    std::uint64_t shape = rng.below(4);
    if (shape == 1 && n >= 3) {
      StructureData::Relation e{"R0", {"V", "V"}, {}};
      bool directed = rng.below(2) == 0;
      for (std::size_t i = 0; i < n; ++i) {
        auto a = "v" + std::to_string(i);
        auto b = "v" + std::to_string((i + 1) % n);
        e.tuples.push_back({a, b});
        if (!directed) e.tuples.push_back({b, a});
      }
      d.relations.push_back(std::move(e));
    } else if (shape != 0) {
      std::size_t rels = 1 + rng.below(3);
      for (std::size_t r = 0; r < rels; ++r) {
        StructureData::Relation rel;
        rel.name = "R" + std::to_string(r);
        std::size_t arity = 1 + rng.below(3);
        rel.signature.assign(arity, "V");
        std::size_t total = 1;
        for (std::size_t i = 0; i < arity; ++i) total *= n;
        std::size_t count = rng.below(total / 2 + 2);
        std::set<std::vector<std::string>> tuples;
        for (std::size_t k = 0; k < count; ++k) {
          std::vector<std::string> t;
          for (std::size_t i = 0; i < arity; ++i)
            t.push_back(d.sorts[0].elements[rng.below(n)]);
          tuples.insert(std::move(t));
        }
        if (shape == 3 && n >= 2) {
          // close the tuple set under a random transposition
          std::size_t x = rng.below(n), y = rng.below(n);
          auto swap_name = [&](const std::string& s) {
            if (s == d.sorts[0].elements[x]) return d.sorts[0].elements[y];
            if (s == d.sorts[0].elements[y]) return d.sorts[0].elements[x];
            return s;
          };
          std::set<std::vector<std::string>> closed = tuples;
          for (const auto& t : tuples) {
            std::vector<std::string> img;
            for (const auto& s : t) img.push_back(swap_name(s));
            closed.insert(img);
          }
          tuples = closed;
        }
        rel.tuples.assign(tuples.begin(), tuples.end());
        d.relations.push_back(std::move(rel));
      }
    }
    SortedUniverse m(d);
    auto a = aut(m, opts);
    if (a.group.order() <= max_aut) return m;
  }
  // deterministic fallback: a rigid chain
  StructureData d;
  d.sorts.push_back({"V", {"v0", "v1", "v2"}});
  d.relations.push_back({"R0", {"V", "V"}, {{"v0", "v1"}, {"v1", "v2"}}});
  return SortedUniverse(d);
}

} // namespace gs
