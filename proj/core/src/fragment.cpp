#include "gs/fragment.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gs {

int QuotientSort::class_of_tuple(const XTuple& t) const {
  auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
  if (it == tuples.end() || *it != t) return -1;
  return class_of[static_cast<std::size_t>(it - tuples.begin())];
}

const XTuple& QuotientSort::representative(int cls) const {
  for (std::size_t i = 0; i < tuples.size(); ++i)
    if (class_of[i] == cls) return tuples[i];
  throw error("QuotientSort: unknown class");
}

EqFragment::EqFragment(SortedUniverse base, const AutOptions& opts)
    : base_(std::move(base)), opts_(opts), group_(PermGroup::trivial(0)) {
  group_ = aut(base_, opts_).group;
}

std::size_t EqFragment::imaginary_index(const std::string& name) const {
  for (std::size_t i = 0; i < imaginaries_.size(); ++i)
    if (imaginaries_[i].name == name) return i;
  throw error("unknown imaginary '" + name + "'");
}

std::size_t EqFragment::domain_size() const {
  std::size_t n = base_.size();
  for (const auto& q : imaginaries_) n += static_cast<std::size_t>(q.class_count);
  return n;
}

Point EqFragment::class_point(std::size_t imag, int cls) const {
  std::size_t offset = base_.size();
  for (std::size_t i = 0; i < imag; ++i)
    offset += static_cast<std::size_t>(imaginaries_[i].class_count);
  if (cls < 0 || cls >= imaginaries_[imag].class_count) throw error("class index out of range");
  return static_cast<Point>(offset + static_cast<std::size_t>(cls));
}

std::pair<std::size_t, int> EqFragment::class_of_point(Point p) const {
  if (is_base_point(p)) throw error("class_of_point: base point");
  std::size_t offset = base_.size();
  for (std::size_t i = 0; i < imaginaries_.size(); ++i) {
    std::size_t count = static_cast<std::size_t>(imaginaries_[i].class_count);
    if (p < offset + count) return {i, static_cast<int>(p - offset)};
    offset += count;
  }
  throw error("class_of_point: point out of range");
}

std::string EqFragment::point_name(Point p) const {
  if (is_base_point(p)) return base_.qualified_name(p);
  auto [i, cls] = class_of_point(p);
  return imaginaries_[i].name + "#" + std::to_string(cls);
}

XTuple EqFragment::apply(const Perm& extended, const std::vector<SortRef>& signature,
                         const XTuple& t) const {
  XTuple out(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const SortRef& ref = signature[k];
    switch (ref.kind) {
      case SortRef::Kind::base:
        out[k] = static_cast<int>(extended[static_cast<Point>(t[k])]);
        break;
      case SortRef::Kind::imaginary: {
        Point cp = class_point(ref.index, t[k]);
        out[k] = class_of_point(extended[cp]).second;
        break;
      }
      case SortRef::Kind::tag:
        out[k] = t[k];
        break;
    }
  }
  return out;
}

Perm EqFragment::extend_over(const Perm& p, const QuotientSort& q) const {
  // p acts on the current domain; append its action on q's classes
  std::vector<Point> img(p.images());
  img.resize(p.degree() + static_cast<std::size_t>(q.class_count));
  for (int c = 0; c < q.class_count; ++c) {
    XTuple image = apply(p, q.signature, q.representative(c));
    int ic = q.class_of_tuple(image);
    if (ic < 0) throw error("extend_over: class image left the base set");
    img[p.degree() + static_cast<std::size_t>(c)] =
        static_cast<Point>(p.degree() + static_cast<std::size_t>(ic));
  }
  return Perm(std::move(img));
}

namespace {

void validate_spec_shape(const EqFragment& frag, const QuotientSpec& spec,
                         const Limits& limits, std::size_t num_imag) {
  if (spec.name.empty()) throw error("quotient: empty name");
  if (spec.signature.empty()) throw error("quotient '" + spec.name + "': empty signature");
  if (spec.signature.size() > limits.max_arity)
    throw bound_error("quotient '" + spec.name + "': arity " +
                      std::to_string(spec.signature.size()) + " exceeds cap " +
                      std::to_string(limits.max_arity));
  for (const auto& ref : spec.signature) {
    switch (ref.kind) {
      case SortRef::Kind::base:
        if (ref.index >= frag.base().num_sorts())
          throw error("quotient '" + spec.name + "': unknown base sort");
        break;
      case SortRef::Kind::imaginary:
        if (ref.index >= num_imag)
          throw error("quotient '" + spec.name + "': forward imaginary reference");
        break;
      case SortRef::Kind::tag:
        if (ref.tag_count <= 0) throw error("quotient '" + spec.name + "': empty tag set");
        break;
    }
  }
}

void validate_tuple(const EqFragment& frag, const QuotientSpec& spec, const XTuple& t) {
  if (t.size() != spec.signature.size())
    throw error("quotient '" + spec.name + "': tuple arity mismatch");
  for (std::size_t k = 0; k < t.size(); ++k) {
    const SortRef& ref = spec.signature[k];
    int v = t[k];
    bool ok = v >= 0;
    if (ok) switch (ref.kind) {
        case SortRef::Kind::base: {
          auto [b, e] = frag.base().sort_range(ref.index);
          ok = v >= static_cast<int>(b) && v < static_cast<int>(e);
          break;
        }
        case SortRef::Kind::imaginary:
          ok = v < frag.imaginary(ref.index).class_count;
          break;
        case SortRef::Kind::tag:
          ok = v < ref.tag_count;
          break;
      }
    if (!ok) throw error("quotient '" + spec.name + "': tuple value out of range");
  }
}

} // namespace

EqFragment EqFragment::with_quotient(const QuotientSpec& spec, const Limits& limits) const {
  validate_spec_shape(*this, spec, limits, imaginaries_.size());
  for (const auto& q : imaginaries_)
    if (q.name == spec.name) throw error("quotient '" + spec.name + "': duplicate name");

  QuotientSort q;
  q.name = spec.name;
  q.signature = spec.signature;

  std::set<XTuple> dset;
  for (const auto& t : spec.tuples) {
    validate_tuple(*this, spec, t);
    dset.insert(t);
  }
  q.tuples.assign(dset.begin(), dset.end());
  if (q.tuples.empty()) throw error("quotient '" + spec.name + "': empty base set");

  auto index_of = [&](const XTuple& t) {
    auto it = std::lower_bound(q.tuples.begin(), q.tuples.end(), t);
    if (it == q.tuples.end() || *it != t)
      throw error("quotient '" + spec.name + "': equivalence mentions a tuple outside D");
    return static_cast<std::size_t>(it - q.tuples.begin());
  };

  std::vector<int> cls(q.tuples.size(), -1);
  if (spec.use_blocks) {
    for (std::size_t b = 0; b < spec.blocks.size(); ++b)
      for (const auto& t : spec.blocks[b]) {
        std::size_t i = index_of(t);
        if (cls[i] >= 0 && cls[i] != static_cast<int>(b))
          throw error("quotient '" + spec.name + "': blocks are not disjoint");
        cls[i] = static_cast<int>(b);
      }
    for (std::size_t i = 0; i < cls.size(); ++i)
      if (cls[i] < 0) throw error("quotient '" + spec.name + "': blocks do not cover D");
  } else {
    // explicit pairs: must literally be an equivalence relation on D
    std::set<std::pair<std::size_t, std::size_t>> e;
    for (const auto& [x, y] : spec.pairs) e.emplace(index_of(x), index_of(y));
    for (std::size_t i = 0; i < q.tuples.size(); ++i)
      if (!e.count({i, i}))
        throw error("quotient '" + spec.name +
                    "': relation is not an equivalence (not reflexive)");
    for (const auto& [x, y] : e)
      if (!e.count({y, x}))
        throw error("quotient '" + spec.name +
                    "': relation is not an equivalence (not symmetric)");
    for (const auto& [x, y] : e)
      for (std::size_t z = 0; z < q.tuples.size(); ++z)
        if (e.count({y, z}) && !e.count({x, z}))
          throw error("quotient '" + spec.name +
                      "': relation is not an equivalence (not transitive)");
    int next = 0;
    for (std::size_t i = 0; i < q.tuples.size(); ++i) {
      if (cls[i] >= 0) continue;
      cls[i] = next;
      for (std::size_t j = i + 1; j < q.tuples.size(); ++j)
        if (e.count({i, j})) cls[j] = next;
      ++next;
    }
  }

  // canonical class numbering: classes ordered by least member tuple
  {
    std::map<int, std::size_t> least;
    for (std::size_t i = 0; i < cls.size(); ++i)
      if (!least.count(cls[i])) least[cls[i]] = i; // tuples sorted, first hit is least
    std::vector<std::pair<std::size_t, int>> order;
    for (const auto& [old_cls, idx] : least) order.emplace_back(idx, old_cls);
    std::sort(order.begin(), order.end());
    std::map<int, int> renum;
    for (std::size_t k = 0; k < order.size(); ++k) renum[order[k].second] = static_cast<int>(k);
    for (auto& c : cls) c = renum.at(c);
    q.class_count = static_cast<int>(order.size());
  }
  q.class_of = cls;

  // invariance of D and of E under the current automorphism group
  for (const auto& g : group_.generators()) {
    std::vector<int> mapped(static_cast<std::size_t>(q.class_count), -1);
    for (std::size_t i = 0; i < q.tuples.size(); ++i) {
      XTuple image = apply(g, q.signature, q.tuples[i]);
      auto it = std::lower_bound(q.tuples.begin(), q.tuples.end(), image);
      if (it == q.tuples.end() || *it != image)
        throw error("quotient '" + spec.name + "': base set D is not Aut-invariant");
      int ic = q.class_of[static_cast<std::size_t>(it - q.tuples.begin())];
      int& slot = mapped[static_cast<std::size_t>(q.class_of[i])];
      if (slot < 0)
        slot = ic;
      else if (slot != ic)
        throw error("quotient '" + spec.name + "': equivalence E is not Aut-invariant");
    }
  }

  EqFragment out = *this;
  std::vector<Perm> extended;
  for (const auto& g : group_.generators()) extended.push_back(extend_over(g, q));
  out.imaginaries_.push_back(std::move(q));
  out.group_ = PermGroup::generated(out.domain_size(), extended);
  if (out.group_.order() != group_.order())
    throw error("quotient '" + spec.name + "': extension changed the group order");
  return out;
}

EqFragment EqFragment::with_named_points(std::vector<Point> points) const {
  EqFragment out = *this;
  for (Point p : points) {
    if (p >= domain_size()) throw error("with_named_points: point out of range");
    out.named_.push_back(p);
  }
  std::sort(out.named_.begin(), out.named_.end());
  out.named_.erase(std::unique(out.named_.begin(), out.named_.end()), out.named_.end());
  out.group_ = group_.pointwise_stabilizer(out.named_);
  return out;
}

std::vector<Point> EqFragment::dcl(std::span<const Point> over) const {
  PermGroup stab = group_.pointwise_stabilizer(over);
  std::vector<Point> fixed;
  for (Point p = 0; p < domain_size(); ++p) {
    bool all = true;
    for (const auto& g : stab.generators())
      if (g[p] != p) {
        all = false;
        break;
      }
    if (all) fixed.push_back(p);
  }
  return fixed;
}

bool is_definable(const SortedUniverse& m, const std::vector<std::vector<Point>>& candidate,
                  std::span<const Point> over, const AutOptions& opts) {
  if (!candidate.empty()) {
    std::vector<std::size_t> sig;
    for (Point p : candidate[0]) sig.push_back(m.sort_of(p));
    for (const auto& t : candidate) {
      if (t.size() != sig.size()) throw error("is_definable: ragged candidate tuples");
      for (std::size_t k = 0; k < t.size(); ++k)
        if (m.sort_of(t[k]) != sig[k])
          throw error("is_definable: candidate signature is malformed");
    }
  }
  PermGroup stab = aut(m, opts).group.pointwise_stabilizer(over);
  std::set<std::vector<Point>> cand(candidate.begin(), candidate.end());
  for (const auto& g : stab.generators())
    for (const auto& t : cand) {
      std::vector<Point> img(t.size());
      for (std::size_t k = 0; k < t.size(); ++k) img[k] = g[t[k]];
      if (!cand.count(img)) return false;
    }
  return true;
}

} // namespace gs
