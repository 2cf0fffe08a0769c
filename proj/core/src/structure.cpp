#include "gs/structure.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gs {

ValidationReport validate(const StructureData& data, const Limits& limits) {
  ValidationReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };

  std::map<std::string, std::set<std::string>> sorts;
  for (const auto& s : data.sorts) {
    if (sorts.count(s.name)) fail("duplicate sort '" + s.name + "'");
    auto& elems = sorts[s.name];
    for (const auto& e : s.elements) {
      if (e.empty()) fail("empty element id in sort '" + s.name + "'");
      if (!elems.insert(e).second)
        fail("duplicate element '" + e + "' in sort '" + s.name + "'");
    }
    if (s.elements.empty()) rep.warnings.push_back("sort '" + s.name + "' is empty");
  }
  if (data.sorts.empty()) rep.warnings.push_back("structure has no sorts");

  std::set<std::string> rel_names;
  for (const auto& r : data.relations) {
    if (!rel_names.insert(r.name).second) fail("duplicate relation '" + r.name + "'");
    if (r.signature.empty()) fail("relation '" + r.name + "' has empty signature");
    if (r.signature.size() > limits.max_arity)
      fail("relation '" + r.name + "' arity " + std::to_string(r.signature.size()) +
           " exceeds cap " + std::to_string(limits.max_arity));
    for (const auto& sn : r.signature)
      if (!sorts.count(sn))
        fail("relation '" + r.name + "' references unknown sort '" + sn + "'");
    for (const auto& t : r.tuples) {
      if (t.size() != r.signature.size()) {
        fail("relation '" + r.name + "' tuple has wrong arity");
        continue;
      }
      for (std::size_t i = 0; i < t.size(); ++i) {
        auto it = sorts.find(r.signature[i]);
        if (it != sorts.end() && !it->second.count(t[i]))
          fail("relation '" + r.name + "' tuple references missing element '" + t[i] +
               "' of sort '" + r.signature[i] + "'");
      }
    }
  }

  std::set<std::string> const_names;
  for (const auto& c : data.constants) {
    if (!const_names.insert(c.name).second) fail("duplicate constant '" + c.name + "'");
    auto it = sorts.find(c.sort);
    if (it == sorts.end())
      fail("constant '" + c.name + "' references unknown sort '" + c.sort + "'");
    else if (!it->second.count(c.element))
      fail("constant '" + c.name + "' does not resolve to an element");
  }
  return rep;
}

SortedUniverse::SortedUniverse(const StructureData& data, const Limits& limits) {
  ValidationReport rep = validate(data, limits);
  if (!rep.ok) {
    std::string msg = "invalid structure:";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw parse_error(msg);
  }

  std::vector<StructureData::Sort> sorts = data.sorts;
  std::sort(sorts.begin(), sorts.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  offsets_.push_back(0);
  for (auto& s : sorts) {
    std::sort(s.elements.begin(), s.elements.end());
    sort_names_.push_back(s.name);
    for (auto& e : s.elements) names_.push_back(e);
    offsets_.push_back(static_cast<Point>(names_.size()));
  }

  std::vector<StructureData::Relation> rels = data.relations;
  std::sort(rels.begin(), rels.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  for (const auto& r : rels) {
    Relation rel;
    rel.name = r.name;
    for (const auto& sn : r.signature) rel.signature.push_back(sort_index(sn));
    std::set<std::vector<Point>> tuple_set;
    for (const auto& t : r.tuples) {
      std::vector<Point> pt;
      for (std::size_t i = 0; i < t.size(); ++i)
        pt.push_back(element(r.signature[i], t[i]));
      tuple_set.insert(std::move(pt));
    }
    rel.tuples.assign(tuple_set.begin(), tuple_set.end());
    relations_.push_back(std::move(rel));
  }

  std::vector<StructureData::Constant> consts = data.constants;
  std::sort(consts.begin(), consts.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  for (const auto& c : consts)
    constants_.push_back({c.name, element(c.sort, c.element)});
}

std::size_t SortedUniverse::sort_of(Point p) const {
  for (std::size_t s = 0; s < sort_names_.size(); ++s)
    if (p >= offsets_[s] && p < offsets_[s + 1]) return s;
  throw error("sort_of: point out of range");
}

std::string SortedUniverse::qualified_name(Point p) const {
  return sort_names_[sort_of(p)] + "." + names_[p];
}

std::size_t SortedUniverse::sort_index(const std::string& name) const {
  auto it = std::lower_bound(sort_names_.begin(), sort_names_.end(), name);
  if (it == sort_names_.end() || *it != name) throw error("unknown sort '" + name + "'");
  return static_cast<std::size_t>(it - sort_names_.begin());
}

Point SortedUniverse::element(const std::string& sort, const std::string& elem) const {
  std::size_t s = sort_index(sort);
  auto begin = names_.begin() + offsets_[s];
  auto end = names_.begin() + offsets_[s + 1];
  auto it = std::lower_bound(begin, end, elem);
  if (it == end || *it != elem)
    throw error("unknown element '" + elem + "' of sort '" + sort + "'");
  return static_cast<Point>(it - names_.begin());
}

bool SortedUniverse::is_sort_preserving(const Perm& p) const {
  if (p.degree() != size()) return false;
  for (std::size_t s = 0; s < num_sorts(); ++s) {
    auto [b, e] = sort_range(s);
    for (Point x = b; x < e; ++x)
      if (p[x] < b || p[x] >= e) return false;
  }
  return true;
}

bool SortedUniverse::preserves_relation(const Perm& p, const Relation& r) const {
  for (const auto& t : r.tuples) {
    std::vector<Point> img(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) img[i] = p[t[i]];
    if (!std::binary_search(r.tuples.begin(), r.tuples.end(), img)) return false;
  }
  return true;
}

bool SortedUniverse::preserves_all_relations(const Perm& p) const {
  for (const auto& r : relations_)
    if (!preserves_relation(p, r)) return false;
  return true;
}

bool SortedUniverse::fixes_constants(const Perm& p) const {
  for (const auto& c : constants_)
    if (p[c.element] != c.element) return false;
  return true;
}

std::vector<Point> SortedUniverse::canonical_tuple() const {
  std::vector<Point> t(size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<Point>(i);
  return t;
}

StructureData SortedUniverse::data() const {
  StructureData d;
  for (std::size_t s = 0; s < num_sorts(); ++s) {
    StructureData::Sort sort{sort_names_[s], {}};
    auto [b, e] = sort_range(s);
    for (Point x = b; x < e; ++x) sort.elements.push_back(names_[x]);
    d.sorts.push_back(std::move(sort));
  }
  for (const auto& r : relations_) {
    StructureData::Relation rel;
    rel.name = r.name;
    for (std::size_t s : r.signature) rel.signature.push_back(sort_names_[s]);
    for (const auto& t : r.tuples) {
      std::vector<std::string> names;
      for (Point p : t) names.push_back(names_[p]);
      rel.tuples.push_back(std::move(names));
    }
    d.relations.push_back(std::move(rel));
  }
  for (const auto& c : constants_)
    d.constants.push_back({c.name, sort_names_[sort_of(c.element)], names_[c.element]});
  return d;
}

SortedUniverse SortedUniverse::relabeled(const Perm& p) const {
  // Pushes relation and constant contents through p while keeping the
  // element ids in place, so Aut(relabeled) = p * Aut * p^-1.
  if (!is_sort_preserving(p)) throw error("relabeled: permutation is not sort-preserving");
  StructureData out = data();
  for (auto& r : out.relations)
    for (auto& t : r.tuples)
      for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = names_[p[element(r.signature[i], t[i])]];
  for (auto& c : out.constants) c.element = names_[p[element(c.sort, c.element)]];
  return SortedUniverse(out);
}

} // namespace gs
