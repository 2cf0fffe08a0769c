#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gs/perm.hpp"

namespace gs {

// Raw, name-based description of a finite multi-sorted relational structure.
// This is the file model; SortedUniverse below is the validated, canonical,
// indexed form every operation works on.
struct StructureData {
  struct Sort {
    std::string name;
    std::vector<std::string> elements;
  };
  struct Relation {
    std::string name;
    std::vector<std::string> signature; // sort names
    std::vector<std::vector<std::string>> tuples;
  };
  struct Constant {
    std::string name;
    std::string sort;
    std::string element;
  };

  std::vector<Sort> sorts;
  std::vector<Relation> relations;
  std::vector<Constant> constants;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
};

ValidationReport validate(const StructureData& data, const Limits& limits = {});

class SortedUniverse {
public:
  struct Relation {
    std::string name;
    std::vector<std::size_t> signature;     // sort indices
    std::vector<std::vector<Point>> tuples; // global points, sorted
    friend bool operator==(const Relation&, const Relation&) = default;
  };
  struct Constant {
    std::string name;
    Point element;
    friend bool operator==(const Constant&, const Constant&) = default;
  };

  SortedUniverse() = default;
  // Canonicalizes and validates; throws parse_error listing the violations.
  explicit SortedUniverse(const StructureData& data, const Limits& limits = {});

  std::size_t size() const { return names_.size(); }
  std::size_t num_sorts() const { return sort_names_.size(); }

  const std::string& sort_name(std::size_t s) const { return sort_names_[s]; }
  std::pair<Point, Point> sort_range(std::size_t s) const {
    return {offsets_[s], offsets_[s + 1]};
  }
  std::size_t sort_of(Point p) const;
  const std::string& element_name(Point p) const { return names_[p]; }
  std::string qualified_name(Point p) const;

  // Index lookups; throw on unknown names.
  std::size_t sort_index(const std::string& name) const;
  Point element(const std::string& sort, const std::string& elem) const;

  const std::vector<Relation>& relations() const { return relations_; }
  const std::vector<Constant>& constants() const { return constants_; }

  bool is_sort_preserving(const Perm& p) const;
  bool preserves_relation(const Perm& p, const Relation& r) const;
  bool preserves_all_relations(const Perm& p) const;
  bool fixes_constants(const Perm& p) const;

  // All points in canonical order (the enumeration tuple).
  std::vector<Point> canonical_tuple() const;

  StructureData data() const; // canonical name-based form

  // Renames every element through the permutation, keeping element ids
  // attached to their new positions (used by the relabeling laws).
  SortedUniverse relabeled(const Perm& p) const;

  friend bool operator==(const SortedUniverse&, const SortedUniverse&) = default;

private:
  std::vector<std::string> sort_names_;
  std::vector<Point> offsets_; // size num_sorts+1
  std::vector<std::string> names_;
  std::vector<Relation> relations_;
  std::vector<Constant> constants_;
};

} // namespace gs
