#pragma once

#include <span>
#include <string>
#include <vector>

#include "gs/autcalc.hpp"
#include "gs/structure.hpp"

namespace gs {

// One slot of a quotient-sort signature: a base sort, an earlier imaginary,
// or a finite tag set (tags are fixed by every automorphism; they play the
// role of 0-definable witness indices).
struct SortRef {
  enum class Kind { base, imaginary, tag };
  Kind kind = Kind::base;
  std::size_t index = 0; // base sort index or imaginary index
  int tag_count = 0;     // for tag slots

  static SortRef base_sort(std::size_t i) { return {Kind::base, i, 0}; }
  static SortRef imaginary(std::size_t i) { return {Kind::imaginary, i, 0}; }
  static SortRef tag(int count) { return {Kind::tag, 0, count}; }

  friend bool operator==(const SortRef&, const SortRef&) = default;
};

// Slot values: base slot -> global point, imaginary slot -> class index,
// tag slot -> tag value.
using XTuple = std::vector<int>;

struct QuotientSpec {
  std::string name;
  std::vector<SortRef> signature;
  std::vector<XTuple> tuples; // the definable set D
  // The equivalence E, either as explicit pairs (checked to be an
  // equivalence on D) or as partition blocks.
  std::vector<std::pair<XTuple, XTuple>> pairs;
  std::vector<std::vector<XTuple>> blocks;
  bool use_blocks = false;
};

struct QuotientSort {
  std::string name;
  std::vector<SortRef> signature;
  std::vector<XTuple> tuples;  // sorted
  std::vector<int> class_of;   // per tuple
  int class_count = 0;

  int class_of_tuple(const XTuple& t) const;
  // least member tuple of a class (the canonical representative)
  const XTuple& representative(int cls) const;
};

// A finite fragment of M^Eq: the base structure, finitely many quotient
// sorts, and named points.  The automorphism group lives on the extended
// domain (base points, then one point per class of each imaginary) and is
// recomputed on every extension, so fragments behave as immutable values.
class EqFragment {
public:
  EqFragment() = default; // empty fragment; real ones come from the ctor below
  explicit EqFragment(SortedUniverse base, const AutOptions& opts = {});

  const SortedUniverse& base() const { return base_; }
  const AutOptions& options() const { return opts_; }

  std::size_t num_imaginaries() const { return imaginaries_.size(); }
  const QuotientSort& imaginary(std::size_t i) const { return imaginaries_[i]; }
  std::size_t imaginary_index(const std::string& name) const;

  std::size_t domain_size() const;
  bool is_base_point(Point p) const { return p < base_.size(); }
  Point class_point(std::size_t imag, int cls) const;
  // inverse of class_point; throws on base points
  std::pair<std::size_t, int> class_of_point(Point p) const;
  std::string point_name(Point p) const;

  const std::vector<Point>& named_points() const { return named_; }

  // Aut(base / named points) acting on the extended domain.  Quotients added
  // after points are named are only required to be invariant under this
  // (already restricted) group, matching definability over the named set.
  const PermGroup& aut_group() const { return group_; }

  EqFragment with_quotient(const QuotientSpec& spec, const Limits& limits = {}) const;
  EqFragment with_named_points(std::vector<Point> points) const;

  // Everything fixed by the pointwise stabilizer of `over` (named points are
  // already pinned); sorted extended points.
  std::vector<Point> dcl(std::span<const Point> over) const;

  // Image of an extended tuple under an extended permutation.
  XTuple apply(const Perm& extended, const std::vector<SortRef>& signature,
               const XTuple& t) const;

private:
  SortedUniverse base_;
  AutOptions opts_;
  std::vector<QuotientSort> imaginaries_;
  std::vector<Point> named_;
  PermGroup group_;

  Perm extend_over(const Perm& p, const QuotientSort& q) const;
};

// Eq. "definable iff invariant": candidate is setwise fixed by every
// automorphism fixing `over` pointwise.  Throws on malformed candidates.
bool is_definable(const SortedUniverse& m, const std::vector<std::vector<Point>>& candidate,
                  std::span<const Point> over, const AutOptions& opts = {});

} // namespace gs
