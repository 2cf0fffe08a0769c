#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gs/common.hpp"

namespace gs {

using Point = std::uint32_t;

// A permutation of {0, ..., n-1} stored as its image vector.
// Products compose left to right: (a * b)(x) = b(a(x)).
class Perm {
public:
  Perm() = default;
  explicit Perm(std::size_t degree);            // identity
  explicit Perm(std::vector<Point> images);

  static Perm identity(std::size_t degree) { return Perm(degree); }
  static Perm from_cycles(std::size_t degree, const std::vector<std::vector<Point>>& cycles);

  std::size_t degree() const { return img_.size(); }
  Point operator[](Point p) const { return img_[p]; }
  const std::vector<Point>& images() const { return img_; }

  bool is_identity() const;
  Perm inverse() const;
  Perm operator*(const Perm& rhs) const;        // apply *this, then rhs
  std::uint64_t order() const;

  // Image of p under *this raised to the k-th power (k >= 0).
  Point power_image(Point p, std::uint64_t k) const;

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm& a, const Perm& b) { return a.img_ <=> b.img_; }

  std::string cycle_string(const std::vector<std::string>& names = {}) const;

private:
  std::vector<Point> img_;
};

// True when the permutation maps each half-open block [begin, end) to itself.
bool preserves_blocks(const Perm& p, std::span<const std::pair<Point, Point>> blocks);

} // namespace gs
