#include "gs/perm.hpp"

#include <algorithm>
#include <numeric>

namespace gs {

Perm::Perm(std::size_t degree) : img_(degree) {
  std::iota(img_.begin(), img_.end(), Point{0});
}

Perm::Perm(std::vector<Point> images) : img_(std::move(images)) {
  std::vector<bool> seen(img_.size(), false);
  for (Point v : img_) {
    if (v >= img_.size() || seen[v]) throw error("Perm: image vector is not a bijection");
    seen[v] = true;
  }
}

Perm Perm::from_cycles(std::size_t degree, const std::vector<std::vector<Point>>& cycles) {
  Perm p(degree);
  for (const auto& cyc : cycles) {
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      Point from = cyc[i];
      Point to = cyc[(i + 1) % cyc.size()];
      if (from >= degree || to >= degree) throw error("Perm: cycle point out of range");
      p.img_[from] = to;
    }
  }
  // validate
  return Perm(std::move(p.img_));
}

bool Perm::is_identity() const {
  for (std::size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != i) return false;
  return true;
}

Perm Perm::inverse() const {
  std::vector<Point> inv(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i) inv[img_[i]] = static_cast<Point>(i);
  Perm p;
  p.img_ = std::move(inv);
  return p;
}

Perm Perm::operator*(const Perm& rhs) const {
  if (degree() != rhs.degree()) throw error("Perm: degree mismatch in product");
  Perm p;
  p.img_.resize(degree());
  for (std::size_t i = 0; i < degree(); ++i) p.img_[i] = rhs.img_[img_[i]];
  return p;
}

std::uint64_t Perm::order() const {
  std::vector<bool> seen(degree(), false);
  std::uint64_t ord = 1;
  for (Point start = 0; start < degree(); ++start) {
    if (seen[start]) continue;
    std::uint64_t len = 0;
    Point p = start;
    do {
      seen[p] = true;
      p = img_[p];
      ++len;
    } while (p != start);
    ord = std::lcm(ord, len);
  }
  return ord;
}

Point Perm::power_image(Point p, std::uint64_t k) const {
  for (std::uint64_t i = 0; i < k; ++i) p = img_[p];
  return p;
}

std::string Perm::cycle_string(const std::vector<std::string>& names) const {
  auto name = [&](Point p) {
    return p < names.size() ? names[p] : std::to_string(p);
  };
  std::string out;
  std::vector<bool> seen(degree(), false);
  for (Point start = 0; start < degree(); ++start) {
    if (seen[start] || img_[start] == start) {
      seen[start] = true;
      continue;
    }
    out += '(';
    Point p = start;
    bool first = true;
    do {
      if (!first) out += ' ';
      out += name(p);
      seen[p] = true;
      first = false;
      p = img_[p];
    } while (p != start);
    out += ')';
  }
  if (out.empty()) out = "()";
  return out;
}

bool preserves_blocks(const Perm& p, std::span<const std::pair<Point, Point>> blocks) {
  for (const auto& [begin, end] : blocks)
    for (Point x = begin; x < end; ++x)
      if (p[x] < begin || p[x] >= end) return false;
  return true;
}

} // namespace gs
