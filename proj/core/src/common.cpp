#include "gs/common.hpp"

#include <cstdlib>

namespace gs {

Limits Limits::from_env() {
  Limits l;
  if (const char* s = std::getenv("GS_MAX_SIZE")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(s, &end, 10);
    if (end && *end == '\0' && v > 0) {
      l.max_universe = static_cast<std::size_t>(v);
      l.max_arity = std::max(l.max_arity, static_cast<std::size_t>(v));
      l.max_group_order = std::max(l.max_group_order, static_cast<std::uint64_t>(v));
    }
  }
  return l;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

} // namespace gs
