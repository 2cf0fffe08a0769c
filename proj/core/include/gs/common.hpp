#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gs {

// Base error for precondition and law violations (CLI exit status 1).
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files or command lines (CLI exit status 2).
class parse_error : public error {
public:
  explicit parse_error(const std::string& what) : error(what) {}
};

// A configured size cap was exceeded.
class bound_error : public error {
public:
  explicit bound_error(const std::string& what) : error(what) {}
};

// Size caps for the search-heavy operations.  GS_MAX_SIZE overrides
// max_universe; the others have explicit CLI flags.
struct Limits {
  std::size_t max_universe = 24;     // aut() backtracking bound
  std::uint64_t max_group_order = 48; // subgroup enumeration bound
  std::size_t max_arity = 12;        // stored relation arity bound
  std::size_t max_elements = 20000;  // explicit group element enumeration

  static Limits from_env();
};

// Deterministic 64-bit generator (splitmix64).  Distributions in <random>
// are not byte-stable across standard libraries, so all seeded test data
// uses this directly.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish value in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
  std::uint64_t state_;
};

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

} // namespace gs
