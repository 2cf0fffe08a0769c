#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gs {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::vector<std::string> notes;
};

// Selector: "all" or one of functor, reconstruction, galois, sections,
// tower, pi1, sharp, fields.
std::vector<CriterionResult> run_acceptance(const std::string& selector,
                                            std::uint64_t seed);
std::vector<std::string> acceptance_selectors();

} // namespace gs
