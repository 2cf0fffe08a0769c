// Acceptance runner: one line per criterion, nonzero exit on any failure.
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "gs/acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 1;
  std::string selector = "all";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
      seed = std::strtoull(argv[++i], nullptr, 10);
    else
      selector = argv[i];
  }
  auto results = gs::run_acceptance(selector, seed);
  bool all = true;
  double total = 0;
  for (const auto& r : results) {
    std::printf("[%s] criterion %d: %s (%.2fs, budget %.0fs)\n", r.pass ? "PASS" : "FAIL",
                r.id, r.name.c_str(), r.seconds, r.budget_seconds);
    for (const auto& n : r.notes) std::printf("       - %s\n", n.c_str());
    all = all && r.pass;
    total += r.seconds;
  }
  std::printf("%s: %zu criteria, %.2fs total\n", all ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              results.size(), total);
  return all ? 0 : 1;
}
