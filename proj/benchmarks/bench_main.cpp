#include <benchmark/benchmark.h>

#include "gs/galois.hpp"
#include "gs/instances.hpp"

using namespace gs;

namespace {

void BM_SchreierSims(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Perm> gens{Perm::from_cycles(n, {{0, 1}}),
                         Perm::from_cycles(n, [&] {
                           std::vector<Point> cyc(n);
                           for (std::size_t i = 0; i < n; ++i) cyc[i] = static_cast<Point>(i);
                           return std::vector<std::vector<Point>>{cyc};
                         }())};
  for (auto _ : state) {
    auto g = PermGroup::generated(n, gens);
    benchmark::DoNotOptimize(g.order());
  }
}
BENCHMARK(BM_SchreierSims)->Arg(6)->Arg(8)->Arg(10);

void BM_AutRegularStructure(benchmark::State& state) {
  auto cat = group_catalog();
  PermGroup g = PermGroup::trivial(1);
  for (const auto& e : cat)
    if (e.name == "C" + std::to_string(state.range(0))) g = e.group;
  Limits wide;
  wide.max_arity = 16;
  SortedUniverse m = group_to_structure(g, wide);
  AutOptions opts;
  opts.max_universe = m.size();
  for (auto _ : state) {
    auto a = aut(m, opts);
    benchmark::DoNotOptimize(a.group.order());
  }
}
BENCHMARK(BM_AutRegularStructure)->Arg(8)->Arg(12)->Arg(16);

void BM_AutFieldStructure(benchmark::State& state) {
  auto fs = galois_orbit_structure(3, static_cast<int>(state.range(0)));
  AutOptions opts;
  opts.max_universe = fs.structure.size();
  for (auto _ : state) {
    auto a = aut(fs.structure, opts);
    benchmark::DoNotOptimize(a.group.order());
  }
}
BENCHMARK(BM_AutFieldStructure)->Arg(2)->Arg(3);

void BM_SubgroupLattice(benchmark::State& state) {
  auto cat = group_catalog();
  PermGroup g = PermGroup::trivial(1);
  for (const auto& e : cat)
    if (e.name == "D" + std::to_string(state.range(0))) g = e.group;
  for (auto _ : state) {
    auto subs = all_subgroups(g, g.order());
    benchmark::DoNotOptimize(subs.size());
  }
}
BENCHMARK(BM_SubgroupLattice)->Arg(4)->Arg(6);

void BM_TowerLimit(benchmark::State& state) {
  auto t = cyclic_tower(2, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto lim = t.limit_group();
    benchmark::DoNotOptimize(lim.gamma.order());
  }
}
BENCHMARK(BM_TowerLimit)->Arg(3)->Arg(5)->Arg(6);

void BM_Pi1(benchmark::State& state) {
  auto t = cyclic_tower(2, static_cast<int>(state.range(0)));
  auto fs = t.fiber_structure();
  for (auto _ : state) {
    auto pi1 = t.pi1_et(fs);
    benchmark::DoNotOptimize(pi1.order());
  }
}
BENCHMARK(BM_Pi1)->Arg(3)->Arg(5);

void BM_CosetImaginary(benchmark::State& state) {
  StructureData d;
  d.sorts.push_back({"V", {}});
  for (int i = 0; i < state.range(0); ++i)
    d.sorts[0].elements.push_back("p" + std::to_string(i));
  SortedUniverse m(d);
  auto g = aut(m).group;
  auto subs = all_subgroups(g, g.order());
  for (auto _ : state) {
    for (const auto& h : subs) {
      auto ci = coset_imaginary(m, h);
      benchmark::DoNotOptimize(ci.anchor);
    }
  }
}
BENCHMARK(BM_CosetImaginary)->Arg(3)->Arg(4);

} // namespace

BENCHMARK_MAIN();
