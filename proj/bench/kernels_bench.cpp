#include <benchmark/benchmark.h>

#include "tandem/rng.hpp"
#include "tandem/route_ga.hpp"

using namespace tandem;

namespace {

const Instance& bench_instance() {
  static const Instance inst = generate_instance(7, 4, 8, 3, "grid-city");
  return inst;
}

const TransformedGraph& bench_xform() {
  static const TransformedGraph xf = transform(bench_instance());
  return xf;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_MetricClosure(benchmark::State& state) {
  const AugmentedGraph aug = insert_rendezvous_nodes(bench_instance());
  for (auto _ : state) benchmark::DoNotOptimize(metric_closure(aug, exec_of(state)));
}

void BM_EnumerateSorties(benchmark::State& state) {
  const AugmentedGraph aug = insert_rendezvous_nodes(bench_instance());
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_sorties(aug, bench_instance(), exec_of(state)));
}

void BM_OptionTable(benchmark::State& state) {
  const Instance& inst = bench_instance();
  const TransformedGraph& xf = bench_xform();
  Chromosome ch{inst.ids_of(NodeClass::TruckDelivery), {}};
  for (NodeId d : inst.ids_of(NodeClass::UavDelivery)) {
    ch.order.push_back(d);
    ch.by_uav.push_back(xf.sorties(d).empty() ? 0 : 1);
  }
  const RoutePlan plan = decode(ch, inst, xf);
  const TruckTimeline tl = build_timeline(plan, inst, xf);
  SchedulerConfig cfg;
  const auto jobs = candidate_jobs(plan, tl, inst, xf, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(option_table(jobs, tl, inst, cfg, exec_of(state)));
}

void BM_PopulationBounds(benchmark::State& state) {
  const Instance& inst = bench_instance();
  const TransformedGraph& xf = bench_xform();
  std::vector<Chromosome> pop;
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Chromosome ch{inst.ids_of(NodeClass::TruckDelivery), {}};
    for (NodeId d : inst.ids_of(NodeClass::UavDelivery)) {
      ch.order.push_back(d);
      ch.by_uav.push_back(!xf.sorties(d).empty() && rng.chance(0.5));
    }
    for (std::size_t k = ch.order.size(); k > 1; --k) std::swap(ch.order[k - 1], ch.order[rng.index(k)]);
    pop.push_back(std::move(ch));
  }
  for (auto _ : state) benchmark::DoNotOptimize(population_lower_bounds(pop, inst, xf, {}, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_MetricClosure)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateSorties)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptionTable)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PopulationBounds)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
