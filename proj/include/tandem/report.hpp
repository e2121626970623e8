#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tandem/audit.hpp"
#include "tandem/route_ga.hpp"

namespace tandem {

/// Solution file contents. Holds no timings so identical runs produce
/// identical bytes.
json solution_json(const SolveResult& result, const Instance& inst, const TransformedGraph& xf);

/// GeoJSON FeatureCollection (planar metre coordinates): the embedded truck
/// path, one LineString per sortie and one Point per package node.
/// Throws std::invalid_argument when a solution id does not resolve.
json export_geojson(const Instance& inst, const json& solution);

struct BenchConfig {
  std::vector<std::uint64_t> seeds;
  int truck_deliveries = 4;
  int uav_deliveries = 8;
  int uavs = 3;
  std::string map = "grid-city";
  GeneratorConfig generator;
  GaConfig ga;
  XformConfig xform;
};

struct BenchRow {
  std::uint64_t seed = 0;
  double assisted = 0.0;
  double unassisted = 0.0;
  double improvement() const { return unassisted - assisted; }
  double pct_improvement() const { return unassisted > 0.0 ? 100.0 * improvement() / unassisted : 0.0; }
  AuditResult audit;
  bool mass_conserved = true;
};

/// Generates and solves one instance per seed. `on_row` fires after each seed.
std::vector<BenchRow> run_bench(const BenchConfig& config,
                                const std::function<void(const BenchRow&)>& on_row = nullptr);

/// CSV with header seed,assisted,unassisted,improvement,pct_improvement and a
/// trailing mean row.
void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);
void write_bench_table(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace tandem
