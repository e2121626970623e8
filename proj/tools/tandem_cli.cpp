#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tandem/oracle.hpp"
#include "tandem/report.hpp"

using namespace tandem;

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// "1..20", "3" or "1,4,9"
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = std::stoull(text.substr(0, dots));
    const auto hi = std::stoull(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty seed range " + text);
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  if (out.empty()) throw std::invalid_argument("no seeds given");
  return out;
}

struct GaFlags {
  GaConfig ga;
  bool quiet = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--seed", ga.seed, "Random seed")->capture_default_str();
    cmd->add_option("--population", ga.population, "GA population size")->capture_default_str();
    cmd->add_option("--generations", ga.generations, "GA generation limit")->capture_default_str();
    cmd->add_option("--crossover", ga.crossover_rate, "Crossover rate")->capture_default_str();
    cmd->add_option("--mutation", ga.mutation_rate, "Mutation rate")->capture_default_str();
    cmd->add_option("--tournament", ga.tournament, "Tournament size")->capture_default_str();
    cmd->add_option("--elitism", ga.elitism, "Elite count")->capture_default_str();
    cmd->add_option("--stall", ga.stall_limit, "Stop after this many generations without improvement")
        ->capture_default_str();
    cmd->add_option("--time-slots", ga.scheduler.time_slots, "Launch instants per launch window")
        ->capture_default_str();
    cmd->add_option("--service-time", ga.scheduler.service_time_s, "UAV hover time at a delivery (s)")
        ->capture_default_str();
    cmd->add_option("--dwell", ga.timeline.service_time_s, "Truck dwell at each delivery stop (s)")
        ->capture_default_str();
    cmd->add_flag("--quiet", quiet, "No progress lines on stderr");
  }

  GaConfig config() const {
    GaConfig c = ga;
    c.scheduler.seed = ga.seed;
    c.progress = quiet ? nullptr : &std::cerr;
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truck and UAV last-mile delivery planner"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random instance");
  std::uint64_t gen_seed = 1;
  int n_truck = 4, n_uav = 8, n_fleet = 3;
  std::string map = "grid-city", gen_config, gen_out;
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--truck-deliveries", n_truck)->capture_default_str()->check(CLI::NonNegativeNumber);
  gen->add_option("--uav-deliveries", n_uav)->capture_default_str()->check(CLI::NonNegativeNumber);
  gen->add_option("--uavs", n_fleet)->capture_default_str()->check(CLI::NonNegativeNumber);
  gen->add_option("--map", map, "grid-city or grid-town")->capture_default_str();
  gen->add_option("--config", gen_config, "Generator ranges (JSON)");
  gen->add_option("-o,--output", gen_out, "Output file (default stdout)");

  // solve
  auto* sol = app.add_subcommand("solve", "Plan routes and UAV sorties for an instance");
  std::string sol_in, sol_out, dump_xform;
  std::optional<double> alpha, w1, w2;
  bool unassisted = false;
  GaFlags sol_flags;
  sol->add_option("instance", sol_in)->required();
  sol->add_option("--alpha", alpha, "Energy weight in the objective (time gets 1 - alpha)");
  sol->add_option("--w1", w1, "Dollars per mL of fuel");
  sol->add_option("--w2", w2, "Dollars per kWh");
  sol->add_flag("--unassisted", unassisted, "Truck only");
  sol->add_option("--dump-xform", dump_xform, "Write the transformed graph (JSON)");
  sol->add_option("-o,--output", sol_out, "Output file (default stdout)");
  sol_flags.add(sol);

  // bench
  auto* bench = app.add_subcommand("bench", "Assisted vs unassisted over a seed range");
  std::string seeds = "1..20", csv_out, bench_config;
  int b_truck = 4, b_uav = 8, b_fleet = 3;
  std::string b_map = "grid-city";
  GaFlags bench_flags;
  bench->add_option("--seeds", seeds, "Seed range a..b or list")->capture_default_str();
  bench->add_option("--truck-deliveries", b_truck)->capture_default_str();
  bench->add_option("--uav-deliveries", b_uav)->capture_default_str();
  bench->add_option("--uavs", b_fleet)->capture_default_str();
  bench->add_option("--map", b_map)->capture_default_str();
  bench->add_option("--config", bench_config, "Generator ranges (JSON)");
  bench->add_option("--csv", csv_out, "Write the CSV table here");
  bench_flags.add(bench);
  bench_flags.quiet = true;

  // export
  auto* exp = app.add_subcommand("export", "GeoJSON of a solution");
  std::string exp_inst, exp_sol, exp_out;
  exp->add_option("instance", exp_inst)->required();
  exp->add_option("solution", exp_sol)->required();
  exp->add_option("-o,--output", exp_out, "Output file (default stdout)");

  // verify: exhaustive comparison on small instances
  auto* ver = app.add_subcommand("verify");
  ver->group("");
  std::string ver_in;
  GaFlags ver_flags;
  ver->add_option("instance", ver_in)->required();
  ver_flags.add(ver);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      GeneratorConfig cfg;
      if (!gen_config.empty()) cfg = generator_config_from_json(read_json(gen_config));
      const Instance inst = generate_instance(gen_seed, n_truck, n_uav, n_fleet, map, cfg);
      write_text(gen_out, to_json(inst).dump(2) + "\n");
    } else if (*sol) {
      Instance inst = load_instance(sol_in);
      if (alpha) inst.weights.alpha = *alpha;
      if (w1) inst.weights.w1 = *w1;
      if (w2) inst.weights.w2 = *w2;
      validate(inst);
      const TransformedGraph xf = transform(inst);
      if (!dump_xform.empty()) write_text(dump_xform, to_json(xf).dump(2) + "\n");
      GaConfig ga = sol_flags.config();
      ga.unassisted = unassisted;
      const SolveResult res = solve(inst, xf, ga);
      write_text(sol_out, solution_json(res, inst, xf).dump(2) + "\n");
    } else if (*bench) {
      BenchConfig cfg;
      cfg.seeds = parse_seeds(seeds);
      cfg.truck_deliveries = b_truck;
      cfg.uav_deliveries = b_uav;
      cfg.uavs = b_fleet;
      cfg.map = b_map;
      if (!bench_config.empty()) cfg.generator = generator_config_from_json(read_json(bench_config));
      cfg.ga = bench_flags.config();
      int violations = 0;
      const auto rows = run_bench(cfg, [&](const BenchRow& r) {
        for (const auto& v : r.audit.violations) std::cerr << "seed " << r.seed << ": " << v << '\n';
        violations += static_cast<int>(r.audit.violations.size()) + (r.mass_conserved ? 0 : 1);
        std::cerr << "seed " << r.seed << " done\n";
      });
      write_bench_table(std::cout, rows);
      if (!csv_out.empty()) {
        std::ofstream out(csv_out);
        if (!out) throw std::runtime_error("cannot write " + csv_out);
        write_bench_csv(out, rows);
      }
      if (violations) throw std::runtime_error(std::to_string(violations) + " audit violations");
    } else if (*exp) {
      const Instance inst = load_instance(exp_inst);
      write_text(exp_out, export_geojson(inst, read_json(exp_sol)).dump(2) + "\n");
    } else if (*ver) {
      const Instance inst = load_instance(ver_in);
      const TransformedGraph xf = transform(inst);
      GaConfig ga = ver_flags.config();
      ga.scheduler.time_slots = std::min(ga.scheduler.time_slots, oracle::Budget{}.max_slots);
      const SolveResult res = solve(inst, xf, ga);
      const oracle::RouteOptimum best = oracle::brute_force_route(inst, xf, ga);
      const double gap = (res.evaluation.objective - best.objective) / std::max(1e-12, std::abs(best.objective));
      std::cout << "ga," << res.evaluation.objective << ",oracle," << best.objective << ",gap," << gap << '\n';
      return gap <= 0.01 ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
