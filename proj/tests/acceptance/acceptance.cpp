// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "tandem/oracle.hpp"
#include "tandem/report.hpp"
#include "tandem/rng.hpp"

using namespace tandem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;
std::map<int, std::string> lines;  // printed in criterion order at the end

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) ++failures;
  lines[id] = std::string(ok ? "PASS" : "FAIL") + " criterion " + std::to_string(id) + ": " + what + " (" + detail + ")";
  std::cerr << lines[id] << std::endl;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

UavParams sample_uav(Rng& rng, int id) {
  const GeneratorConfig c;
  auto draw = [&](const Range& r) { return rng.uniform(r.lo, r.hi); };
  UavParams u;
  u.id = id;
  u.empty_mass_kg = draw(c.uav_empty_mass_kg);
  u.k1 = draw(c.uav_k1);
  u.k2 = draw(c.uav_k2);
  u.d = {draw(c.uav_d1), draw(c.uav_d2), draw(c.uav_d3), draw(c.uav_d4), draw(c.uav_d5)};
  u.ascent_mps = draw(c.uav_ascent_mps);
  u.descent_mps = draw(c.uav_descent_mps);
  u.cruise_mps = draw(c.uav_cruise_mps);
  u.attack_angle_rad = draw(c.uav_attack_angle_rad);
  u.battery_j = draw(c.uav_battery_j);
  u.cruise_altitude_m = draw(c.uav_cruise_altitude_m);
  return u;
}

// 1, 7, 8: assisted vs unassisted over seeds 1..20, audited.
void bench_criteria() {
  BenchConfig cfg;
  for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);
  const auto t0 = Clock::now();
  const auto rows = run_bench(cfg, [](const BenchRow& r) {
    std::cerr << "bench seed " << r.seed << ": " << r.assisted << " vs " << r.unassisted << '\n';
  });
  const double elapsed = seconds_since(t0);
  write_bench_table(std::cerr, rows);

  int not_worse = 0, violations = 0, conserved = 0;
  double mean_pct = 0.0, mean_a = 0.0, mean_u = 0.0;
  for (const auto& r : rows) {
    not_worse += r.assisted <= r.unassisted;
    violations += static_cast<int>(r.audit.violations.size());
    for (const auto& v : r.audit.violations) std::cerr << "seed " << r.seed << ": " << v << '\n';
    conserved += r.mass_conserved;
    mean_pct += r.pct_improvement() / rows.size();
    mean_a += r.assisted / rows.size();
    mean_u += r.unassisted / rows.size();
  }
  const int n = static_cast<int>(rows.size());
  report(1, not_worse == n && mean_pct > 0.0 && elapsed < 600.0, "assisted vs unassisted over 20 seeds",
         std::to_string(not_worse) + "/" + std::to_string(n) + " seeds assisted <= unassisted; " +
             fmt("mean assisted %.2f vs unassisted %.2f, mean improvement %.2f%% (reference study: 20.77%%); %.0f s",
                 mean_a, mean_u, mean_pct, elapsed));
  report(7, violations == 0, "constraint audit on every bench solution",
         std::to_string(violations) + " violations over " + std::to_string(n) + " solutions");
  report(8, conserved == n, "start mass minus final mass equals delivered mass",
         std::to_string(conserved) + "/" + std::to_string(n) + " exact");
}

// 2: genetic search vs exhaustive search on 5-delivery instances.
void oracle_route() {
  const auto t0 = Clock::now();
  int within = 0, uav_used = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = generate_instance(seed, 3, 2, 2, "grid-city");
    const TransformedGraph xf = transform(inst);
    GaConfig cfg;
    cfg.seed = seed;
    cfg.scheduler.time_slots = 16;
    const SolveResult ga = solve(inst, xf, cfg);
    const oracle::RouteOptimum best = oracle::brute_force_route(inst, xf, cfg);
    const double gap = (ga.evaluation.objective - best.objective) / best.objective;
    worst = std::max(worst, gap);
    within += gap <= 0.01;
    uav_used += !best.plan.uav_served.empty();
  }
  const double elapsed = seconds_since(t0);
  report(2, within == 20 && elapsed < 120.0, "route search within 1% of exhaustive optimum",
         std::to_string(within) + "/20 within 1%, " + fmt("worst gap %.3g, ", worst) + std::to_string(uav_used) +
             "/20 optima use UAVs, " + fmt("%.1f s", elapsed));
}

// 3: scheduler vs exhaustive schedule. The toy plans are the ones a short
// route search settles on for two-UAV, two-delivery instances; seeds whose
// best plan uses no UAV are skipped.
void oracle_schedule() {
  const auto t0 = Clock::now();
  int plans = 0, equal = 0, two_jobs = 0;
  for (std::uint64_t seed = 1; plans < 20 && seed <= 200; ++seed) {
    const Instance inst = generate_instance(seed, 2, 2, 2, "grid-city");
    const TransformedGraph xf = transform(inst);
    GaConfig ga;
    ga.population = 40;
    ga.generations = 40;
    ga.stall_limit = 15;
    ga.seed = seed;
    ga.scheduler.time_slots = 16;
    const SolveResult found = solve(inst, xf, ga);
    if (found.plan.uav_served.empty()) continue;
    ++plans;
    SchedulerConfig cfg = ga.scheduler;
    const TruckTimeline tl = build_timeline(found.plan, inst, xf);
    const Schedule s = schedule(found.plan, tl, inst, xf, cfg);
    const Schedule ref = oracle::brute_force_schedule(found.plan, tl, inst, xf, cfg);
    equal += s.feasible && ref.feasible && s.J == ref.J;
    two_jobs += ref.job_count() == 2;
  }
  const double elapsed = seconds_since(t0);
  report(3, plans == 20 && equal == 20 && elapsed < 60.0, "scheduler J equals exhaustive J",
         std::to_string(equal) + "/" + std::to_string(plans) + " plans equal (" + std::to_string(two_jobs) +
             " with two jobs), " + fmt("%.1f s", elapsed));
}

// 4: closed-form edge times vs fixed-step integration.
void kinematics() {
  TruckParams t;
  t.accel_input = 2.0;
  t.brake_input = -2.0;
  double worst = 0.0;
  const double worked_both = truck_edge_time(100, 10, true, true, t);
  const double worked_end = truck_edge_time(100, 10, false, true, t);
  for (bool a : {false, true})
    for (bool b : {false, true}) {
      const double sim = oracle::kinematic_integrate({100, 10, a, b, 4000}, t, 1e-5).time_s;
      worst = std::max(worst, std::abs(sim - truck_edge_time(100, 10, a, b, t)));
    }
  const TruckParams def;
  for (bool a : {false, true})
    for (bool b : {false, true}) {
      const double sim = oracle::kinematic_integrate({37, 13, a, b, 4000}, def, 1e-5).time_s;
      worst = std::max(worst, std::abs(sim - truck_edge_time(37, 13, a, b, def)));
    }
  const bool ok = worst <= 1e-4 && std::abs(worked_both - 15.0) <= 1e-12 && std::abs(worked_end - 12.5) <= 1e-12;
  report(4, ok, "edge time closed form vs integrator at dt = 1e-5 s",
         fmt("worst |diff| %.3g s; both-stop %.12g s; stop-at-end %.12g s", worst, worked_both, worked_end));
}

// 5: UAV energy properties.
void energy() {
  Rng rng(2024);
  double worst_sym = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const UavParams u = sample_uav(rng, 1);
    const double m = u.empty_mass_kg + rng.uniform(0, 1.2);
    const Vec3 a{rng.uniform(-500, 500), rng.uniform(-500, 500), 0}, b{rng.uniform(-500, 500), rng.uniform(-500, 500), 0};
    const double d1 = horizontal_distance(a, b), d2 = horizontal_distance(b, a);
    const double ab = uav_leg_energy(UavLeg::Transverse, u, m, d1, 30, 30);
    const double ba = uav_leg_energy(UavLeg::Transverse, u, m, d2, 30, 30);
    const SortieGeometry g{{a.x, a.y, 3}, {rng.uniform(-300, 300), rng.uniform(-300, 300), rng.uniform(0, 8)}, {b.x, b.y, 3}};
    const double fwd = uav_sortie_energy(g, u, 0.0).total_j;
    const double back = uav_sortie_energy({g.recover, g.delivery, g.launch}, u, 0.0).total_j;
    worst_sym = std::max({worst_sym, std::abs(ab - ba) / ab, std::abs(fwd - back) / fwd});
  }
  int monotone = 0;
  for (int i = 0; i < 1000; ++i) {
    const UavParams u = sample_uav(rng, 1);
    const SortieGeometry g{{0, 0, 3}, {rng.uniform(-400, 400), rng.uniform(-400, 400), rng.uniform(0, 8)},
                           {rng.uniform(-400, 400), rng.uniform(-400, 400), 3}};
    bool ok = true;
    double prev = uav_sortie_energy(g, u, 0.0).total_j;
    for (double p = 0.1; p <= 2.0 + 1e-9; p += 0.1) {
      const double e = uav_sortie_energy(g, u, p).total_j;
      ok = ok && e >= prev;
      prev = e;
    }
    monotone += ok;
  }
  UavParams toy;
  toy.empty_mass_kg = 0.5;
  toy.k1 = 0.0;
  toy.k2 = 1.0;
  toy.d = {1.0, 1.0, 0.0, 0.0, 0.0};
  toy.ascent_mps = 2.0;
  const double hover = 3.0 * transverse_power(toy, 1.0, 0.0, 1.0);
  const double ascent = ascend_energy(toy, 1.0, 10.0, 1.0);
  const bool ok = worst_sym <= 1e-12 && monotone == 1000 && hover == 6.0 && ascent == 5.0;
  report(5, ok, "UAV energy properties",
         fmt("symmetry worst rel %.3g; ", worst_sym) + std::to_string(monotone) +
             fmt("/1000 payload-monotone; hover %.15g J; ascent %.15g J", hover, ascent));
}

// 6: R_max against a time-stepped out-and-back flight.
void rmax() {
  Rng rng(6);
  const GeneratorConfig gc;
  const double deck = TruckParams{}.deck_height_m;
  int at = 0, beyond = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const UavParams u = sample_uav(rng, i + 1);
    const double payload = rng.uniform(gc.uav_package_kg.lo, gc.uav_package_kg.hi);
    const double z = rng.uniform(gc.uav_delivery_height_m.lo, gc.uav_delivery_height_m.hi);
    const double r = compute_rmax(u, payload, deck, z);
    auto sim = [&](double dist) {
      const SortieGeometry g{{0, 0, deck}, {dist, 0, z}, {0, 0, deck}};
      return oracle::simulate_sortie_energy(g, u, payload, kStandardGravity, 1e-4);
    };
    const double rel = std::abs(sim(r) - u.battery_j) / u.battery_j;
    worst = std::max(worst, rel);
    at += rel <= 1e-5;
    beyond += sim(1.01 * r) > u.battery_j;
  }
  report(6, at == 100 && beyond == 100, "R_max uses the whole battery",
         std::to_string(at) + "/100 within 1e-5 relative" + fmt(" (worst %.3g), ", worst) + std::to_string(beyond) +
             "/100 exceed the battery at 1.01 R_max");
}

// 9: two solves of the same instance write identical files.
void determinism() {
  const Instance inst = generate_instance(1, 4, 8, 3, "grid-city");
  const auto dir = std::filesystem::temp_directory_path();
  std::string bytes[2];
  for (int run = 0; run < 2; ++run) {
    const TransformedGraph xf = transform(inst);
    const auto path = dir / ("tandem_determinism_" + std::to_string(run) + ".json");
    {
      std::ofstream out(path);
      out << solution_json(solve(inst, xf, GaConfig{}), inst, xf).dump(2) << '\n';
    }
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    bytes[run] = ss.str();
    std::filesystem::remove(path);
  }
  report(9, !bytes[0].empty() && bytes[0] == bytes[1], "identical runs write identical solution files",
         std::to_string(bytes[0].size()) + " bytes each");
}

}  // namespace

int main() {
  try {
    kinematics();
    energy();
    rmax();
    oracle_schedule();
    oracle_route();
    determinism();
    bench_criteria();
  } catch (const std::exception& e) {
    for (const auto& [id, line] : lines) std::cout << line << '\n';
    std::cout << "FAIL acceptance run aborted: " << e.what() << std::endl;
    return 100;
  }
  for (const auto& [id, line] : lines) std::cout << line << '\n';
  return failures;
}
