#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tandem/oracle.hpp"

using namespace tandem;
using namespace tandem::testing;

TEST_CASE("integrator converges to the free-flow time") {
  const auto r = oracle::kinematic_integrate({100, 10, false, false, 4000}, TruckParams{}, 1e-3);
  CHECK(r.time_s == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(r.distance_m == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("both-stop integration lands on 15 s at coarse and fine steps") {
  TruckParams t;
  t.accel_input = 2.0;
  t.brake_input = -2.0;
  const double coarse = std::abs(oracle::kinematic_integrate({100, 10, true, true, 4000}, t, 1e-2).time_s - 15.0);
  const double fine = std::abs(oracle::kinematic_integrate({100, 10, true, true, 4000}, t, 1e-4).time_s - 15.0);
  CHECK(coarse <= 1e-4);
  CHECK(fine <= 1e-4);
}

TEST_CASE("single truck delivery has a unique route") {
  Instance inst = empty_line(2);
  add_delivery(inst, 10, NodeClass::TruckDelivery, 2, 20, 3.0);
  const TransformedGraph xf = transform(inst);
  const auto best = oracle::brute_force_route(inst, xf, GaConfig{});
  CHECK(best.plan.route == std::vector<NodeId>{1, 10, 1});
  CHECK(best.objective > 0.0);
}

TEST_CASE("nothing to deliver costs nothing") {
  const Instance inst = empty_line(2);
  const TransformedGraph xf = transform(inst);
  const auto best = oracle::brute_force_route(inst, xf, GaConfig{});
  CHECK(best.objective == 0.0);
  CHECK(best.plan.route.front() == kDepotId);
  CHECK(best.plan.route.back() == kDepotId);
  CHECK(best.plan.route.size() <= 2);
}

TEST_CASE("oversized problems are refused") {
  const Instance inst = generate_instance(1, 4, 8, 3, "grid-city");
  const TransformedGraph xf = transform(inst);
  CHECK_THROWS_AS(oracle::brute_force_route(inst, xf, GaConfig{}), std::length_error);
}

TEST_CASE("genetic search matches exhaustive search on tiny instances") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Instance inst = generate_instance(seed, 2, 2, 2, "grid-town");
    const TransformedGraph xf = transform(inst);
    GaConfig cfg;
    cfg.population = 40;
    cfg.generations = 60;
    cfg.stall_limit = 30;
    cfg.seed = seed;
    cfg.scheduler.time_slots = 8;
    const auto best = oracle::brute_force_route(inst, xf, cfg);
    const SolveResult ga = solve(inst, xf, cfg);
    CHECK(ga.evaluation.objective >= best.objective - 1e-9 * best.objective);
    CHECK(ga.evaluation.objective <= 1.01 * best.objective);
  }
}
