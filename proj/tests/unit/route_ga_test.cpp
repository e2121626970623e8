#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "tandem/report.hpp"
#include "tandem/route_ga.hpp"

using namespace tandem;
using namespace tandem::testing;

namespace {

// Depot with three arms: truck deliveries off the east and west ends and a
// UAV delivery near the southern dead end, out of range of every other street.
Instance three_arms(double d_offset = 1000.0) {
  Instance inst;
  inst.nodes = {node(1, NodeClass::Depot, 0, 0), node(2, NodeClass::Street, 400, 0),
                node(3, NodeClass::Street, 0, -1200), node(4, NodeClass::Street, -700, 0)};
  inst.edges = {edge(1, 2, 400), edge(1, 3, 1200), edge(1, 4, 700)};
  add_delivery(inst, 10, NodeClass::TruckDelivery, 2, 20, 4.0);
  add_delivery(inst, 11, NodeClass::TruckDelivery, 4, 20, 6.0);
  inst.nodes.push_back(node(12, NodeClass::UavDelivery, 50, -d_offset, 0.5));
  inst.edges.push_back(edge(3, 12, std::hypot(50, 1200 - d_offset)));
  inst.uavs.push_back(roomy_uav(1, 30000.0));
  return inst;
}

double closure_length(const std::vector<NodeId>& route, const TransformedGraph& xf) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < route.size(); ++i) total += xf.distance(route[i], route[i + 1]);
  return total;
}

GaConfig small_ga(std::uint64_t seed = 1) {
  GaConfig c;
  c.population = 30;
  c.generations = 40;
  c.stall_limit = 15;
  c.seed = seed;
  c.scheduler.time_slots = 16;
  return c;
}

}  // namespace

TEST_CASE("all deliveries on the truck") {
  const Instance inst = three_arms();
  const TransformedGraph xf = transform(inst);
  const RoutePlan plan = decode({{10, 12, 11}, {0}}, inst, xf);
  CHECK(plan.route == std::vector<NodeId>{1, 10, 12, 11, 1});
  CHECK(plan.uav_served.empty());
  CHECK(plan.feasible);
}

TEST_CASE("repair inserts the only rendezvous at its cheapest position") {
  const Instance inst = three_arms();
  const TransformedGraph xf = transform(inst);
  REQUIRE(xf.sorties(12).size() == 1);
  const NodeId a = xf.sorties(12)[0].launch;
  for (const auto& order : {std::vector<NodeId>{10, 11, 12}, std::vector<NodeId>{11, 12, 10}}) {
    const RoutePlan plan = decode({order, {1}}, inst, xf);
    REQUIRE(plan.feasible);
    CHECK(plan.uav_served == std::vector<NodeId>{12});
    REQUIRE(std::count(plan.route.begin(), plan.route.end(), a) == 1);

    std::vector<NodeId> base{1};
    for (NodeId id : order)
      if (id != 12) base.push_back(id);
    base.push_back(1);
    double best = INFINITY;
    for (std::size_t p = 1; p < base.size(); ++p) {
      auto r = base;
      r.insert(r.begin() + p, a);
      best = std::min(best, closure_length(r, xf));
    }
    CHECK(closure_length(plan.route, xf) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("flagged delivery without sorties is infeasible and penalised") {
  Instance inst = three_arms(5000.0);
  inst.nodes.back().position.y = -5000;
  const TransformedGraph xf = transform(inst);
  REQUIRE(xf.sorties(12).empty());
  const RoutePlan plan = decode({{10, 11, 12}, {1}}, inst, xf);
  CHECK_FALSE(plan.feasible);
  BoundedEvaluator ev(inst, xf, small_ga(), 500.0);
  const Evaluation e = ev.evaluate(plan);
  CHECK_FALSE(e.feasible);
  CHECK(e.objective == doctest::Approx(e.lower_bound + 500.0));
}

TEST_CASE("lower bound equals the objective without UAV work and bounds it otherwise") {
  const Instance inst = generate_instance(2, 2, 3, 2, "grid-town");
  const TransformedGraph xf = transform(inst);
  BoundedEvaluator ev(inst, xf, small_ga(), 1e6);
  Rng rng(4);
  std::vector<NodeId> order = inst.ids_of(NodeClass::TruckDelivery);
  for (NodeId d : inst.ids_of(NodeClass::UavDelivery)) order.push_back(d);
  for (int i = 0; i < 25; ++i) {
    for (std::size_t k = order.size() - 1; k > 0; --k) std::swap(order[k], order[rng.index(k + 1)]);
    Chromosome ch{order, {}};
    for (int k = 0; k < 3; ++k) ch.by_uav.push_back(rng.chance(0.5));
    const RoutePlan plan = decode(ch, inst, xf);
    const Evaluation e = ev.evaluate(plan);
    REQUIRE(e.exact);
    if (plan.uav_served.empty()) CHECK(e.objective == e.lower_bound);
    CHECK(e.lower_bound <= e.objective);
  }
}

TEST_CASE("deferred plans are scheduled on replay") {
  const Instance inst = generate_instance(2, 2, 3, 2, "grid-town");
  const TransformedGraph xf = transform(inst);
  std::vector<NodeId> order = inst.ids_of(NodeClass::TruckDelivery);
  for (NodeId d : inst.ids_of(NodeClass::UavDelivery)) order.push_back(d);
  const RoutePlan plan = decode({order, {1, 1, 1}}, inst, xf);
  REQUIRE(plan.feasible);
  REQUIRE(!plan.uav_served.empty());

  BoundedEvaluator ev(inst, xf, small_ga(), 1e6);
  ev.set_threshold(0.0);
  const Evaluation deferred = ev.evaluate(plan);
  CHECK_FALSE(deferred.exact);
  CHECK(deferred.objective == deferred.lower_bound);
  CHECK(ev.archived() == 1);
  CHECK(ev.schedule_calls() == 0);
  CHECK(ev.replay().empty());

  ev.set_threshold(INFINITY);
  const auto done = ev.replay();
  REQUIRE(done.size() == 1);
  CHECK(done[0].second.exact);
  CHECK(done[0].second.objective >= deferred.lower_bound);
  CHECK(ev.archived() == 0);

  BoundedEvaluator direct(inst, xf, small_ga(), 1e6);
  direct.set_threshold(INFINITY);
  CHECK(direct.evaluate(plan).objective == done[0].second.objective);
}

TEST_CASE("without reachable sorties the assisted answer is the truck-only one") {
  Instance inst = generate_instance(5, 2, 3, 2, "grid-town");
  for (auto& u : inst.uavs) u.battery_j = 1.0;
  const TransformedGraph xf = transform(inst);
  const SolveResult r = solve(inst, xf, small_ga());
  CHECK(r.plan.uav_served.empty());
  CHECK(r.evaluation.objective == r.unassisted_objective);
}

TEST_CASE("assisted never loses to unassisted and the solution audits clean") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Instance inst = generate_instance(seed, 2, 3, 2, "grid-town");
    const TransformedGraph xf = transform(inst);
    const GaConfig cfg = small_ga(seed);
    const SolveResult r = solve(inst, xf, cfg);
    CHECK(r.evaluation.objective <= r.unassisted_objective);
    const AuditResult a = audit_solution(r.plan, r.schedule, inst, xf, cfg.timeline, cfg.scheduler.service_time_s);
    for (const auto& v : a.violations) FAIL_CHECK(v);
    GaConfig truck = cfg;
    truck.unassisted = true;
    CHECK(solve(inst, xf, truck).evaluation.objective == r.unassisted_objective);
  }
}

TEST_CASE("solve is deterministic and thread-count independent") {
  const Instance inst = generate_instance(7, 2, 3, 2, "grid-town");
  const TransformedGraph xf = transform(inst);
  GaConfig cfg = small_ga(7);
  const std::string a = solution_json(solve(inst, xf, cfg), inst, xf).dump();
  const std::string b = solution_json(solve(inst, xf, cfg), inst, xf).dump();
  CHECK(a == b);
  cfg.exec = Exec::Serial;
  cfg.scheduler.exec = Exec::Serial;
  const TransformedGraph xs = transform(inst, {}, Exec::Serial);
  CHECK(solution_json(solve(inst, xs, cfg), inst, xs).dump() == a);
}

TEST_CASE("parallel population bounds equal the serial reference") {
  const Instance inst = generate_instance(3, 4, 8, 3, "grid-city");
  const TransformedGraph xf = transform(inst);
  Rng rng(9);
  std::vector<NodeId> order = inst.ids_of(NodeClass::TruckDelivery);
  for (NodeId d : inst.ids_of(NodeClass::UavDelivery)) order.push_back(d);
  std::vector<Chromosome> pop;
  for (int i = 0; i < 40; ++i) {
    for (std::size_t k = order.size() - 1; k > 0; --k) std::swap(order[k], order[rng.index(k + 1)]);
    Chromosome ch{order, {}};
    for (int k = 0; k < 8; ++k) ch.by_uav.push_back(rng.chance(0.5));
    pop.push_back(ch);
  }
  CHECK(population_lower_bounds(pop, inst, xf, {}, Exec::Serial) ==
        population_lower_bounds(pop, inst, xf, {}, Exec::Parallel));
}
