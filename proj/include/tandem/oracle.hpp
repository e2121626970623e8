#pragma once

#include <vector>

#include "tandem/route_ga.hpp"
#include "tandem/scheduler.hpp"

namespace tandem::oracle {

struct Budget {
  int max_mission_nodes = 6;  // deliveries, depot excluded
  int max_jobs = 2;
  int max_slots = 16;
  double max_states = 1e7;
};

/// One edge driven with a bang-bang controller.
struct ProfileSpec {
  double length_m = 0.0;
  double speed_mps = 0.0;
  bool stop_at_start = false;
  bool stop_at_end = false;
  double mass_kg = 0.0;
};

struct KinematicResult {
  double time_s = 0.0;
  double distance_m = 0.0;
  double accel_fuel_ml = 0.0;
  double cruise_fuel_ml = 0.0;
  double fuel_ml() const { return accel_fuel_ml + cruise_fuel_ml; }
};

/// Fixed-step simulation of the controller: full throttle from rest, hold the
/// limit, brake as late as possible when a stop follows. Fuel rates are
/// sampled from the truck polynomials at each step.
KinematicResult kinematic_integrate(const ProfileSpec& spec, const TruckParams& truck, double dt);

/// Floyd-Warshall over the augmented street graph; distances between mission
/// nodes in TransformedGraph::mission order.
std::vector<double> all_pairs_distances(const TransformedGraph& xf);

struct TruckRouteCost {
  double time_s = 0.0;
  double fuel_ml = 0.0;
  double objective = 0.0;
};

/// Truck-only objective of a route along the transform's street paths,
/// integrated edge by edge with kinematic_integrate.
TruckRouteCost truck_route_cost(const std::vector<NodeId>& route, const Instance& inst, const TransformedGraph& xf,
                                double dt = 1e-4);

/// Energy of an out-and-back style sortie obtained by stepping the flight in
/// time and summing power * dt; independent of the closed-form legs.
double simulate_sortie_energy(const SortieGeometry& geo, const UavParams& uav, double package_kg, double gravity,
                              double dt = 1e-3);

/// Enumerates every (uav, job, slot) tuple per delivery and every combination
/// of them; throws std::length_error when the budget is exceeded.
Schedule brute_force_schedule(const RoutePlan& plan, const TruckTimeline& timeline, const Instance& inst,
                              const TransformedGraph& xf, const SchedulerConfig& config, const Budget& budget = {});

struct RouteOptimum {
  RoutePlan plan;
  Schedule schedule;
  double objective = 0.0;
};

/// Every flag vector times every visiting order, decoded like route_ga does,
/// each plan scheduled exhaustively.
RouteOptimum brute_force_route(const Instance& inst, const TransformedGraph& xf, const GaConfig& config,
                               const Budget& budget = {});

}  // namespace tandem::oracle
