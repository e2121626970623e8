#pragma once

#include <map>
#include <vector>

#include "tandem/plan.hpp"
#include "tandem/timeline.hpp"

namespace tandem {

struct Schedule;

/// Masses along a route. Truck-served packages leave at their stop;
/// UAV-served packages leave at the step during which they are launched.
/// Docked UAVs are not part of these masses (their carriage is charged
/// separately as a marginal fuel cost).
struct MassProfile {
  double start_mass = 0.0;             // truck + every package of the plan
  std::map<NodeId, double> node_masses;  // after delivering at the node
  double final_mass = 0.0;
  std::vector<double> step_mass;       // truck mass while driving each route step

  struct UavLeg {
    int uav_id = 0;
    NodeId delivery = 0;
    double outbound_kg = 0.0;
    double return_kg = 0.0;
  };
  std::vector<UavLeg> uav_legs;
};

/// Throws std::invalid_argument when the route does not start and end at the
/// depot, visits a node twice, misses a truck delivery or carries a UAV-served one.
void check_route(const RoutePlan& plan, const Instance& inst);

/// `schedule == nullptr` treats every UAV package as gone before departure.
MassProfile mass_profile(const RoutePlan& plan, const Instance& inst, const TruckTimeline& timeline,
                         const Schedule* schedule);

struct EdgeCost {
  int step = 0;
  double truck_ml = 0.0;
  double truck_time_s = 0.0;
  double uav_ride_ml = 0.0;  // docked UAVs, summed
  double mass_kg = 0.0;
};

struct RouteEvaluation {
  double E_dollars = 0.0;
  double T_seconds = 0.0;
  double objective = 0.0;
  double truck_ml = 0.0;
  double docked_ml = 0.0;
  double uav_j = 0.0;
  double J_dollars = 0.0;
  std::vector<EdgeCost> per_edge;
  MassProfile masses;
};

/// alpha * E + (1 - alpha) * T.
double combine_objective(double E, double T, const ObjectiveWeights& w);

/// Evaluates a plan with its UAV schedule. Without a schedule the result is a
/// lower bound on every schedule's objective for the same route: UAV packages
/// are dropped from the truck mass and no UAV rides the truck.
RouteEvaluation evaluate_route(const RoutePlan& plan, const Schedule* schedule, const Instance& inst,
                               const TruckTimeline& timeline);

RouteEvaluation evaluate_route(const RoutePlan& plan, const Schedule* schedule, const Instance& inst,
                               const TransformedGraph& xf, const TimelineConfig& config = {});

}  // namespace tandem
