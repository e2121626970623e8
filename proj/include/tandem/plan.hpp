#pragma once

#include <map>
#include <vector>

#include "tandem/graph_xform.hpp"
#include "tandem/model.hpp"

namespace tandem {

/// A decoded truck route over the closure graph plus the split of UAV-class
/// deliveries between truck and UAVs.
struct RoutePlan {
  std::vector<NodeId> route;          // starts and ends at the depot
  std::vector<NodeId> uav_served;     // ascending
  /// Per UAV-served delivery: indices into TransformedGraph::sorties(d) whose
  /// launch and recovery nodes the truck passes in that order.
  std::map<NodeId, std::vector<int>> candidate_sorties;
  bool feasible = true;

  friend bool operator==(const RoutePlan&, const RoutePlan&) = default;
};

/// One street-graph edge of the expanded route.
struct RouteStep {
  int edge = -1;  // G' edge index
  int from = -1;  // G' node index
  int to = -1;
  bool stop_at_start = false;
  bool stop_at_end = false;
  int leg = 0;  // index of the closure edge this step belongs to
};

/// The route expanded onto G' edges. `visits[id]` lists boundary positions
/// (0..steps.size()) at which the truck is at node `id`.
struct RouteTrace {
  std::vector<RouteStep> steps;
  std::map<NodeId, std::vector<int>> visits;
  std::vector<int> first_visit, last_visit;  // by node id, -1 when not visited
};

/// Depot, truck deliveries and any delivery the truck visits are stops.
bool is_stop_class(NodeClass c);

RouteTrace expand_route(const std::vector<NodeId>& route, const TransformedGraph& xf);

/// The truck passes `launch` and later (or at the same place) `recover`.
bool sortie_compatible(const RouteTrace& trace, NodeId launch, NodeId recover);

/// Fills plan.candidate_sorties and plan.feasible from the route trace.
void attach_candidate_sorties(RoutePlan& plan, const RouteTrace& trace, const TransformedGraph& xf);

json to_json(const RoutePlan& plan);

}  // namespace tandem
