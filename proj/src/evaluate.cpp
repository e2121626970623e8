#include "tandem/evaluate.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "tandem/scheduler.hpp"

namespace tandem {

void check_route(const RoutePlan& plan, const Instance& inst) {
  const auto& r = plan.route;
  if (r.size() < 2 || r.front() != kDepotId || r.back() != kDepotId)
    throw std::invalid_argument("route must start and end at the depot");
  std::set<NodeId> seen;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    if (r[i] == kDepotId) throw std::invalid_argument("route returns to the depot before the end");
    if (!seen.insert(r[i]).second) throw std::invalid_argument("node " + std::to_string(r[i]) + " visited twice");
  }
  std::set<NodeId> uav(plan.uav_served.begin(), plan.uav_served.end());
  for (NodeId id : inst.ids_of(NodeClass::UavDelivery)) {
    const bool in_route = seen.count(id) != 0;
    const bool by_uav = uav.count(id) != 0;
    if (in_route && by_uav) throw std::invalid_argument("UAV-served delivery " + std::to_string(id) + " is on the truck route");
    if (!in_route && !by_uav) throw std::invalid_argument("delivery " + std::to_string(id) + " is never served");
  }
  for (NodeId id : inst.ids_of(NodeClass::TruckDelivery))
    if (!seen.count(id)) throw std::invalid_argument("truck delivery " + std::to_string(id) + " is not visited");
  for (NodeId id : seen) {
    const NodeLabel* n = inst.find_node(id);
    if (!n) continue;  // rendezvous nodes live in the transform, not the instance
    NodeClass c = n->cls;
    if (c != NodeClass::TruckDelivery && c != NodeClass::UavDelivery && c != NodeClass::Rendezvous)
      throw std::invalid_argument("route node " + std::to_string(id) + " is not a delivery or rendezvous node");
  }
  for (NodeId id : uav)
    if (inst.node(id).cls != NodeClass::UavDelivery)
      throw std::invalid_argument("node " + std::to_string(id) + " cannot be served by a UAV");
}

MassProfile mass_profile(const RoutePlan& plan, const Instance& inst, const TruckTimeline& timeline,
                         const Schedule* schedule) {
  check_route(plan, inst);
  MassProfile mp;
  const auto& steps = timeline.trace.steps;
  const int n = static_cast<int>(steps.size());

  // drop[b] = package mass leaving the truck at step boundary b
  std::vector<double> drop(n + 1, 0.0);
  std::vector<NodeId> drop_node(n + 1, 0);
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < plan.route.size(); ++i) {
    NodeId id = plan.route[i];
    const NodeLabel* node = inst.find_node(id);
    const double m = node ? node->package_kg : 0.0;
    if (m <= 0.0) continue;  // rendezvous node
    const int b = timeline.trace.visits.at(id).front();
    drop[b] += m;
    drop_node[b] = id;
    total += m;
  }
  double uav_total = 0.0;
  for (NodeId d : plan.uav_served) uav_total += inst.node(d).package_kg;

  if (schedule) {
    for (const auto& u : schedule->per_uav) {
      const double empty = inst.uavs[u.uav_index].empty_mass_kg;
      for (const auto& j : u.jobs) {
        // aboard for every step entered strictly before the launch
        int b = 0;
        while (b < n && timeline.segments[timeline.step_segment[b]].enter < j.t_launch) ++b;
        drop[b] += inst.node(j.delivery).package_kg;
        mp.uav_legs.push_back({u.uav_id, j.delivery, empty + inst.node(j.delivery).package_kg, empty});
      }
    }
    total += uav_total;
  }

  mp.start_mass = inst.truck.empty_mass_kg + total;
  double m = mp.start_mass;
  mp.step_mass.resize(n);
  for (int b = 0; b < n; ++b) {
    m -= drop[b];
    if (drop_node[b]) mp.node_masses[drop_node[b]] = m;
    mp.step_mass[b] = m;
  }
  m -= drop[n];
  if (drop_node[n]) mp.node_masses[drop_node[n]] = m;
  mp.final_mass = m;
  if (!schedule) {
    // lower-bound view: UAV packages never ride
    mp.start_mass += uav_total;
  }
  return mp;
}

double combine_objective(double E, double T, const ObjectiveWeights& w) { return w.alpha * E + (1.0 - w.alpha) * T; }

RouteEvaluation evaluate_route(const RoutePlan& plan, const Schedule* schedule, const Instance& inst,
                               const TruckTimeline& timeline) {
  RouteEvaluation ev;
  ev.masses = mass_profile(plan, inst, timeline, schedule);
  struct Flight {
    int uav;
    double from, to;
  };
  std::vector<Flight> flights;
  std::vector<int> used;
  if (schedule) {
    for (const auto& u : schedule->per_uav) {
      if (u.jobs.empty()) continue;
      used.push_back(u.uav_index);
      for (const auto& j : u.jobs) flights.push_back({u.uav_index, j.t_launch, j.t_recover});
    }
  }

  for (const auto& seg : timeline.segments) {
    if (seg.edge < 0) {
      ev.T_seconds += seg.exit - seg.enter;
      continue;
    }
    EdgeCost c;
    c.step = seg.step;
    c.mass_kg = ev.masses.step_mass[seg.step];
    c.truck_time_s = seg.kin.total_time();
    c.truck_ml = truck_edge_energy(seg.length_m, seg.speed_mps, c.mass_kg, seg.stop_at_start, seg.stop_at_end,
                                   inst.truck)
                     .total_ml();
    for (int k : used) {
      bool flying = false;
      for (const auto& f : flights)
        if (f.uav == k && f.from < seg.exit && f.to > seg.enter) flying = true;
      if (!flying)
        c.uav_ride_ml += docked_uav_marginal_ml(seg.length_m, seg.speed_mps, c.mass_kg, inst.uavs[k].empty_mass_kg,
                                                seg.stop_at_start, seg.stop_at_end, inst.truck);
    }
    ev.truck_ml += c.truck_ml;
    ev.docked_ml += c.uav_ride_ml;
    ev.T_seconds += c.truck_time_s;
    ev.per_edge.push_back(c);
  }
  if (schedule) {
    for (const auto& u : schedule->per_uav)
      for (const auto& j : u.jobs) ev.uav_j += j.energy_j;
    ev.J_dollars = schedule->J;
  }
  ev.E_dollars = inst.weights.w1 * (ev.truck_ml + ev.docked_ml) + ev.J_dollars;
  ev.objective = combine_objective(ev.E_dollars, ev.T_seconds, inst.weights);
  return ev;
}

}  // namespace tandem

namespace tandem {

RouteEvaluation evaluate_route(const RoutePlan& plan, const Schedule* schedule, const Instance& inst,
                               const TransformedGraph& xf, const TimelineConfig& config) {
  return evaluate_route(plan, schedule, inst, build_timeline(plan, inst, xf, config));
}

}  // namespace tandem
