#include "tandem/audit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "tandem/evaluate.hpp"

namespace tandem {

namespace {

constexpr double kPositionTol = 1e-6;

double distance3(const Vec3& a, const Vec3& b) { return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z)); }

// Horizontal distance from p to the straight segment a-b.
double to_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.x - (a.x + s * dx), p.y - (a.y + s * dy));
}

template <class... Args>
std::string str(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace

AuditResult audit_solution(const RoutePlan& plan, const Schedule& schedule, const Instance& inst,
                           const TransformedGraph& xf, const TimelineConfig& timeline_config, double service_time_s) {
  AuditResult out;
  auto fail = [&](std::string msg) { out.violations.push_back(std::move(msg)); };
  const auto& route = plan.route;

  // route shape
  if (route.size() < 2 || route.front() != kDepotId || route.back() != kDepotId) {
    fail("route does not start and end at the depot");
    return out;
  }
  std::map<NodeId, int> count;
  for (std::size_t i = 1; i + 1 < route.size(); ++i) ++count[route[i]];
  for (auto [id, c] : count)
    if (c > 1 || id == kDepotId) fail(str("node ", id, " visited ", c, " times"));
  for (NodeId h : inst.ids_of(NodeClass::TruckDelivery))
    if (count[h] != 1) fail(str("truck delivery ", h, " not on the route"));

  std::map<NodeId, int> flown;
  for (const auto& u : schedule.per_uav)
    for (const auto& j : u.jobs) ++flown[j.delivery];
  for (NodeId d : inst.ids_of(NodeClass::UavDelivery)) {
    const int served = count[d] + flown[d];
    if (served != 1) fail(str("delivery ", d, " served ", served, " times"));
  }
  for (auto [id, c] : flown)
    if (inst.node(id).cls != NodeClass::UavDelivery) fail(str("node ", id, " flown but not a UAV delivery"));

  // G' node ids along the street path, for launch-before-recovery checks
  std::vector<NodeId> walk;
  const StreetGraph& g = xf.graph();
  for (std::size_t leg = 0; leg + 1 < route.size(); ++leg) {
    if (!xf.is_mission(route[leg]) || !xf.is_mission(route[leg + 1])) {
      fail(str("route node ", route[leg], " is not a mission node"));
      return out;
    }
    const auto& p = xf.path_at(xf.mission_index(route[leg]), xf.mission_index(route[leg + 1]));
    for (std::size_t k = walk.empty() ? 0 : 1; k < p.size(); ++k) walk.push_back(g.node_at(p[k]).id);
  }

  const TruckTimeline tl = build_timeline(plan, inst, xf, timeline_config);
  double J = 0.0;
  for (const auto& u : schedule.per_uav) {
    const UavParams& uav = inst.uavs.at(u.uav_index);
    if (uav.id != u.uav_id) fail(str("UAV index ", u.uav_index, " carries id ", u.uav_id));
    for (std::size_t i = 0; i < u.jobs.size(); ++i) {
      const ScheduledJob& j = u.jobs[i];
      const std::string tag = str("UAV ", u.uav_id, " delivery ", j.delivery, ": ");
      if (i + 1 < u.jobs.size() && !(j.t_recover < u.jobs[i + 1].t_launch))
        fail(tag + "next sortie launches before recovery");
      if (j.t_recover < j.t_launch) fail(tag + "recovered before launch");

      const RendezvousNode* a = xf.rendezvous(j.launch_id);
      const RendezvousNode* b = xf.rendezvous(j.recover_id);
      if (!a || !b) {
        fail(tag + "sortie endpoints are not rendezvous nodes");
        continue;
      }
      auto first_a = std::find(walk.begin(), walk.end(), j.launch_id);
      auto last_b = std::find(walk.rbegin(), walk.rend(), j.recover_id);
      if (first_a == walk.end() || last_b == walk.rend() || (walk.rend() - last_b - 1) < (first_a - walk.begin()))
        fail(tag + "route does not pass launch then recovery node");

      // truck positions and host edges
      const Vec3 at_launch = tl.position(j.t_launch);
      const Vec3 at_recover = tl.position(j.t_recover);
      if (distance3(at_launch, j.launch_pos) > kPositionTol) fail(tag + "launch position off the truck");
      if (distance3(at_recover, j.intercept_pos) > kPositionTol) fail(tag + "intercept position off the truck");
      auto host_ok = [&](const RendezvousNode* r, const Vec3& p) {
        const StreetEdge& e = inst.edges.at(r->host_edge);
        return to_segment(p, inst.node(e.u).position, inst.node(e.v).position) <= kPositionTol;
      };
      if (!host_ok(a, j.launch_pos)) fail(tag + "launch off the launch node's street");
      if (!host_ok(b, j.intercept_pos)) fail(tag + "recovery off the recovery node's street");

      // energy and flight time
      const NodeLabel& dn = inst.node(j.delivery);
      const SortieGeometry geo{j.launch_pos, dn.position, j.intercept_pos};
      const SortieEnergy e = uav_sortie_energy(geo, uav, dn.package_kg, inst.truck.gravity);
      if (e.total_j > uav.battery_j) fail(tag + "sortie exceeds the battery");
      if (std::abs(e.total_j - j.energy_j) > 1e-9 * std::max(1.0, e.total_j)) fail(tag + "recorded energy mismatch");
      const double need = outbound_flight_time(geo, uav) + service_time_s + return_flight_time(geo, uav);
      if (j.t_recover - j.t_launch < need - 1e-6) fail(tag + "UAV cannot fly the sortie in time");
      if (j.cost_dollars != inst.weights.w2 * joules_to_kwh(j.energy_j)) fail(tag + "cost mismatch");
      J += j.cost_dollars;
    }
  }
  if (J != schedule.J) fail(str("J ", schedule.J, " differs from the job sum ", J));

  // mass conservation
  try {
    const MassProfile mp = mass_profile(plan, inst, tl, &schedule);
    double delivered = 0.0;
    for (NodeId id : inst.ids_of(NodeClass::TruckDelivery)) delivered += inst.node(id).package_kg;
    for (NodeId id : inst.ids_of(NodeClass::UavDelivery)) delivered += inst.node(id).package_kg;
    if (mp.start_mass - mp.final_mass != delivered) fail("package mass not conserved");
    double prev = mp.start_mass;
    for (std::size_t i = 1; i + 1 < route.size(); ++i) {
      auto it = mp.node_masses.find(route[i]);
      if (it == mp.node_masses.end()) continue;
      if (it->second > prev) fail("truck mass increases along the route");
      prev = it->second;
    }
  } catch (const std::exception& ex) {
    fail(str("mass profile: ", ex.what()));
  }
  return out;
}

}  // namespace tandem
