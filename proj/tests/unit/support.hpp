#pragma once

#include <cmath>

#include "tandem/model.hpp"
#include "tandem/rng.hpp"

namespace tandem::testing {

inline NodeLabel node(NodeId id, NodeClass cls, double x, double y, double kg = 0.0, double z = 0.0) {
  return NodeLabel{id, cls, kg, Vec3{x, y, z}};
}

inline StreetEdge edge(NodeId u, NodeId v, double len, double speed = 10.0) { return StreetEdge{u, v, len, speed}; }

inline UavParams roomy_uav(int id, double battery = 40000.0) {
  UavParams u;
  u.id = id;
  u.battery_j = battery;
  return u;
}

// Depot at the origin, street nodes every 100 m east, deliveries hang off the
// street on short spurs.
inline Instance empty_line(int street_nodes) {
  Instance inst;
  inst.nodes.push_back(node(kDepotId, NodeClass::Depot, 0, 0));
  for (int i = 1; i <= street_nodes; ++i) {
    inst.nodes.push_back(node(1 + i, NodeClass::Street, 100.0 * i, 0));
    inst.edges.push_back(edge(i, 1 + i, 100.0));
  }
  return inst;
}

inline void add_delivery(Instance& inst, NodeId id, NodeClass cls, NodeId street, double dy, double kg) {
  const NodeLabel& s = inst.node(street);
  inst.nodes.push_back(node(id, cls, s.position.x, s.position.y + dy, kg));
  inst.edges.push_back(edge(street, id, std::abs(dy)));
}

// A UAV drawn from the generator's physical ranges.
inline UavParams sample_uav(Rng& rng, int id = 1) {
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

}  // namespace tandem::testing
