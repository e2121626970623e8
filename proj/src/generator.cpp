#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tandem/model.hpp"
#include "tandem/rng.hpp"

namespace tandem {

namespace {

struct GridMap {
  int nx;
  int ny;
  double block_m;
  int arterial_every;
  double arterial_speed;
  double local_speed;
  double driveway_speed;
};

GridMap map_by_name(std::string_view name) {
  if (name == "grid-city") return {7, 7, 150.0, 3, 15.0, 10.0, 5.0};
  if (name == "grid-town") return {4, 4, 120.0, 3, 13.0, 9.0, 5.0};
  throw std::invalid_argument("unknown map '" + std::string(name) + "'");
}

// Masses are kept on a 1/256 kg lattice so that sums and differences of
// system mass are exact in double precision.
double quantize_mass(double kg) { return std::max(1.0, std::round(kg * 256.0)) / 256.0; }

struct Junction {
  double s;
  NodeId id;
};

}  // namespace

std::vector<std::string> builtin_maps() { return {"grid-city", "grid-town"}; }

Instance generate_instance(std::uint64_t seed, int n_truck_deliveries, int n_uav_deliveries, int n_uavs,
                           std::string_view map_name, const GeneratorConfig& config) {
  if (n_truck_deliveries < 0 || n_uav_deliveries < 0 || n_uavs < 0)
    throw std::invalid_argument("delivery and UAV counts must be >= 0");
  const GridMap map = map_by_name(map_name);
  Rng rng(mix_seed(seed));

  Instance inst;
  inst.truck = config.truck;
  inst.weights = config.weights;

  auto grid_id = [&](int ix, int iy) { return 1 + iy * map.nx + ix; };
  for (int iy = 0; iy < map.ny; ++iy)
    for (int ix = 0; ix < map.nx; ++ix) {
      NodeLabel n;
      n.id = grid_id(ix, iy);
      n.cls = n.id == kDepotId ? NodeClass::Depot : NodeClass::Street;
      n.position = {ix * map.block_m, iy * map.block_m, 0.0};
      inst.nodes.push_back(n);
    }

  struct GridEdge {
    NodeId u, v;
    double speed;
    std::vector<Junction> junctions;
  };
  std::vector<GridEdge> grid;
  for (int iy = 0; iy < map.ny; ++iy)
    for (int ix = 0; ix < map.nx; ++ix) {
      if (ix + 1 < map.nx) {
        double v = iy % map.arterial_every == 0 ? map.arterial_speed : map.local_speed;
        grid.push_back({grid_id(ix, iy), grid_id(ix + 1, iy), v, {}});
      }
      if (iy + 1 < map.ny) {
        double v = ix % map.arterial_every == 0 ? map.arterial_speed : map.local_speed;
        grid.push_back({grid_id(ix, iy), grid_id(ix, iy + 1), v, {}});
      }
    }

  NodeId next_id = map.nx * map.ny + 1;
  const int total = n_truck_deliveries + n_uav_deliveries;
  std::vector<StreetEdge> driveways;
  constexpr double kMinJunctionGap = 10.0;

  for (int k = 0; k < total; ++k) {
    const bool by_uav = k >= n_truck_deliveries;
    GridEdge& host = grid[rng.index(grid.size())];
    const Vec3 a = inst.node(host.u).position;
    const Vec3 b = inst.node(host.v).position;
    const double len = horizontal_distance(a, b);

    double s = rng.uniform(0.15, 0.85);
    NodeId junction_id = 0;
    for (const auto& j : host.junctions)
      if (std::abs(j.s - s) * len < kMinJunctionGap) {
        s = j.s;
        junction_id = j.id;
        break;
      }
    const Vec3 foot{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y), 0.0};
    if (junction_id == 0) {
      junction_id = next_id++;
      inst.nodes.push_back({junction_id, NodeClass::Street, 0.0, foot});
      host.junctions.push_back({s, junction_id});
    }

    const double side = rng.chance(0.5) ? 1.0 : -1.0;
    const double setback = rng.uniform(config.setback_m.lo, config.setback_m.hi);
    const double nx = -(b.y - a.y) / len;
    const double ny = (b.x - a.x) / len;

    NodeLabel house;
    house.id = next_id++;
    house.cls = by_uav ? NodeClass::UavDelivery : NodeClass::TruckDelivery;
    const Range& pkg = by_uav ? config.uav_package_kg : config.truck_package_kg;
    house.package_kg = quantize_mass(rng.uniform(pkg.lo, pkg.hi));
    const double z = by_uav ? rng.uniform(config.uav_delivery_height_m.lo, config.uav_delivery_height_m.hi) : 0.0;
    house.position = {foot.x + side * setback * nx, foot.y + side * setback * ny, z};
    inst.nodes.push_back(house);
    driveways.push_back({junction_id, house.id, setback, map.driveway_speed});
  }

  for (auto& g : grid) {
    std::sort(g.junctions.begin(), g.junctions.end(), [](const Junction& x, const Junction& y) { return x.s < y.s; });
    const double len = horizontal_distance(inst.node(g.u).position, inst.node(g.v).position);
    NodeId prev = g.u;
    double prev_s = 0.0;
    for (const auto& j : g.junctions) {
      inst.edges.push_back({prev, j.id, (j.s - prev_s) * len, g.speed});
      prev = j.id;
      prev_s = j.s;
    }
    inst.edges.push_back({prev, g.v, (1.0 - prev_s) * len, g.speed});
  }
  inst.edges.insert(inst.edges.end(), driveways.begin(), driveways.end());

  for (int k = 0; k < n_uavs; ++k) {
    UavParams u;
    u.id = k + 1;
    u.empty_mass_kg = quantize_mass(rng.uniform(config.uav_empty_mass_kg.lo, config.uav_empty_mass_kg.hi));
    u.k1 = rng.uniform(config.uav_k1.lo, config.uav_k1.hi);
    u.k2 = rng.uniform(config.uav_k2.lo, config.uav_k2.hi);
    u.d = {rng.uniform(config.uav_d1.lo, config.uav_d1.hi), rng.uniform(config.uav_d2.lo, config.uav_d2.hi),
           rng.uniform(config.uav_d3.lo, config.uav_d3.hi), rng.uniform(config.uav_d4.lo, config.uav_d4.hi),
           rng.uniform(config.uav_d5.lo, config.uav_d5.hi)};
    u.ascent_mps = rng.uniform(config.uav_ascent_mps.lo, config.uav_ascent_mps.hi);
    u.descent_mps = rng.uniform(config.uav_descent_mps.lo, config.uav_descent_mps.hi);
    u.cruise_mps = rng.uniform(config.uav_cruise_mps.lo, config.uav_cruise_mps.hi);
    u.attack_angle_rad = rng.uniform(config.uav_attack_angle_rad.lo, config.uav_attack_angle_rad.hi);
    u.battery_j = rng.uniform(config.uav_battery_j.lo, config.uav_battery_j.hi);
    u.cruise_altitude_m = rng.uniform(config.uav_cruise_altitude_m.lo, config.uav_cruise_altitude_m.hi);
    inst.uavs.push_back(u);
  }

  validate(inst);
  return inst;
}

}  // namespace tandem
