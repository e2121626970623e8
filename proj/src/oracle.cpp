#include "tandem/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tandem::oracle {

namespace {

constexpr double kEps = 1e-12;

double idle_rate(double v, double mass, const TruckParams& t) {
  const double a_eq = -t.drag_coeff * t.air_density * t.frontal_area_m2 * v * v / (2.0 * mass) -
                      t.rolling_friction * t.gravity + t.accel_input;
  const auto& c = t.idle_coeffs;
  return std::max(0.0, a_eq * (c[0] + c[1] * v + c[2] * v * v));
}

double cruise_rate(double v, const TruckParams& t) {
  const auto& b = t.cruise_coeffs;
  return std::max(0.0, b[0] + v * (b[1] + v * (b[2] + v * b[3])));
}

}  // namespace

KinematicResult kinematic_integrate(const ProfileSpec& spec, const TruckParams& truck, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const double d = spec.length_m;
  const double V = spec.speed_mps;
  const double ua = truck.accel_input;
  const double ub = -truck.brake_input;
  auto brake_dist = [&](double v) { return spec.stop_at_end ? v * v / (2.0 * ub) : 0.0; };

  double v = V;
  if (spec.stop_at_start) v = 0.0;
  else if (spec.stop_at_end) v = std::min(V, std::sqrt(2.0 * ub * d));  // entering too fast to stop otherwise
  double x = 0.0;
  KinematicResult r;
  bool braking = false;

  while (x < d - kEps) {
    if (spec.stop_at_end && (braking || x + brake_dist(v) >= d - 1e-9)) {
      braking = true;
      double h = dt;
      if (v - ub * h <= 0.0) h = v / ub;
      x += v * h - 0.5 * ub * h * h;
      v -= ub * h;
      r.time_s += h;
      if (v <= kEps) break;
      continue;
    }
    if (spec.stop_at_start && v < V - kEps) {
      double h = std::min(dt, (V - v) / ua);
      if (spec.stop_at_end) {
        // reach the braking curve mid-step?
        const double A = 0.5 * ua + ua * ua / (2.0 * ub);
        const double B = v + v * ua / ub;
        const double C = x + v * v / (2.0 * ub) - d;
        h = std::min(h, (-B + std::sqrt(B * B - 4.0 * A * C)) / (2.0 * A));
      } else {
        h = std::min(h, (-v + std::sqrt(v * v + 2.0 * ua * (d - x))) / ua);
      }
      r.accel_fuel_ml += idle_rate(v + 0.5 * ua * h, spec.mass_kg, truck) * h;
      x += v * h + 0.5 * ua * h * h;
      v += ua * h;
      r.time_s += h;
      continue;
    }
    const double limit = d - brake_dist(v) - x;
    const double h = std::min(dt, std::max(limit, 0.0) / v);
    if (h <= 0.0) {
      braking = true;
      continue;
    }
    r.cruise_fuel_ml += cruise_rate(v, truck) * h;
    x += v * h;
    r.time_s += h;
  }
  r.distance_m = x;
  return r;
}

std::vector<double> all_pairs_distances(const TransformedGraph& xf) {
  const StreetGraph& g = xf.graph();
  const int n = g.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> D(static_cast<std::size_t>(n) * n, inf);
  for (int i = 0; i < n; ++i) D[i * n + i] = 0.0;
  for (int e = 0; e < g.edge_count(); ++e) {
    const GraphEdge& ge = g.edge_at(e);
    D[ge.a * n + ge.b] = std::min(D[ge.a * n + ge.b], ge.length_m);
    D[ge.b * n + ge.a] = std::min(D[ge.b * n + ge.a], ge.length_m);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      const double dik = D[i * n + k];
      if (dik == inf) continue;
      for (int j = 0; j < n; ++j) D[i * n + j] = std::min(D[i * n + j], dik + D[k * n + j]);
    }
  const int m = xf.size();
  std::vector<double> out(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out[i * m + j] = D[g.index_of(xf.mission[i]) * n + g.index_of(xf.mission[j])];
  return out;
}

TruckRouteCost truck_route_cost(const std::vector<NodeId>& route, const Instance& inst, const TransformedGraph& xf,
                                double dt) {
  const StreetGraph& g = xf.graph();
  auto stops = [&](int node) {
    const NodeClass c = g.node_at(node).cls;
    return c == NodeClass::Depot || c == NodeClass::TruckDelivery || c == NodeClass::UavDelivery;
  };
  auto package = [&](NodeId id) {
    const NodeLabel* n = inst.find_node(id);
    return n ? n->package_kg : 0.0;
  };
  double mass = inst.truck.empty_mass_kg;
  for (std::size_t i = 1; i + 1 < route.size(); ++i) mass += package(route[i]);

  TruckRouteCost out;
  for (std::size_t leg = 0; leg + 1 < route.size(); ++leg) {
    const auto& nodes = xf.path_at(xf.mission_index(route[leg]), xf.mission_index(route[leg + 1]));
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      const GraphEdge* best = nullptr;
      for (auto [e, w] : g.adjacent(nodes[k]))
        if (w == nodes[k + 1] && (!best || g.edge_at(e).length_m < best->length_m)) best = &g.edge_at(e);
      ProfileSpec spec{best->length_m, best->speed_mps, k == 0 && stops(nodes.front()),
                       k + 2 == nodes.size() && stops(nodes.back()), mass};
      const KinematicResult kr = kinematic_integrate(spec, inst.truck, dt);
      out.time_s += kr.time_s;
      out.fuel_ml += kr.fuel_ml();
    }
    if (leg + 2 < route.size()) mass -= package(route[leg + 1]);
  }
  const auto& w = inst.weights;
  out.objective = w.alpha * (w.w1 * out.fuel_ml) + (1.0 - w.alpha) * out.time_s;
  return out;
}

double simulate_sortie_energy(const SortieGeometry& geo, const UavParams& uav, double package_kg, double gravity,
                              double dt) {
  auto vertical = [&](double mass, double speed) {
    const double W = mass * gravity;
    const double h = speed / 2.0;
    return uav.d[1] * std::pow(W, 1.5) + uav.k1 * W * (h + std::sqrt(h * h + W / (uav.k2 * uav.k2)));
  };
  auto level = [&](double mass) {
    const double V = uav.cruise_mps;
    const double vc = V * std::cos(uav.attack_angle_rad);
    const double thrust = std::hypot(mass * gravity - uav.d[4] * vc * vc, uav.d[3] * V * V);
    return (uav.d[0] + uav.d[1]) * std::pow(thrust, 1.5) + uav.d[3] * V * V * V + uav.d[2] * vc * vc * std::sqrt(thrust);
  };
  // Integrates a constant-power phase of the given duration step by step.
  auto phase = [&](double power, double duration) {
    double e = 0.0;
    for (double t = 0.0; t < duration;) {
      const double h = std::min(dt, duration - t);
      e += power * h;
      t += h;
    }
    return e;
  };
  const double z = uav.cruise_altitude_m;
  double e = 0.0;
  for (int leg = 0; leg < 2; ++leg) {
    const double mass = uav.empty_mass_kg + (leg == 0 ? package_kg : 0.0);
    const Vec3& from = leg == 0 ? geo.launch : geo.delivery;
    const Vec3& to = leg == 0 ? geo.delivery : geo.recover;
    e += phase(vertical(mass, uav.ascent_mps), (z - from.z) / uav.ascent_mps);
    e += phase(level(mass), std::hypot(to.x - from.x, to.y - from.y) / uav.cruise_mps);
    e += phase(vertical(mass, uav.descent_mps), (to.z - z) / uav.descent_mps);
  }
  return e;
}

Schedule brute_force_schedule(const RoutePlan& plan, const TruckTimeline& timeline, const Instance& inst,
                              const TransformedGraph& xf, const SchedulerConfig& config, const Budget& budget) {
  if (static_cast<int>(plan.uav_served.size()) > budget.max_jobs)
    throw std::length_error("oracle budget: too many jobs");
  if (config.time_slots > budget.max_slots) throw std::length_error("oracle budget: too many slots");
  const auto jobs = candidate_jobs(plan, timeline, inst, xf, config);

  std::vector<std::vector<JobOption>> opts(jobs.size());
  double states = 1.0;
  for (std::size_t d = 0; d < jobs.size(); ++d) {
    for (int j = 0; j < static_cast<int>(jobs[d].size()); ++j) {
      const auto slots = jobs[d][j].launch_slots(config.time_slots);
      for (int s = 0; s < static_cast<int>(slots.size()); ++s)
        for (int k = 0; k < static_cast<int>(inst.uavs.size()); ++k) {
          JobCost c = job_cost(jobs[d][j], inst.uavs[k], slots[s], timeline, inst, config.service_time_s);
          if (c.feasible) opts[d].push_back({k, j, s, slots[s], c});
        }
    }
    states *= static_cast<double>(opts[d].size());
  }
  if (states > budget.max_states) throw std::length_error("oracle budget: too many states");

  Schedule none;
  for (int k = 0; k < static_cast<int>(inst.uavs.size()); ++k) none.per_uav.push_back({k, inst.uavs[k].id, {}, 0.0});
  if (jobs.empty()) return none;
  for (const auto& o : opts)
    if (o.empty()) {
      none.feasible = false;
      none.reason = "no feasible option";
      return none;
    }

  const std::size_t n = opts.size();
  std::vector<std::size_t> idx(n, 0);
  std::vector<std::size_t> best;
  double best_cost = std::numeric_limits<double>::infinity();
  while (true) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = a + 1; b < n && ok; ++b) {
        const JobOption& x = opts[a][idx[a]];
        const JobOption& y = opts[b][idx[b]];
        if (x.uav == y.uav && !(x.result.finish_time < y.t_launch || y.result.finish_time < x.t_launch)) ok = false;
      }
    if (ok) {
      double c = 0.0;
      for (std::size_t d = 0; d < n; ++d) c += opts[d][idx[d]].result.cost_dollars;
      if (c < best_cost) {
        best_cost = c;
        best = idx;
      }
    }
    std::size_t d = 0;
    while (d < n && ++idx[d] == opts[d].size()) idx[d++] = 0;
    if (d == n) break;
  }
  if (best.empty()) {
    none.feasible = false;
    none.reason = "no conflict-free assignment";
    return none;
  }
  std::vector<const JobOption*> chosen;
  for (std::size_t d = 0; d < n; ++d) chosen.push_back(&opts[d][best[d]]);
  return assemble_schedule(jobs, chosen, inst, xf);
}

RouteOptimum brute_force_route(const Instance& inst, const TransformedGraph& xf, const GaConfig& config,
                               const Budget& budget) {
  const auto hs = inst.ids_of(NodeClass::TruckDelivery);
  const auto ds = inst.ids_of(NodeClass::UavDelivery);
  if (static_cast<int>(hs.size() + ds.size()) > budget.max_mission_nodes)
    throw std::length_error("oracle budget: too many mission nodes");
  if (static_cast<int>(ds.size()) > budget.max_jobs) throw std::length_error("oracle budget: too many jobs");

  RouteOptimum best;
  best.objective = std::numeric_limits<double>::infinity();
  const unsigned masks = 1u << ds.size();
  for (unsigned mask = 0; mask < masks; ++mask) {
    Chromosome ch;
    ch.by_uav.assign(ds.size(), 0);
    std::vector<NodeId> truck = hs;
    std::vector<NodeId> flown;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (mask >> i & 1u) {
        ch.by_uav[i] = 1;
        flown.push_back(ds[i]);
      } else {
        truck.push_back(ds[i]);
      }
    }
    std::sort(truck.begin(), truck.end());
    do {
      ch.order = truck;
      ch.order.insert(ch.order.end(), flown.begin(), flown.end());
      const RoutePlan plan = decode(ch, inst, xf);
      if (!plan.feasible) continue;
      const TruckTimeline tl = build_timeline(plan, inst, xf, config.timeline);
      const double lb = evaluate_route(plan, nullptr, inst, tl).objective;
      if (lb >= best.objective) continue;
      Schedule s;
      for (int k = 0; k < static_cast<int>(inst.uavs.size()); ++k) s.per_uav.push_back({k, inst.uavs[k].id, {}, 0.0});
      if (!plan.uav_served.empty()) {
        s = brute_force_schedule(plan, tl, inst, xf, config.scheduler, budget);
        if (!s.feasible) continue;
      }
      const double obj = evaluate_route(plan, &s, inst, tl).objective;
      if (obj < best.objective) best = {plan, s, obj};
    } while (std::next_permutation(truck.begin(), truck.end()));
  }
  return best;
}

}  // namespace tandem::oracle
