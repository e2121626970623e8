#include "tandem/report.hpp"

#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

namespace tandem {

namespace {

json xyz(const Vec3& p) { return json::array({p.x, p.y, p.z}); }

}  // namespace

json solution_json(const SolveResult& r, const Instance& inst, const TransformedGraph& xf) {
  const RouteEvaluation& ev = r.evaluation;
  const RouteTrace trace = expand_route(r.plan.route, xf);
  const StreetGraph& g = xf.graph();

  json edges = json::array();
  json path = json::array();
  if (!trace.steps.empty()) path.push_back(g.node_at(trace.steps.front().from).id);
  for (const auto& s : trace.steps) {
    edges.push_back(s.edge);
    path.push_back(g.node_at(s.to).id);
  }

  // rendezvous nodes the solution touches, enough to draw it without the transform
  std::set<NodeId> used;
  for (const auto& s : trace.steps) {
    if (xf.rendezvous(g.node_at(s.from).id)) used.insert(g.node_at(s.from).id);
    if (xf.rendezvous(g.node_at(s.to).id)) used.insert(g.node_at(s.to).id);
  }
  json rendezvous = json::array();
  for (NodeId id : used) {
    const RendezvousNode* rn = xf.rendezvous(id);
    const StreetEdge& e = inst.edges[rn->host_edge];
    rendezvous.push_back({{"id", id}, {"host_edge", {e.u, e.v}}, {"edge_param", rn->edge_param}, {"xyz", xyz(rn->position)}});
  }

  double delivered = 0.0;
  for (const auto& n : inst.nodes) delivered += n.package_kg;

  json out;
  out["objective"] = ev.objective;
  out["E_dollars"] = ev.E_dollars;
  out["T_seconds"] = ev.T_seconds;
  out["J_dollars"] = ev.J_dollars;
  out["truck_fuel_ml"] = ev.truck_ml;
  out["docked_uav_fuel_ml"] = ev.docked_ml;
  out["uav_energy_j"] = ev.uav_j;
  out["weights"] = {{"alpha", inst.weights.alpha}, {"w1", inst.weights.w1}, {"w2", inst.weights.w2}};
  out["route"] = r.plan.route;
  out["uav_served"] = r.plan.uav_served;
  out["embedded_path"] = std::move(edges);
  out["path_nodes"] = std::move(path);
  out["rendezvous"] = std::move(rendezvous);
  out["schedule"] = to_json(r.schedule, inst);
  out["masses"] = {{"M0_star", ev.masses.start_mass}, {"M0_f", ev.masses.final_mass}, {"delivered", delivered}};
  out["unassisted_objective"] = r.unassisted_objective;
  out["improvement"] = r.unassisted_objective - ev.objective;
  out["generations"] = r.generations;
  out["history"] = r.history;
  return out;
}

json export_geojson(const Instance& inst, const json& sol) {
  std::map<NodeId, Vec3> where;
  for (const auto& n : inst.nodes) where[n.id] = n.position;
  for (const auto& r : sol.at("rendezvous")) {
    const auto& p = r.at("xyz");
    where[r.at("id").get<NodeId>()] = {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
  }
  auto resolve = [&](NodeId id) {
    auto it = where.find(id);
    if (it == where.end()) throw std::invalid_argument("solution node " + std::to_string(id) + " not in instance");
    return it->second;
  };
  auto feature = [](json geometry, json props) {
    return json{{"type", "Feature"}, {"geometry", std::move(geometry)}, {"properties", std::move(props)}};
  };

  for (const auto& id : sol.at("route")) resolve(id.get<NodeId>());
  std::set<int> uav_ids;
  for (const auto& u : inst.uavs) uav_ids.insert(u.id);

  json features = json::array();
  json line = json::array();
  for (const auto& id : sol.at("path_nodes")) {
    const Vec3 p = resolve(id.get<NodeId>());
    line.push_back({p.x, p.y});
  }
  features.push_back(feature({{"type", "LineString"}, {"coordinates", std::move(line)}},
                             {{"kind", "truck_route"}, {"route", sol.at("route")}}));

  for (const auto& u : sol.at("schedule").at("uavs")) {
    if (!uav_ids.count(u.at("uav_id").get<int>()))
      throw std::invalid_argument("solution uav " + u.at("uav_id").dump() + " not in instance");
    for (const auto& j : u.at("jobs")) {
      const Vec3 d = resolve(j.at("delivery_id").get<NodeId>());
      resolve(j.at("sortie").at("launch_id").get<NodeId>());
      resolve(j.at("sortie").at("recover_id").get<NodeId>());
      json coords = json::array({j.at("launch_xyz"), json::array({d.x, d.y, d.z}), j.at("intercept_xyz")});
      features.push_back(feature({{"type", "LineString"}, {"coordinates", std::move(coords)}},
                                 {{"kind", "sortie"},
                                  {"uav_id", u.at("uav_id")},
                                  {"delivery_id", j.at("delivery_id")},
                                  {"t_launch_s", j.at("t_launch_s")},
                                  {"t_recover_s", j.at("t_recover_s")}}));
    }
  }

  for (const auto& n : inst.nodes) {
    if (n.package_kg <= 0.0) continue;
    features.push_back(feature({{"type", "Point"}, {"coordinates", {n.position.x, n.position.y, n.position.z}}},
                               {{"kind", "delivery"}, {"id", n.id}, {"class", to_string(n.cls)}, {"package_kg", n.package_kg}}));
  }
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

std::vector<BenchRow> run_bench(const BenchConfig& config, const std::function<void(const BenchRow&)>& on_row) {
  std::vector<BenchRow> rows;
  for (std::uint64_t seed : config.seeds) {
    const Instance inst = generate_instance(seed, config.truck_deliveries, config.uav_deliveries, config.uavs,
                                            config.map, config.generator);
    const TransformedGraph xf = transform(inst, config.xform, config.ga.exec);
    GaConfig ga = config.ga;
    ga.seed = seed;
    const SolveResult res = solve(inst, xf, ga);
    BenchRow row;
    row.seed = seed;
    row.assisted = res.evaluation.objective;
    row.unassisted = res.unassisted_objective;
    row.audit = audit_solution(res.plan, res.schedule, inst, xf, ga.timeline, ga.scheduler.service_time_s);
    double delivered = 0.0;
    for (const auto& n : inst.nodes) delivered += n.package_kg;
    row.mass_conserved = res.evaluation.masses.start_mass - res.evaluation.masses.final_mass == delivered;
    if (on_row) on_row(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

BenchRow mean_row(const std::vector<BenchRow>& rows) {
  BenchRow m;
  for (const auto& r : rows) {
    m.assisted += r.assisted;
    m.unassisted += r.unassisted;
  }
  if (!rows.empty()) {
    m.assisted /= static_cast<double>(rows.size());
    m.unassisted /= static_cast<double>(rows.size());
  }
  return m;
}

}  // namespace

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "seed,assisted,unassisted,improvement,pct_improvement\n";
  auto line = [&](const std::string& seed, const BenchRow& r, double pct) {
    os << seed << ',' << r.assisted << ',' << r.unassisted << ',' << r.improvement() << ',' << pct << '\n';
  };
  os << std::setprecision(10);
  double pct = 0.0;
  for (const auto& r : rows) {
    line(std::to_string(r.seed), r, r.pct_improvement());
    pct += r.pct_improvement();
  }
  // mean of per-seed percentages, not the percentage of the means
  line("mean", mean_row(rows), rows.empty() ? 0.0 : pct / static_cast<double>(rows.size()));
}

void write_bench_table(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << std::left << std::setw(8) << "seed" << std::right << std::setw(14) << "assisted" << std::setw(14)
     << "unassisted" << std::setw(14) << "improvement" << std::setw(10) << "%" << '\n';
  auto line = [&](const std::string& seed, const BenchRow& r, double pct) {
    os << std::left << std::setw(8) << seed << std::right << std::fixed << std::setprecision(2) << std::setw(14)
       << r.assisted << std::setw(14) << r.unassisted << std::setw(14) << r.improvement() << std::setw(10) << pct
       << '\n';
    os.unsetf(std::ios::fixed);
  };
  double pct = 0.0;
  for (const auto& r : rows) {
    line(std::to_string(r.seed), r, r.pct_improvement());
    pct += r.pct_improvement();
  }
  line("mean", mean_row(rows), rows.empty() ? 0.0 : pct / static_cast<double>(rows.size()));
}

}  // namespace tandem
