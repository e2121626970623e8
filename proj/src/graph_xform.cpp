#include "tandem/graph_xform.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tandem/cost.hpp"

namespace tandem {

int worker_count() { return omp_get_max_threads(); }

int TransformedGraph::mission_index(NodeId id) const {
  const int i = id >= 0 && id < id_bound() ? index_[id] : -1;
  if (i < 0) throw std::out_of_range("node " + std::to_string(id) + " is not a mission node");
  return i;
}

const RendezvousNode* TransformedGraph::rendezvous(NodeId id) const {
  const int i = id >= 0 && id < id_bound() ? rendezvous_index_[id] : -1;
  return i < 0 ? nullptr : &augmented.rendezvous[i];
}

const std::vector<Sortie>& TransformedGraph::sorties(NodeId delivery) const {
  static const std::vector<Sortie> kNone;
  auto it = sorties_by_delivery.find(delivery);
  return it == sorties_by_delivery.end() ? kNone : it->second;
}

void TransformedGraph::build_index() {
  NodeId top = 0;
  for (const auto& n : augmented.graph.nodes()) top = std::max(top, n.id);
  index_.assign(top + 1, -1);
  rendezvous_index_.assign(top + 1, -1);
  for (int i = 0; i < size(); ++i) index_[mission[i]] = i;
  for (int i = 0; i < static_cast<int>(augmented.rendezvous.size()); ++i)
    rendezvous_index_[augmented.rendezvous[i].id] = i;
}

namespace {

bool through_street(NodeClass c) { return c == NodeClass::Street || c == NodeClass::Depot; }

struct Candidate {
  int edge;
  double s;
  NodeId delivery;
};

}  // namespace

AugmentedGraph insert_rendezvous_nodes(const Instance& inst, const XformConfig& config) {
  AugmentedGraph aug;
  const double deck = inst.truck.deck_height_m;
  const double g = inst.truck.gravity;

  std::vector<Candidate> cands;
  for (NodeId d : inst.ids_of(NodeClass::UavDelivery)) {
    const NodeLabel& dn = inst.node(d);
    double rmax = 0.0;
    for (const auto& u : inst.uavs) rmax = std::max(rmax, compute_rmax(u, dn.package_kg, deck, dn.position.z, g));
    aug.rmax_by_delivery[d] = rmax;
    if (inst.uavs.empty()) continue;

    for (int ei = 0; ei < static_cast<int>(inst.edges.size()); ++ei) {
      const StreetEdge& e = inst.edges[ei];
      const NodeLabel& nu = inst.node(e.u);
      const NodeLabel& nv = inst.node(e.v);
      if (!through_street(nu.cls) || !through_street(nv.cls)) continue;
      const double dx = nv.position.x - nu.position.x;
      const double dy = nv.position.y - nu.position.y;
      const double l2 = dx * dx + dy * dy;
      if (l2 == 0.0) continue;
      const double margin = std::min(config.endpoint_margin_m / e.length_m, 0.5);
      auto within = [&](double s) {
        const Vec3 p{nu.position.x + s * dx, nu.position.y + s * dy, 0.0};
        return horizontal_distance(p, dn.position) <= rmax;
      };
      double s = ((dn.position.x - nu.position.x) * dx + (dn.position.y - nu.position.y) * dy) / l2;
      s = std::clamp(s, margin, 1.0 - margin);
      if (within(s)) cands.push_back({ei, s, d});
      for (int k = 1; k < config.samples_per_edge; ++k) {
        const double sk = std::clamp(static_cast<double>(k) / config.samples_per_edge, margin, 1.0 - margin);
        if (within(sk)) cands.push_back({ei, sk, d});
      }
    }
  }

  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.edge != b.edge) return a.edge < b.edge;
    if (a.s != b.s) return a.s < b.s;
    return a.delivery < b.delivery;
  });

  NodeId next_id = kDepotId;
  for (const auto& n : inst.nodes) next_id = std::max(next_id, n.id);
  ++next_id;

  for (const auto& c : cands) {
    if (!aug.rendezvous.empty()) {
      RendezvousNode& last = aug.rendezvous.back();
      if (last.host_edge == c.edge && (c.s - last.edge_param) * inst.edges[c.edge].length_m < config.merge_distance_m) {
        if (std::find(last.serves.begin(), last.serves.end(), c.delivery) == last.serves.end())
          last.serves.push_back(c.delivery);
        continue;
      }
    }
    const StreetEdge& e = inst.edges[c.edge];
    const Vec3 a = inst.node(e.u).position;
    const Vec3 b = inst.node(e.v).position;
    RendezvousNode r;
    r.id = next_id++;
    r.host_edge = c.edge;
    r.edge_param = c.s;
    r.position = {a.x + c.s * (b.x - a.x), a.y + c.s * (b.y - a.y), deck};
    r.serves = {c.delivery};
    aug.rendezvous.push_back(r);
  }
  for (auto& r : aug.rendezvous) std::sort(r.serves.begin(), r.serves.end());

  StreetGraph& gp = aug.graph;
  for (const auto& n : inst.nodes) gp.add_node(n);
  for (const auto& r : aug.rendezvous) gp.add_node({r.id, NodeClass::Rendezvous, 0.0, r.position});
  std::size_t next_r = 0;
  for (int ei = 0; ei < static_cast<int>(inst.edges.size()); ++ei) {
    const StreetEdge& e = inst.edges[ei];
    int prev = gp.index_of(e.u);
    double prev_s = 0.0;
    while (next_r < aug.rendezvous.size() && aug.rendezvous[next_r].host_edge == ei) {
      const RendezvousNode& r = aug.rendezvous[next_r++];
      const int cur = gp.index_of(r.id);
      gp.add_edge({prev, cur, (r.edge_param - prev_s) * e.length_m, e.speed_mps, ei, prev_s, r.edge_param});
      prev = cur;
      prev_s = r.edge_param;
    }
    gp.add_edge({prev, gp.index_of(e.v), (1.0 - prev_s) * e.length_m, e.speed_mps, ei, prev_s, 1.0});
  }
  return aug;
}

std::map<NodeId, std::vector<Sortie>> enumerate_sorties(const AugmentedGraph& aug, const Instance& inst, Exec exec) {
  const std::vector<NodeId> deliveries = inst.ids_of(NodeClass::UavDelivery);
  const auto& rv = aug.rendezvous;
  const int nr = static_cast<int>(rv.size());
  const int nu = static_cast<int>(inst.uavs.size());
  const double g = inst.truck.gravity;
  std::vector<std::vector<Sortie>> result(deliveries.size());

  auto work = [&](std::size_t di) {
    const NodeLabel& dn = inst.node(deliveries[di]);
    std::vector<double> out(static_cast<std::size_t>(nu) * nr), ret(static_cast<std::size_t>(nu) * nr);
    for (int k = 0; k < nu; ++k)
      for (int r = 0; r < nr; ++r) {
        const SortieGeometry geo{rv[r].position, dn.position, rv[r].position};
        const SortieEnergy e = uav_sortie_energy(geo, inst.uavs[k], dn.package_kg, g);
        out[k * nr + r] = e.outbound_j;
        ret[k * nr + r] = e.return_j;
      }
    std::vector<double> min_ret(nu, std::numeric_limits<double>::infinity());
    for (int k = 0; k < nu; ++k)
      for (int r = 0; r < nr; ++r) min_ret[k] = std::min(min_ret[k], ret[k * nr + r]);

    auto& list = result[di];
    for (int a = 0; a < nr; ++a) {
      bool any = false;
      for (int k = 0; k < nu && !any; ++k) any = out[k * nr + a] + min_ret[k] <= inst.uavs[k].battery_j;
      if (!any) continue;
      for (int b = 0; b < nr; ++b) {
        Sortie s;
        for (int k = 0; k < nu; ++k) {
          const double total = out[k * nr + a] + ret[k * nr + b];
          if (total > inst.uavs[k].battery_j) continue;
          s.feasible_uavs.push_back(k);
          if (s.best_uav < 0 || total < s.total_j) {
            s.best_uav = k;
            s.outbound_j = out[k * nr + a];
            s.return_j = ret[k * nr + b];
            s.total_j = total;
          }
        }
        if (s.best_uav < 0) continue;
        s.launch = rv[a].id;
        s.delivery = dn.id;
        s.recover = rv[b].id;
        list.push_back(std::move(s));
      }
    }
  };

  const auto n = static_cast<long>(deliveries.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) work(static_cast<std::size_t>(i));
  } else {
    for (long i = 0; i < n; ++i) work(static_cast<std::size_t>(i));
  }

  std::map<NodeId, std::vector<Sortie>> by_delivery;
  for (std::size_t i = 0; i < deliveries.size(); ++i) by_delivery[deliveries[i]] = std::move(result[i]);
  return by_delivery;
}

TransformedGraph metric_closure(AugmentedGraph aug, Exec exec) {
  TransformedGraph xf;
  xf.augmented = std::move(aug);
  const StreetGraph& g = xf.augmented.graph;
  for (const auto& n : g.nodes())
    if (n.cls != NodeClass::Street) xf.mission.push_back(n.id);
  std::sort(xf.mission.begin(), xf.mission.end(), [](NodeId a, NodeId b) {
    if ((a == kDepotId) != (b == kDepotId)) return a == kDepotId;
    return a < b;
  });
  xf.build_index();

  const int m = xf.size();
  std::vector<ShortestPaths> trees(m);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < m; ++i) trees[i] = dijkstra(g, g.index_of(xf.mission[i]));
  } else {
    for (int i = 0; i < m; ++i) trees[i] = dijkstra(g, g.index_of(xf.mission[i]));
  }

  for (int j = 1; j < m; ++j)
    if (!std::isfinite(trees[0].dist[g.index_of(xf.mission[j])]))
      throw InfeasibleError("mission node " + std::to_string(xf.mission[j]) + " is unreachable from the depot");

  xf.dist.assign(static_cast<std::size_t>(m) * m, 0.0);
  xf.paths.assign(static_cast<std::size_t>(m) * m, {});
  for (int i = 0; i < m; ++i) {
    const int src = g.index_of(xf.mission[i]);
    xf.paths[i * m + i] = {src};
    for (int j = i + 1; j < m; ++j) {
      const int dst = g.index_of(xf.mission[j]);
      std::vector<int> nodes{dst};
      for (int cur = dst; cur != src;) {
        cur = g.edge_at(trees[i].pred_edge[cur]).other(cur);
        nodes.push_back(cur);
      }
      xf.dist[i * m + j] = xf.dist[j * m + i] = trees[i].dist[dst];
      xf.paths[j * m + i] = nodes;
      std::reverse(nodes.begin(), nodes.end());
      xf.paths[i * m + j] = std::move(nodes);
    }
  }
  return xf;
}

TransformedGraph transform(const Instance& inst, const XformConfig& config, Exec exec) {
  TransformedGraph xf = metric_closure(insert_rendezvous_nodes(inst, config), exec);
  xf.sorties_by_delivery = enumerate_sorties(xf.augmented, inst, exec);
  return xf;
}

json to_json(const TransformedGraph& xf) {
  json rv = json::array();
  for (const auto& r : xf.augmented.rendezvous)
    rv.push_back({{"id", r.id},
                  {"host_edge", r.host_edge},
                  {"edge_param", r.edge_param},
                  {"x_m", r.position.x},
                  {"y_m", r.position.y},
                  {"z_m", r.position.z},
                  {"serves", r.serves}});
  json rmax = json::object();
  for (const auto& [d, r] : xf.augmented.rmax_by_delivery) rmax[std::to_string(d)] = r;
  json sorties = json::object();
  for (const auto& [d, list] : xf.sorties_by_delivery) {
    json arr = json::array();
    for (const auto& s : list)
      arr.push_back({{"launch_id", s.launch}, {"recover_id", s.recover}, {"total_j", s.total_j}, {"uavs", s.feasible_uavs}});
    sorties[std::to_string(d)] = arr;
  }
  return json{{"mission_nodes", xf.mission},
              {"rendezvous", rv},
              {"rmax_m", rmax},
              {"dist_m", xf.dist},
              {"sorties", sorties}};
}

}  // namespace tandem
