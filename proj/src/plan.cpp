#include "tandem/plan.hpp"

#include <algorithm>
#include <stdexcept>

namespace tandem {

bool is_stop_class(NodeClass c) {
  return c == NodeClass::Depot || c == NodeClass::TruckDelivery || c == NodeClass::UavDelivery;
}

namespace {

int connecting_edge(const StreetGraph& g, int a, int b) {
  int best = -1;
  for (auto [e, v] : g.adjacent(a))
    if (v == b && (best < 0 || g.edge_at(e).length_m < g.edge_at(best).length_m)) best = e;
  if (best < 0) throw std::logic_error("closure path uses a missing street edge");
  return best;
}

}  // namespace

RouteTrace expand_route(const std::vector<NodeId>& route, const TransformedGraph& xf) {
  RouteTrace trace;
  const StreetGraph& g = xf.graph();
  if (route.empty()) return trace;
  trace.first_visit.assign(xf.id_bound(), -1);
  trace.last_visit.assign(xf.id_bound(), -1);
  auto mark = [&](int node_index) {
    const NodeId id = g.node_at(node_index).id;
    const int pos = static_cast<int>(trace.steps.size());
    trace.visits[id].push_back(pos);
    if (trace.first_visit[id] < 0) trace.first_visit[id] = pos;
    trace.last_visit[id] = pos;
  };
  mark(g.index_of(route.front()));
  for (std::size_t leg = 0; leg + 1 < route.size(); ++leg) {
    const int i = xf.mission_index(route[leg]);
    const int j = xf.mission_index(route[leg + 1]);
    const auto& nodes = xf.path_at(i, j);
    const bool stop_a = is_stop_class(g.node_at(nodes.front()).cls);
    const bool stop_b = is_stop_class(g.node_at(nodes.back()).cls);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      RouteStep s;
      s.from = nodes[k];
      s.to = nodes[k + 1];
      s.edge = connecting_edge(g, s.from, s.to);
      s.stop_at_start = k == 0 && stop_a;
      s.stop_at_end = k + 2 == nodes.size() && stop_b;
      s.leg = static_cast<int>(leg);
      trace.steps.push_back(s);
      mark(s.to);
    }
  }
  return trace;
}

bool sortie_compatible(const RouteTrace& trace, NodeId launch, NodeId recover) {
  const int n = static_cast<int>(trace.first_visit.size());
  if (launch < 0 || launch >= n || recover < 0 || recover >= n) return false;
  const int a = trace.first_visit[launch];
  return a >= 0 && trace.last_visit[recover] >= a;
}

void attach_candidate_sorties(RoutePlan& plan, const RouteTrace& trace, const TransformedGraph& xf) {
  plan.candidate_sorties.clear();
  plan.feasible = true;
  for (NodeId d : plan.uav_served) {
    std::vector<int> ok;
    const auto& list = xf.sorties(d);
    for (int i = 0; i < static_cast<int>(list.size()); ++i)
      if (sortie_compatible(trace, list[i].launch, list[i].recover)) ok.push_back(i);
    if (ok.empty()) plan.feasible = false;
    plan.candidate_sorties[d] = std::move(ok);
  }
}

json to_json(const RoutePlan& plan) {
  return json{{"route", plan.route}, {"uav_served", plan.uav_served}, {"feasible", plan.feasible}};
}

}  // namespace tandem
