#include "tandem/street_graph.hpp"

#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace tandem {

StreetGraph StreetGraph::from_instance(const Instance& inst) {
  StreetGraph g;
  for (const auto& n : inst.nodes) g.add_node(n);
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const auto& e = inst.edges[i];
    g.add_edge({g.index_of(e.u), g.index_of(e.v), e.length_m, e.speed_mps, static_cast<int>(i), 0.0, 1.0});
  }
  return g;
}

int StreetGraph::add_node(const NodeLabel& label) {
  const int idx = node_count();
  if (!index_.emplace(label.id, idx).second)
    throw std::invalid_argument("duplicate node id " + std::to_string(label.id));
  nodes_.push_back(label);
  adj_.emplace_back();
  return idx;
}

int StreetGraph::add_edge(const GraphEdge& e) {
  const int idx = edge_count();
  edges_.push_back(e);
  adj_[e.a].emplace_back(idx, e.b);
  adj_[e.b].emplace_back(idx, e.a);
  return idx;
}

int StreetGraph::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("node " + std::to_string(id) + " not in graph");
  return it->second;
}

ShortestPaths dijkstra(const StreetGraph& g, int source) {
  const double inf = std::numeric_limits<double>::infinity();
  ShortestPaths sp{std::vector<double>(g.node_count(), inf), std::vector<int>(g.node_count(), -1)};
  using Item = std::tuple<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  sp.dist[source] = 0.0;
  pq.emplace(0.0, source);
  std::vector<char> done(g.node_count(), 0);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (auto [edge, v] : g.adjacent(u)) {
      if (done[v]) continue;
      const double nd = d + g.edge_at(edge).length_m;
      if (nd < sp.dist[v]) {
        sp.dist[v] = nd;
        sp.pred_edge[v] = edge;
        pq.emplace(nd, v);
      }
    }
  }
  return sp;
}

}  // namespace tandem
