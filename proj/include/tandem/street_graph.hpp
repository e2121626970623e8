#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "tandem/model.hpp"

namespace tandem {

/// Undirected street graph with index-based adjacency. Used for both the
/// input graph and the rendezvous-augmented graph; every edge remembers which
/// input edge it is a piece of and which parameter span it covers.
struct GraphEdge {
  int a = 0;  // node index
  int b = 0;  // node index
  double length_m = 0.0;
  double speed_mps = 0.0;
  int origin = -1;  // index into Instance::edges
  double s_a = 0.0;  // parameter of node a along the origin edge (origin.u -> origin.v)
  double s_b = 1.0;

  int other(int node) const { return node == a ? b : a; }
};

class StreetGraph {
 public:
  static StreetGraph from_instance(const Instance& inst);

  int add_node(const NodeLabel& label);
  int add_edge(const GraphEdge& e);

  const std::vector<NodeLabel>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const NodeLabel& node_at(int index) const { return nodes_[index]; }
  const GraphEdge& edge_at(int index) const { return edges_[index]; }
  /// (edge index, neighbour index) pairs.
  const std::vector<std::pair<int, int>>& adjacent(int index) const { return adj_[index]; }

  int index_of(NodeId id) const;
  bool contains(NodeId id) const { return index_.count(id) != 0; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

 private:
  std::vector<NodeLabel> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::unordered_map<NodeId, int> index_;
};

struct ShortestPaths {
  std::vector<double> dist;     // per node index; +inf when unreachable
  std::vector<int> pred_edge;   // edge used to reach the node, -1 for the source
};

/// Dijkstra from one source. Ties are broken towards the lower node index so the
/// tree is identical across runs.
ShortestPaths dijkstra(const StreetGraph& g, int source);

}  // namespace tandem
