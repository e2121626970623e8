#pragma once

#include <map>
#include <vector>

#include "tandem/model.hpp"
#include "tandem/parallel.hpp"
#include "tandem/street_graph.hpp"

namespace tandem {

struct RendezvousNode {
  NodeId id = 0;
  int host_edge = -1;  // index into Instance::edges
  double edge_param = 0.0;  // position along host edge, u -> v
  Vec3 position;
  std::vector<NodeId> serves;  // UAV deliveries whose radius query created it

  friend bool operator==(const RendezvousNode&, const RendezvousNode&) = default;
};

struct Sortie {
  NodeId launch = 0;
  NodeId delivery = 0;
  NodeId recover = 0;
  int best_uav = -1;  // fleet index with the lowest total energy among feasible UAVs
  double outbound_j = 0.0;
  double return_j = 0.0;
  double total_j = 0.0;
  std::vector<int> feasible_uavs;  // fleet indices whose battery covers this sortie

  friend bool operator==(const Sortie&, const Sortie&) = default;
};

struct XformConfig {
  double merge_distance_m = 1.0;
  /// Rendezvous nodes are kept at least this far from a host edge's endpoints
  /// so that splitting never produces a zero-length piece.
  double endpoint_margin_m = 2.0;
  int samples_per_edge = 1;
};

/// G' (the rendezvous-augmented street graph) plus the created rendezvous nodes.
struct AugmentedGraph {
  StreetGraph graph;
  std::vector<RendezvousNode> rendezvous;  // sorted by id
  std::map<NodeId, double> rmax_by_delivery;
};

/// Metric closure over depot, deliveries and rendezvous nodes, with the street
/// path realizing every entry.
class TransformedGraph {
 public:
  AugmentedGraph augmented;
  std::vector<NodeId> mission;          // depot first, then ascending id
  std::vector<double> dist;             // mission.size()^2, row-major
  std::vector<std::vector<int>> paths;  // G' node indices from i to j, row-major
  std::map<NodeId, std::vector<Sortie>> sorties_by_delivery;

  int size() const { return static_cast<int>(mission.size()); }
  int mission_index(NodeId id) const;
  bool is_mission(NodeId id) const { return id >= 0 && id < id_bound() && index_[id] >= 0; }
  /// One past the largest node id in G'.
  int id_bound() const { return static_cast<int>(index_.size()); }
  double distance(NodeId a, NodeId b) const { return dist[mission_index(a) * size() + mission_index(b)]; }
  double dist_at(int i, int j) const { return dist[i * size() + j]; }
  const std::vector<int>& path_at(int i, int j) const { return paths[i * size() + j]; }
  const StreetGraph& graph() const { return augmented.graph; }
  const RendezvousNode* rendezvous(NodeId id) const;
  const std::vector<Sortie>& sorties(NodeId delivery) const;

  void build_index();

 private:
  std::vector<int> index_;  // by node id, -1 when absent
  std::vector<int> rendezvous_index_;
};

/// Splits street edges at the point closest to each UAV delivery that lies
/// within that delivery's flight radius. Only through-street edges (both
/// endpoints street or depot) host rendezvous nodes.
AugmentedGraph insert_rendezvous_nodes(const Instance& inst, const XformConfig& config = {});

/// Every ordered rendezvous pair (a, b), a == b allowed, that at least one UAV
/// can fly a -> delivery -> b within its battery. Sorted by (launch, recover).
std::map<NodeId, std::vector<Sortie>> enumerate_sorties(const AugmentedGraph& aug, const Instance& inst,
                                                        Exec exec = Exec::Parallel);

/// All-pairs shortest street paths between mission nodes.
/// Throws InfeasibleError naming a mission node the depot cannot reach.
TransformedGraph metric_closure(AugmentedGraph aug, Exec exec = Exec::Parallel);

/// insert_rendezvous_nodes -> metric_closure -> enumerate_sorties.
TransformedGraph transform(const Instance& inst, const XformConfig& config = {}, Exec exec = Exec::Parallel);

json to_json(const TransformedGraph& xf);

}  // namespace tandem
