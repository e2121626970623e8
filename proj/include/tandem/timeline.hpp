#pragma once

#include <vector>

#include "tandem/cost.hpp"
#include "tandem/plan.hpp"

namespace tandem {

/// One piece of the truck's motion: either a street edge driven with a
/// bang-bang profile or a dwell at a stop (edge == -1).
struct TimelineSegment {
  int step = -1;  // index into RouteTrace::steps, -1 for a dwell
  int edge = -1;  // G' edge index
  int origin = -1;  // input edge the G' edge belongs to
  double enter = 0.0;
  double exit = 0.0;
  double length_m = 0.0;
  double speed_mps = 0.0;  // edge speed limit
  bool stop_at_start = false;
  bool stop_at_end = false;
  EdgeKinematics kin;
  Vec3 from;
  Vec3 to;
};

/// Interval during which the truck drives along the host edge of a
/// rendezvous node and passes that node.
struct Pass {
  double enter = 0.0;
  double exit = 0.0;
  int first_segment = 0;
  int last_segment = 0;
};

class TruckTimeline {
 public:
  std::vector<TimelineSegment> segments;
  RouteTrace trace;
  std::vector<int> step_segment;  // timeline segment of each route step
  TruckParams truck;

  double duration() const { return segments.empty() ? 0.0 : segments.back().exit; }
  /// Segment active at time t (clamped to the horizon).
  int segment_at(double t) const;
  /// Truck deck position at time t; continuous in t.
  Vec3 position(double t) const;
  /// Truck speed at time t.
  double speed(double t) const;
  /// Every pass of a rendezvous node in time order.
  std::vector<Pass> passes(const TransformedGraph& xf, NodeId rendezvous) const;
};

struct TimelineConfig {
  double service_time_s = 0.0;  // dwell at truck delivery stops
};

TruckTimeline build_timeline(const RoutePlan& plan, const Instance& inst, const TransformedGraph& xf,
                             const TimelineConfig& config = {});

/// Distance covered `tau` seconds into an edge with the given kinematics.
double distance_into_edge(const EdgeKinematics& k, double tau, const TruckParams& truck);

}  // namespace tandem
