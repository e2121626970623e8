#include "tandem/timeline.hpp"

#include <algorithm>

namespace tandem {

double distance_into_edge(const EdgeKinematics& k, double tau, const TruckParams& truck) {
  const double ua = truck.accel_input;
  const double ub = -truck.brake_input;
  tau = std::clamp(tau, 0.0, k.total_time());
  if (tau <= k.accel_time) return 0.5 * ua * tau * tau;
  tau -= k.accel_time;
  if (tau <= k.cruise_time) return k.accel_dist + k.cruise_speed * tau;
  tau -= k.cruise_time;
  tau = std::min(tau, k.decel_time);
  return k.accel_dist + k.cruise_dist + k.peak_speed * tau - 0.5 * ub * tau * tau;
}

namespace {

double speed_into_edge(const EdgeKinematics& k, double tau, const TruckParams& truck) {
  tau = std::clamp(tau, 0.0, k.total_time());
  if (tau <= k.accel_time) return k.accel_time > 0.0 ? truck.accel_input * tau : k.peak_speed;
  tau -= k.accel_time;
  if (tau <= k.cruise_time) return k.cruise_speed;
  tau -= k.cruise_time;
  return std::max(0.0, k.peak_speed + truck.brake_input * tau);
}

}  // namespace

TruckTimeline build_timeline(const RoutePlan& plan, const Instance& inst, const TransformedGraph& xf,
                             const TimelineConfig& config) {
  TruckTimeline tl;
  tl.trace = expand_route(plan.route, xf);
  tl.truck = inst.truck;
  const StreetGraph& g = xf.graph();
  const double deck = inst.truck.deck_height_m;
  auto deck_pos = [&](int node) {
    Vec3 p = g.node_at(node).position;
    p.z = deck;
    return p;
  };

  double t = 0.0;
  for (int si = 0; si < static_cast<int>(tl.trace.steps.size()); ++si) {
    const RouteStep& s = tl.trace.steps[si];
    const GraphEdge& e = g.edge_at(s.edge);
    TimelineSegment seg;
    seg.step = si;
    seg.edge = s.edge;
    seg.origin = e.origin;
    seg.length_m = e.length_m;
    seg.speed_mps = e.speed_mps;
    seg.stop_at_start = s.stop_at_start;
    seg.stop_at_end = s.stop_at_end;
    seg.kin = edge_kinematics(e.length_m, e.speed_mps, s.stop_at_start, s.stop_at_end, inst.truck);
    seg.from = deck_pos(s.from);
    seg.to = deck_pos(s.to);
    seg.enter = t;
    t += seg.kin.total_time();
    seg.exit = t;
    tl.step_segment.push_back(static_cast<int>(tl.segments.size()));
    tl.segments.push_back(seg);

    const bool last = si + 1 == static_cast<int>(tl.trace.steps.size());
    if (s.stop_at_end && !last && config.service_time_s > 0.0) {
      TimelineSegment dwell;
      dwell.from = dwell.to = seg.to;
      dwell.enter = t;
      t += config.service_time_s;
      dwell.exit = t;
      tl.segments.push_back(dwell);
    }
  }
  return tl;
}

int TruckTimeline::segment_at(double t) const {
  if (segments.empty()) return -1;
  auto it = std::upper_bound(segments.begin(), segments.end(), t,
                             [](double v, const TimelineSegment& s) { return v < s.exit; });
  if (it == segments.end()) return static_cast<int>(segments.size()) - 1;
  return static_cast<int>(it - segments.begin());
}

Vec3 TruckTimeline::position(double t) const {
  const int i = segment_at(t);
  if (i < 0) return {};
  const TimelineSegment& s = segments[i];
  if (s.edge < 0) return s.from;
  const double frac = std::clamp(distance_into_edge(s.kin, t - s.enter, truck) / s.length_m, 0.0, 1.0);
  return {s.from.x + frac * (s.to.x - s.from.x), s.from.y + frac * (s.to.y - s.from.y), s.from.z};
}

double TruckTimeline::speed(double t) const {
  const int i = segment_at(t);
  if (i < 0 || segments[i].edge < 0) return 0.0;
  return speed_into_edge(segments[i].kin, t - segments[i].enter, truck);
}

std::vector<Pass> TruckTimeline::passes(const TransformedGraph& xf, NodeId rendezvous) const {
  std::vector<Pass> out;
  const RendezvousNode* r = xf.rendezvous(rendezvous);
  auto it = trace.visits.find(rendezvous);
  if (!r || it == trace.visits.end()) return out;
  const auto& steps = trace.steps;
  const int n = static_cast<int>(steps.size());
  const StreetGraph& g = xf.graph();
  auto on_host = [&](int step) { return step >= 0 && step < n && g.edge_at(steps[step].edge).origin == r->host_edge; };

  for (int p : it->second) {
    int first = on_host(p - 1) ? p - 1 : p;
    int last = on_host(p) ? p : p - 1;
    if (!on_host(first) && !on_host(last)) continue;
    if (!on_host(first)) first = last;
    if (!on_host(last)) last = first;
    while (on_host(first - 1)) --first;
    while (on_host(last + 1)) ++last;
    Pass pass{segments[step_segment[first]].enter, segments[step_segment[last]].exit, step_segment[first],
              step_segment[last]};
    if (out.empty() || out.back().first_segment != pass.first_segment) out.push_back(pass);
  }
  return out;
}

}  // namespace tandem
