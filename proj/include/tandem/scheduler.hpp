#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tandem/parallel.hpp"
#include "tandem/plan.hpp"
#include "tandem/timeline.hpp"

namespace tandem {

struct SchedulerConfig {
  int time_slots = 64;            // launch instants per launch window
  double service_time_s = 0.0;    // UAV hover time at the delivery point
  int max_sorties_per_job = 16;   // cheapest timing-plausible sorties kept per delivery
  long exact_limit = 200000;      // solve exactly when the option product is this small
  int population = 48;
  int generations = 120;
  int stall_limit = 30;
  double mutation_rate = 0.15;
  std::uint64_t seed = 1;
  Exec exec = Exec::Parallel;
};

/// One way of serving a delivery: a sortie flown from one pass of its
/// launch node. Launch instants are discretized over [release, launch_end].
struct Job {
  NodeId delivery = 0;
  int sortie_index = -1;  // into TransformedGraph::sorties(delivery)
  NodeId launch_id = 0;
  NodeId recover_id = 0;
  Pass launch_pass;
  std::vector<Pass> recover_passes;
  double release = 0.0;   // truck enters the launch host edge
  double deadline = 0.0;  // truck leaves the last recovery pass
  double package_kg = 0.0;
  Vec3 delivery_pos;

  std::vector<double> launch_slots(int slots) const;
};

struct Intercept {
  double time = 0.0;
  Vec3 position;
};

/// Earliest t >= ready_time at which a UAV leaving `ready_position` reaches the
/// truck on `pass` (climb, straight cruise, descent to the deck).
std::optional<Intercept> intercept(const TruckTimeline& timeline, const UavParams& uav, const Vec3& ready_position,
                                   double ready_time, const Pass& pass);

struct JobCost {
  bool feasible = false;
  double cost_dollars = 0.0;
  double finish_time = 0.0;
  double energy_j = 0.0;
  double outbound_j = 0.0;
  double return_j = 0.0;
  Vec3 launch_pos;
  Vec3 intercept_pos;
};

/// Simulates one sortie launched at `launch_time`; infeasible when the battery
/// cannot cover it or the truck cannot be caught on a recovery pass.
JobCost job_cost(const Job& job, const UavParams& uav, double launch_time, const TruckTimeline& timeline,
                 const Instance& inst, double service_time_s = 0.0);

struct ScheduledJob {
  NodeId delivery = 0;
  int sortie_index = -1;
  NodeId launch_id = 0;
  NodeId recover_id = 0;
  double t_launch = 0.0;
  double t_recover = 0.0;
  Vec3 launch_pos;
  Vec3 intercept_pos;
  double outbound_j = 0.0;
  double return_j = 0.0;
  double energy_j = 0.0;
  double cost_dollars = 0.0;
};

struct UavSchedule {
  int uav_index = 0;
  int uav_id = 0;
  std::vector<ScheduledJob> jobs;  // by launch time
  double J = 0.0;
};

struct Schedule {
  bool feasible = true;
  std::string reason;
  std::vector<UavSchedule> per_uav;  // one entry per fleet member
  double J = 0.0;

  std::size_t job_count() const;
  /// Sum of per-UAV, per-job costs in fleet then launch order.
  double recompute_J() const;
};

/// Candidate jobs of every UAV-served delivery, in delivery order.
std::vector<std::vector<Job>> candidate_jobs(const RoutePlan& plan, const TruckTimeline& timeline,
                                             const Instance& inst, const TransformedGraph& xf,
                                             const SchedulerConfig& config);

/// A (uav, job, slot) assignment with its simulated cost.
struct JobOption {
  int uav = 0;
  int job = 0;
  int slot = 0;
  double t_launch = 0.0;
  JobCost result;
};

/// Every feasible option of every delivery. The OpenMP kernel and the serial
/// reference produce identical tables.
std::vector<std::vector<JobOption>> option_table(const std::vector<std::vector<Job>>& jobs,
                                                 const TruckTimeline& timeline, const Instance& inst,
                                                 const SchedulerConfig& config, Exec exec);

/// Minimizes J over UAV assignment, sortie and launch slot subject to
/// per-UAV sequencing and the per-sortie battery limit.
Schedule schedule(const RoutePlan& plan, const TruckTimeline& timeline, const Instance& inst,
                  const TransformedGraph& xf, const SchedulerConfig& config = {});

/// Builds a Schedule from one chosen option per delivery.
Schedule assemble_schedule(const std::vector<std::vector<Job>>& jobs, const std::vector<const JobOption*>& chosen,
                           const Instance& inst, const TransformedGraph& xf);

json to_json(const Schedule& s, const Instance& inst);

}  // namespace tandem
