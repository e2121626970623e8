#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "tandem/evaluate.hpp"
#include "tandem/parallel.hpp"
#include "tandem/plan.hpp"
#include "tandem/scheduler.hpp"

namespace tandem {

/// Visiting order over every delivery plus a truck/UAV flag per UAV-class
/// delivery. Flagged deliveries drop out of the truck route when decoded.
struct Chromosome {
  std::vector<NodeId> order;    // permutation of H and D ids
  std::vector<std::uint8_t> by_uav;  // one flag per D, in ascending D order

  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

struct GaConfig {
  int population = 200;
  int generations = 500;
  double crossover_rate = 0.9;
  double mutation_rate = 0.05;
  int tournament = 4;
  int elitism = 2;
  int stall_limit = 100;
  std::uint64_t seed = 1;
  double penalty_factor = 10.0;  // times the unassisted objective
  bool unassisted = false;       // skip the UAV phase
  SchedulerConfig scheduler;
  TimelineConfig timeline;
  Exec exec = Exec::Parallel;
  std::ostream* progress = nullptr;  // receives gen,<n>,best,<obj> lines
};

/// Depot + truck-served deliveries in chromosome order + depot. When a
/// UAV-served delivery has no sortie the route passes in order, the
/// rendezvous pair with the cheapest detour is inserted. A flagged delivery
/// without any sortie makes the plan infeasible. Candidate sorties are left
/// for the scheduler to derive.
RoutePlan decode(const Chromosome& ch, const Instance& inst, const TransformedGraph& xf);

struct Evaluation {
  double lower_bound = 0.0;
  double objective = 0.0;  // equals lower_bound when deferred
  bool exact = false;      // objective includes the UAV schedule
  bool feasible = true;
};

/// Truck-only objective of a plan: a lower bound for every UAV schedule on it.
double plan_lower_bound(const RoutePlan& plan, const Instance& inst, const TransformedGraph& xf,
                        const TimelineConfig& timeline = {});

/// Lazy plan evaluation. Plans whose lower bound reaches the threshold are
/// archived without scheduling; replay() schedules archived plans once the
/// threshold has risen past their bound.
class BoundedEvaluator {
 public:
  BoundedEvaluator(const Instance& inst, const TransformedGraph& xf, const GaConfig& config, double penalty);

  void set_threshold(double t) { threshold_ = t; }
  double threshold() const { return threshold_; }
  void set_penalty(double p) { penalty_ = p; }

  /// Evaluation given a precomputed lower bound.
  Evaluation evaluate(const RoutePlan& plan, double lower_bound);
  Evaluation evaluate(const RoutePlan& plan);

  /// Schedules archived plans whose bound is now below the threshold.
  std::vector<std::pair<RoutePlan, Evaluation>> replay();

  std::size_t archived() const { return archive_.size(); }
  long schedule_calls() const { return schedule_calls_; }
  long pruned() const { return pruned_; }

 private:
  using Key = std::pair<std::vector<NodeId>, std::vector<NodeId>>;
  Evaluation full(const RoutePlan& plan, double lower_bound);

  const Instance& inst_;
  const TransformedGraph& xf_;
  GaConfig config_;
  double penalty_;
  double threshold_ = 0.0;
  std::map<Key, Evaluation> memo_;
  std::map<Key, std::pair<RoutePlan, double>> archive_;
  long schedule_calls_ = 0;
  long pruned_ = 0;
};

struct SolveResult {
  RoutePlan plan;
  Schedule schedule;
  RouteEvaluation evaluation;
  RoutePlan unassisted_plan;
  double unassisted_objective = 0.0;
  std::vector<double> history;  // best objective per generation, UAV phase (or truck phase if unassisted)
  int generations = 0;
  long schedule_calls = 0;
  long pruned = 0;
};

/// Two phases with the same seed: a truck-only search, then the assisted
/// search seeded with the truck-only winner, so the assisted result is never
/// worse than the unassisted one.
SolveResult solve(const Instance& inst, const TransformedGraph& xf, const GaConfig& config = {});

/// Lower bounds of a batch of chromosomes; the OpenMP kernel and the serial
/// reference fill the same index-ordered buffer.
std::vector<double> population_lower_bounds(const std::vector<Chromosome>& pop, const Instance& inst,
                                            const TransformedGraph& xf, const TimelineConfig& timeline, Exec exec);

}  // namespace tandem
