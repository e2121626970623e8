#include "tandem/route_ga.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include "tandem/rng.hpp"

namespace tandem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Insertion {
  double cost = kInf;
  NodeId a = 0, b = 0;
  int pos_a = -1, pos_b = -1;  // insert after route[pos]
};

// Cheapest way to add sortie endpoints a (before) and b to the route.
Insertion best_insertion(const std::vector<int>& midx, const TransformedGraph& xf, NodeId a, NodeId b) {
  const int n = static_cast<int>(midx.size());
  const int ia = xf.mission_index(a);
  const int ib = xf.mission_index(b);
  auto D = [&](int i, int j) { return xf.dist_at(i, j); };
  Insertion best;
  if (a == b) {
    for (int p = 0; p + 1 < n; ++p) {
      const double c = D(midx[p], ia) + D(ia, midx[p + 1]) - D(midx[p], midx[p + 1]);
      if (c < best.cost) best = {c, a, b, p, p};
    }
    return best;
  }
  double prefix = kInf;
  int prefix_at = -1;
  for (int q = 0; q + 1 < n; ++q) {
    const double base = D(midx[q], midx[q + 1]);
    const double chain = D(midx[q], ia) + D(ia, ib) + D(ib, midx[q + 1]) - base;
    if (chain < best.cost) best = {chain, a, b, q, q};
    if (prefix_at >= 0) {
      const double c = prefix + D(midx[q], ib) + D(ib, midx[q + 1]) - base;
      if (c < best.cost) best = {c, a, b, prefix_at, q};
    }
    const double ins_a = D(midx[q], ia) + D(ia, midx[q + 1]) - base;
    if (ins_a < prefix) {
      prefix = ins_a;
      prefix_at = q;
    }
  }
  return best;
}

bool has_compatible(const RouteTrace& trace, const std::vector<Sortie>& list) {
  for (const Sortie& s : list)
    if (sortie_compatible(trace, s.launch, s.recover)) return true;
  return false;
}

}  // namespace

RoutePlan decode(const Chromosome& ch, const Instance& inst, const TransformedGraph& xf) {
  const auto ds = inst.ids_of(NodeClass::UavDelivery);
  std::set<NodeId> flagged;
  for (std::size_t i = 0; i < ds.size() && i < ch.by_uav.size(); ++i)
    if (ch.by_uav[i]) flagged.insert(ds[i]);

  RoutePlan plan;
  plan.route.push_back(kDepotId);
  for (NodeId id : ch.order)
    if (!flagged.count(id)) plan.route.push_back(id);
  plan.route.push_back(kDepotId);
  plan.uav_served.assign(flagged.begin(), flagged.end());

  for (NodeId d : plan.uav_served)
    if (xf.sorties(d).empty()) {
      plan.feasible = false;
      return plan;
    }

  RouteTrace trace = expand_route(plan.route, xf);
  for (NodeId d : plan.uav_served) {
    const auto& list = xf.sorties(d);
    if (has_compatible(trace, list)) continue;
    std::set<NodeId> on_route(plan.route.begin(), plan.route.end());
    std::vector<int> midx;
    for (NodeId id : plan.route) midx.push_back(xf.mission_index(id));
    Insertion best;
    for (const Sortie& s : list) {
      if (on_route.count(s.launch) || on_route.count(s.recover)) continue;
      Insertion c = best_insertion(midx, xf, s.launch, s.recover);
      if (c.cost < best.cost) best = c;
    }
    if (best.pos_a < 0) {
      plan.feasible = false;
      return plan;
    }
    auto& r = plan.route;
    if (best.a == best.b) {
      r.insert(r.begin() + best.pos_a + 1, best.a);
    } else if (best.pos_a == best.pos_b) {
      r.insert(r.begin() + best.pos_a + 1, {best.a, best.b});
    } else {
      r.insert(r.begin() + best.pos_b + 1, best.b);
      r.insert(r.begin() + best.pos_a + 1, best.a);
    }
    trace = expand_route(plan.route, xf);
  }
  return plan;
}

double plan_lower_bound(const RoutePlan& plan, const Instance& inst, const TransformedGraph& xf,
                        const TimelineConfig& timeline) {
  return evaluate_route(plan, nullptr, inst, build_timeline(plan, inst, xf, timeline)).objective;
}

BoundedEvaluator::BoundedEvaluator(const Instance& inst, const TransformedGraph& xf, const GaConfig& config,
                                   double penalty)
    : inst_(inst), xf_(xf), config_(config), penalty_(penalty), threshold_(kInf) {}

Evaluation BoundedEvaluator::evaluate(const RoutePlan& plan) {
  return evaluate(plan, plan_lower_bound(plan, inst_, xf_, config_.timeline));
}

Evaluation BoundedEvaluator::evaluate(const RoutePlan& plan, double lower_bound) {
  Key key{plan.route, plan.uav_served};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  Evaluation ev{lower_bound, lower_bound, true, true};
  if (!plan.feasible) {
    ev.feasible = false;
    ev.objective = lower_bound + penalty_;
  } else if (!plan.uav_served.empty()) {
    if (lower_bound >= threshold_) {
      ++pruned_;
      archive_.emplace(key, std::make_pair(plan, lower_bound));
      ev.exact = false;
      return ev;
    }
    return full(plan, lower_bound);
  }
  memo_.emplace(std::move(key), ev);
  return ev;
}

Evaluation BoundedEvaluator::full(const RoutePlan& plan, double lower_bound) {
  ++schedule_calls_;
  const TruckTimeline tl = build_timeline(plan, inst_, xf_, config_.timeline);
  const Schedule s = schedule(plan, tl, inst_, xf_, config_.scheduler);
  Evaluation ev{lower_bound, lower_bound, true, s.feasible};
  if (s.feasible)
    ev.objective = evaluate_route(plan, &s, inst_, tl).objective;
  else
    ev.objective = lower_bound + penalty_;
  Key key{plan.route, plan.uav_served};
  archive_.erase(key);
  memo_.emplace(std::move(key), ev);
  return ev;
}

std::vector<std::pair<RoutePlan, Evaluation>> BoundedEvaluator::replay() {
  std::vector<std::pair<RoutePlan, double>> due;
  for (const auto& [key, entry] : archive_)
    if (entry.second < threshold_) due.push_back(entry);
  std::vector<std::pair<RoutePlan, Evaluation>> out;
  for (const auto& [plan, lb] : due) out.emplace_back(plan, full(plan, lb));
  return out;
}

namespace {

struct Decoded {
  std::vector<RoutePlan> plans;
  std::vector<double> bounds;
};

Decoded decode_batch(const std::vector<Chromosome>& pop, const Instance& inst, const TransformedGraph& xf,
                     const TimelineConfig& timeline, Exec exec) {
  const long n = static_cast<long>(pop.size());
  Decoded out;
  out.plans.resize(n);
  out.bounds.resize(n);
  auto work = [&](long i) {
    out.plans[i] = decode(pop[i], inst, xf);
    out.bounds[i] = plan_lower_bound(out.plans[i], inst, xf, timeline);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) work(i);
  } else {
    for (long i = 0; i < n; ++i) work(i);
  }
  return out;
}

// Nearest neighbour over closure distances, then 2-opt.
std::vector<NodeId> greedy_order(const std::vector<NodeId>& nodes, const TransformedGraph& xf) {
  std::vector<NodeId> order;
  std::vector<bool> used(nodes.size(), false);
  NodeId cur = kDepotId;
  for (std::size_t step = 0; step < nodes.size(); ++step) {
    int best = -1;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (!used[i] && (best < 0 || xf.distance(cur, nodes[i]) < xf.distance(cur, nodes[best])))
        best = static_cast<int>(i);
    used[best] = true;
    cur = nodes[best];
    order.push_back(cur);
  }
  std::vector<NodeId> tour{kDepotId};
  tour.insert(tour.end(), order.begin(), order.end());
  tour.push_back(kDepotId);
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 1; i + 1 < tour.size(); ++i)
      for (std::size_t j = i + 1; j + 1 < tour.size(); ++j) {
        const double before = xf.distance(tour[i - 1], tour[i]) + xf.distance(tour[j], tour[j + 1]);
        const double after = xf.distance(tour[i - 1], tour[j]) + xf.distance(tour[i], tour[j + 1]);
        if (after < before - 1e-9) {
          std::reverse(tour.begin() + i, tour.begin() + j + 1);
          improved = true;
        }
      }
  }
  return {tour.begin() + 1, tour.end() - 1};
}

class RouteSearch {
 public:
  RouteSearch(const Instance& inst, const TransformedGraph& xf, const GaConfig& config, BoundedEvaluator& eval,
              std::uint64_t stream, bool allow_uav)
      : inst_(inst),
        xf_(xf),
        config_(config),
        eval_(eval),
        rng_(mix_seed(config.seed ^ stream)),
        allow_uav_(allow_uav),
        ds_(inst.ids_of(NodeClass::UavDelivery)) {
    for (std::size_t i = 0; i < ds_.size(); ++i)
      if (allow_uav_ && !xf.sorties(ds_[i]).empty()) eligible_.push_back(static_cast<int>(i));
    for (NodeId h : inst.ids_of(NodeClass::TruckDelivery)) deliveries_.push_back(h);
    deliveries_.insert(deliveries_.end(), ds_.begin(), ds_.end());
  }

  Chromosome random_chromosome() {
    Chromosome ch{deliveries_, std::vector<std::uint8_t>(ds_.size(), 0)};
    for (std::size_t i = ch.order.size(); i > 1; --i) std::swap(ch.order[i - 1], ch.order[rng_.index(i)]);
    for (int i : eligible_) ch.by_uav[i] = rng_.chance(0.5);
    return ch;
  }

  Chromosome greedy_chromosome(bool all_uav) {
    Chromosome ch{greedy_order(deliveries_, xf_), std::vector<std::uint8_t>(ds_.size(), 0)};
    if (all_uav)
      for (int i : eligible_) ch.by_uav[i] = 1;
    return ch;
  }

  void run(std::vector<Chromosome> seeds, double incumbent) {
    incumbent_ = incumbent;
    eval_.set_threshold(incumbent_);
    const int pop_size = std::max(2, config_.population);
    std::vector<Chromosome> pop = std::move(seeds);
    if (static_cast<int>(pop.size()) > pop_size) pop.resize(pop_size);
    while (static_cast<int>(pop.size()) < pop_size) pop.push_back(random_chromosome());
    evaluate(pop);

    int stall = 0;
    for (int gen = 0; gen < config_.generations && stall < config_.stall_limit; ++gen) {
      const double before = incumbent_;
      std::vector<int> rank(pop_.size());
      std::iota(rank.begin(), rank.end(), 0);
      std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) { return fitness_[a] < fitness_[b]; });

      std::vector<Chromosome> next;
      for (int e = 0; e < std::min(config_.elitism, pop_size); ++e) next.push_back(pop_[rank[e]]);
      while (static_cast<int>(next.size()) < pop_size) {
        const Chromosome& a = pop_[tournament()];
        const Chromosome& b = pop_[tournament()];
        Chromosome child = rng_.chance(config_.crossover_rate) ? crossover(a, b) : a;
        mutate(child);
        next.push_back(std::move(child));
      }
      evaluate(next);
      history_.push_back(incumbent_);
      if (config_.progress) *config_.progress << "gen," << gen << ",best," << incumbent_ << '\n';
      generations_ = gen + 1;
      stall = incumbent_ < before ? 0 : stall + 1;
    }
  }

  bool has_best() const { return has_best_; }
  const RoutePlan& best_plan() const { return best_plan_; }
  const Chromosome& best_chromosome() const { return best_ch_; }
  double incumbent() const { return incumbent_; }
  const std::vector<double>& history() const { return history_; }
  int generations() const { return generations_; }

 private:
  void evaluate(std::vector<Chromosome>& pop) {
    Decoded dec = decode_batch(pop, inst_, xf_, config_.timeline, config_.exec);
    const int n = static_cast<int>(pop.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dec.bounds[a] < dec.bounds[b]; });
    fitness_.assign(n, kInf);
    for (int i : order) {
      const Evaluation ev = eval_.evaluate(dec.plans[i], dec.bounds[i]);
      fitness_[i] = ev.objective;
      if (ev.exact && ev.feasible && ev.objective < best_objective_) {
        has_best_ = true;
        best_objective_ = ev.objective;
        best_plan_ = dec.plans[i];
        best_ch_ = pop[i];
        incumbent_ = std::min(incumbent_, ev.objective);
        eval_.set_threshold(incumbent_);
      }
    }
    pop_ = std::move(pop);
  }

  int tournament() {
    int best = rng_.index(pop_.size());
    for (int i = 1; i < config_.tournament; ++i) {
      const int c = rng_.index(pop_.size());
      if (fitness_[c] < fitness_[best]) best = c;
    }
    return best;
  }

  // Order crossover on the permutation, uniform crossover on the flags.
  Chromosome crossover(const Chromosome& a, const Chromosome& b) {
    const int n = static_cast<int>(a.order.size());
    Chromosome child{std::vector<NodeId>(n, 0), a.by_uav};
    if (n > 0) {
      int i = rng_.index(n), j = rng_.index(n);
      if (i > j) std::swap(i, j);
      std::set<NodeId> taken(a.order.begin() + i, a.order.begin() + j + 1);
      std::copy(a.order.begin() + i, a.order.begin() + j + 1, child.order.begin() + i);
      int w = (j + 1) % n;
      for (int k = 0; k < n; ++k) {
        const NodeId id = b.order[(j + 1 + k) % n];
        if (taken.count(id)) continue;
        child.order[w] = id;
        w = (w + 1) % n;
      }
    }
    for (int f : eligible_)
      if (rng_.chance(0.5)) child.by_uav[f] = b.by_uav[f];
    return child;
  }

  void mutate(Chromosome& ch) {
    const int n = static_cast<int>(ch.order.size());
    if (n > 1 && rng_.chance(std::min(1.0, config_.mutation_rate * n))) {
      int i = rng_.index(n), j = rng_.index(n);
      if (i > j) std::swap(i, j);
      std::reverse(ch.order.begin() + i, ch.order.begin() + j + 1);
    }
    for (int f : eligible_)
      if (rng_.chance(config_.mutation_rate)) ch.by_uav[f] ^= 1;
  }

  const Instance& inst_;
  const TransformedGraph& xf_;
  const GaConfig& config_;
  BoundedEvaluator& eval_;
  Rng rng_;
  bool allow_uav_;
  std::vector<NodeId> ds_;
  std::vector<int> eligible_;
  std::vector<NodeId> deliveries_;

  std::vector<Chromosome> pop_;
  std::vector<double> fitness_;
  double incumbent_ = kInf;
  bool has_best_ = false;
  double best_objective_ = kInf;
  RoutePlan best_plan_;
  Chromosome best_ch_;
  std::vector<double> history_;
  int generations_ = 0;
};

}  // namespace

std::vector<double> population_lower_bounds(const std::vector<Chromosome>& pop, const Instance& inst,
                                            const TransformedGraph& xf, const TimelineConfig& timeline, Exec exec) {
  return decode_batch(pop, inst, xf, timeline, exec).bounds;
}

SolveResult solve(const Instance& inst, const TransformedGraph& xf, const GaConfig& config) {
  SolveResult out;

  BoundedEvaluator truck_eval(inst, xf, config, 0.0);
  RouteSearch truck(inst, xf, config, truck_eval, 0x7275636bULL, false);
  truck.run({truck.greedy_chromosome(false)}, kInf);
  out.unassisted_plan = truck.best_plan();
  out.unassisted_objective = truck.incumbent();

  RoutePlan best = out.unassisted_plan;
  if (config.unassisted || inst.ids_of(NodeClass::UavDelivery).empty()) {
    out.history = truck.history();
    out.generations = truck.generations();
  } else {
    BoundedEvaluator eval(inst, xf, config, config.penalty_factor * out.unassisted_objective);
    RouteSearch assisted(inst, xf, config, eval, 0x75617673ULL, true);
    std::vector<Chromosome> seeds{truck.best_chromosome(), assisted.greedy_chromosome(true)};
    Chromosome warm = truck.best_chromosome();
    warm.by_uav = seeds[1].by_uav;
    seeds.push_back(warm);
    assisted.run(std::move(seeds), out.unassisted_objective);
    if (assisted.has_best() && assisted.incumbent() < out.unassisted_objective) best = assisted.best_plan();
    out.history = assisted.history();
    out.generations = assisted.generations();
    out.schedule_calls = eval.schedule_calls();
    out.pruned = eval.pruned();
  }

  out.plan = best;
  const TruckTimeline tl = build_timeline(best, inst, xf, config.timeline);
  out.schedule = schedule(best, tl, inst, xf, config.scheduler);
  out.evaluation = evaluate_route(best, &out.schedule, inst, tl);
  return out;
}

}  // namespace tandem
