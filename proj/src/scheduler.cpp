#include "tandem/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tandem/rng.hpp"

namespace tandem {

namespace {

constexpr double kInterceptTol = 1e-6;
constexpr int kInterceptSamples = 16;

bool overlaps(double s1, double f1, double s2, double f2) { return !(f1 < s2 || f2 < s1); }

}  // namespace

std::vector<double> Job::launch_slots(int slots) const {
  const double lo = launch_pass.enter;
  const double hi = launch_pass.exit;
  if (slots <= 1 || hi <= lo) return {slots <= 1 ? 0.5 * (lo + hi) : lo};
  std::vector<double> out(slots);
  for (int i = 0; i < slots; ++i) out[i] = lo + (hi - lo) * i / (slots - 1);
  out.back() = hi;
  return out;
}

std::optional<Intercept> intercept(const TruckTimeline& timeline, const UavParams& uav, const Vec3& ready_position,
                                   double ready_time, const Pass& pass) {
  auto gap = [&](double t) {
    SortieGeometry geo{ready_position, ready_position, timeline.position(t)};
    return (t - ready_time) - return_flight_time(geo, uav);
  };
  auto bisect = [&](double bad, double good) {
    while (good - bad > kInterceptTol) {
      const double mid = 0.5 * (bad + good);
      (gap(mid) >= 0.0 ? good : bad) = mid;
    }
    return good;
  };
  auto found = [&](double t) { return Intercept{t, timeline.position(t)}; };

  // A UAV faster than the truck closes the gap monotonically, so the first
  // segment whose exit is reachable brackets the answer.
  double vmax = 0.0;
  for (int s = pass.first_segment; s <= pass.last_segment; ++s)
    vmax = std::max(vmax, timeline.segments[s].kin.peak_speed);
  const bool monotone = uav.cruise_mps > vmax;

  for (int s = pass.first_segment; s <= pass.last_segment; ++s) {
    const TimelineSegment& seg = timeline.segments[s];
    const double lo = std::max(seg.enter, ready_time);
    const double hi = seg.exit;
    if (lo > hi) continue;
    if (gap(lo) >= 0.0) return found(lo);
    if (monotone) {
      if (gap(hi) >= 0.0) return found(bisect(lo, hi));
      continue;
    }
    double prev = lo;
    for (int i = 1; i <= kInterceptSamples; ++i) {
      const double t = i == kInterceptSamples ? hi : lo + (hi - lo) * i / kInterceptSamples;
      if (gap(t) >= 0.0) return found(bisect(prev, t));
      prev = t;
    }
  }
  return std::nullopt;
}

JobCost job_cost(const Job& job, const UavParams& uav, double launch_time, const TruckTimeline& timeline,
                 const Instance& inst, double service_time_s) {
  JobCost r;
  const double g = inst.truck.gravity;
  r.launch_pos = timeline.position(launch_time);
  SortieGeometry geo{r.launch_pos, job.delivery_pos, r.launch_pos};
  const double out = uav_sortie_energy(geo, uav, job.package_kg, g).outbound_j;
  if (out > uav.battery_j) return r;
  const double ready = launch_time + outbound_flight_time(geo, uav) + service_time_s;
  for (const Pass& p : job.recover_passes) {
    if (p.exit < ready) continue;
    auto ic = intercept(timeline, uav, job.delivery_pos, ready, p);
    if (!ic) continue;
    geo.recover = ic->position;
    const SortieEnergy e = uav_sortie_energy(geo, uav, job.package_kg, g);
    if (e.total_j > uav.battery_j) continue;
    r.feasible = true;
    r.finish_time = ic->time;
    r.intercept_pos = ic->position;
    r.outbound_j = e.outbound_j;
    r.return_j = e.return_j;
    r.energy_j = e.total_j;
    r.cost_dollars = inst.weights.w2 * joules_to_kwh(e.total_j);
    return r;
  }
  return r;
}

std::size_t Schedule::job_count() const {
  std::size_t n = 0;
  for (const auto& u : per_uav) n += u.jobs.size();
  return n;
}

double Schedule::recompute_J() const {
  double total = 0.0;
  for (const auto& u : per_uav)
    for (const auto& j : u.jobs) total += j.cost_dollars;
  return total;
}

std::vector<std::vector<Job>> candidate_jobs(const RoutePlan& plan, const TruckTimeline& timeline,
                                             const Instance& inst, const TransformedGraph& xf,
                                             const SchedulerConfig& config) {
  const double deck = inst.truck.deck_height_m;
  std::vector<std::vector<Job>> out;
  for (NodeId d : plan.uav_served) {
    const NodeLabel& dn = inst.node(d);
    const auto& list = xf.sorties(d);

    // Shortest vertical-only flight any UAV could make; a window shorter
    // than this can never hold the sortie.
    double min_vertical = std::numeric_limits<double>::infinity();
    for (const auto& u : inst.uavs) {
      const double zc = u.cruise_altitude_m;
      const double t = (zc - deck) / u.ascent_mps + (dn.position.z - zc) / u.descent_mps +
                       (zc - dn.position.z) / u.ascent_mps + (deck - zc) / u.descent_mps;
      min_vertical = std::min(min_vertical, t);
    }

    std::vector<int> idx;
    auto it = plan.candidate_sorties.find(d);
    if (it != plan.candidate_sorties.end()) {
      idx = it->second;
    } else {
      for (int i = 0; i < static_cast<int>(list.size()); ++i)
        if (sortie_compatible(timeline.trace, list[i].launch, list[i].recover)) idx.push_back(i);
    }

    struct Ranked {
      int sortie;
      std::vector<Job> jobs;
    };
    std::vector<Ranked> ranked;
    for (int si : idx) {
      const Sortie& s = list[si];
      const auto launch_passes = timeline.passes(xf, s.launch);
      const auto recover_passes = timeline.passes(xf, s.recover);
      Ranked r{si, {}};
      for (const Pass& lp : launch_passes) {
        Job job;
        job.delivery = d;
        job.sortie_index = si;
        job.launch_id = s.launch;
        job.recover_id = s.recover;
        job.launch_pass = lp;
        job.package_kg = dn.package_kg;
        job.delivery_pos = dn.position;
        for (const Pass& rp : recover_passes)
          if (rp.exit > lp.enter) job.recover_passes.push_back(rp);
        if (job.recover_passes.empty()) continue;
        job.release = lp.enter;
        job.deadline = job.recover_passes.back().exit;
        if (job.deadline - job.release < min_vertical) continue;
        r.jobs.push_back(std::move(job));
      }
      if (!r.jobs.empty()) ranked.push_back(std::move(r));
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](const Ranked& a, const Ranked& b) { return list[a.sortie].total_j < list[b.sortie].total_j; });
    if (config.max_sorties_per_job > 0 && static_cast<int>(ranked.size()) > config.max_sorties_per_job)
      ranked.resize(config.max_sorties_per_job);
    std::vector<Job> jobs;
    for (auto& r : ranked)
      for (auto& j : r.jobs) jobs.push_back(std::move(j));
    out.push_back(std::move(jobs));
  }
  return out;
}

std::vector<std::vector<JobOption>> option_table(const std::vector<std::vector<Job>>& jobs,
                                                 const TruckTimeline& timeline, const Instance& inst,
                                                 const SchedulerConfig& config, Exec exec) {
  struct Item {
    int delivery, job, slot;
    double t;
  };
  std::vector<Item> items;
  for (int d = 0; d < static_cast<int>(jobs.size()); ++d)
    for (int j = 0; j < static_cast<int>(jobs[d].size()); ++j) {
      const auto slots = jobs[d][j].launch_slots(config.time_slots);
      for (int s = 0; s < static_cast<int>(slots.size()); ++s) items.push_back({d, j, s, slots[s]});
    }
  const int k_count = static_cast<int>(inst.uavs.size());
  const long n = static_cast<long>(items.size());
  std::vector<JobCost> cells(static_cast<std::size_t>(n) * k_count);

  auto fill = [&](long i) {
    const Item& it = items[i];
    for (int k = 0; k < k_count; ++k)
      cells[i * k_count + k] =
          job_cost(jobs[it.delivery][it.job], inst.uavs[k], it.t, timeline, inst, config.service_time_s);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) fill(i);
  } else {
    for (long i = 0; i < n; ++i) fill(i);
  }

  std::vector<std::vector<JobOption>> table(jobs.size());
  for (long i = 0; i < n; ++i)
    for (int k = 0; k < k_count; ++k) {
      const JobCost& c = cells[i * k_count + k];
      if (c.feasible) table[items[i].delivery].push_back({k, items[i].job, items[i].slot, items[i].t, c});
    }
  return table;
}

namespace {

bool option_less(const JobOption& a, const JobOption& b) {
  if (a.result.cost_dollars != b.result.cost_dollars) return a.result.cost_dollars < b.result.cost_dollars;
  if (a.t_launch != b.t_launch) return a.t_launch < b.t_launch;
  if (a.uav != b.uav) return a.uav < b.uav;
  if (a.job != b.job) return a.job < b.job;
  return a.slot < b.slot;
}

/// Drops options that another option of the same UAV beats on cost while
/// occupying a sub-interval of its time. Such options never improve J.
std::vector<JobOption> prune_dominated(std::vector<JobOption> opts, int uav_count) {
  std::sort(opts.begin(), opts.end(), option_less);
  std::vector<std::vector<const JobOption*>> kept(uav_count);
  std::vector<JobOption> out;
  for (const JobOption& o : opts) {
    bool dominated = false;
    for (const JobOption* k : kept[o.uav])
      if (k->t_launch >= o.t_launch && k->result.finish_time <= o.result.finish_time) {
        dominated = true;
        break;
      }
    if (dominated) continue;
    out.push_back(o);
    kept[o.uav].push_back(&o);
  }
  return out;
}

struct Placement {
  double start, finish;
};

class Occupancy {
 public:
  explicit Occupancy(int uavs) : busy_(uavs) {}
  bool fits(const JobOption& o) const {
    for (const Placement& p : busy_[o.uav])
      if (overlaps(p.start, p.finish, o.t_launch, o.result.finish_time)) return false;
    return true;
  }
  void add(const JobOption& o) { busy_[o.uav].push_back({o.t_launch, o.result.finish_time}); }
  void pop(int uav) { busy_[uav].pop_back(); }
  void clear() {
    for (auto& b : busy_) b.clear();
  }

 private:
  std::vector<std::vector<Placement>> busy_;
};

/// Depth-first search over one option per delivery; bound = partial cost +
/// cheapest remaining option of each later delivery.
class BranchAndBound {
 public:
  BranchAndBound(const std::vector<std::vector<JobOption>>& opts, int uavs) : opts_(opts), occ_(uavs) {
    order_.resize(opts.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return opts[a].size() < opts[b].size(); });
    tail_.assign(order_.size() + 1, 0.0);
    for (int i = static_cast<int>(order_.size()) - 1; i >= 0; --i)
      tail_[i] = tail_[i + 1] + opts[order_[i]].front().result.cost_dollars;
    pick_.assign(opts.size(), -1);
  }

  bool solve(std::vector<int>& best) {
    dfs(0, 0.0);
    if (best_.empty()) return false;
    best = best_;
    return true;
  }

 private:
  void dfs(std::size_t depth, double cost) {
    if (depth == order_.size()) {
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_ = pick_;
      }
      return;
    }
    const int d = order_[depth];
    const auto& list = opts_[d];
    for (int i = 0; i < static_cast<int>(list.size()); ++i) {
      const double c = cost + list[i].result.cost_dollars;
      if (c + tail_[depth + 1] >= best_cost_) break;  // sorted by cost
      if (!occ_.fits(list[i])) continue;
      occ_.add(list[i]);
      pick_[d] = i;
      dfs(depth + 1, c);
      occ_.pop(list[i].uav);
    }
    pick_[d] = -1;
  }

  const std::vector<std::vector<JobOption>>& opts_;
  Occupancy occ_;
  std::vector<int> order_;
  std::vector<double> tail_;
  std::vector<int> pick_;
  std::vector<int> best_;
  double best_cost_ = std::numeric_limits<double>::infinity();
};

/// Memetic search: genes are preferred option indices; decoding places
/// deliveries in order of preferred launch time and repairs conflicts with
/// the cheapest option that still fits.
class ScheduleGa {
 public:
  ScheduleGa(const std::vector<std::vector<JobOption>>& opts, int uavs, const SchedulerConfig& config)
      : opts_(opts), uavs_(uavs), config_(config), rng_(mix_seed(config.seed ^ 0x5c4ed01eULL)) {}

  bool solve(std::vector<int>& best) {
    const int n = static_cast<int>(opts_.size());
    const int pop_size = std::max(4, config_.population);
    std::vector<std::vector<int>> pop;
    pop.push_back(std::vector<int>(n, 0));
    while (static_cast<int>(pop.size()) < pop_size) {
      std::vector<int> g(n);
      for (int d = 0; d < n; ++d) g[d] = random_gene(d);
      pop.push_back(std::move(g));
    }
    std::vector<double> fit(pop.size());
    std::vector<std::vector<int>> decoded(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = decode(pop[i], decoded[i]);

    auto best_of = [&] { return static_cast<int>(std::min_element(fit.begin(), fit.end()) - fit.begin()); };
    double best_fit = fit[best_of()];
    int stall = 0;
    for (int gen = 0; gen < config_.generations && stall < config_.stall_limit; ++gen) {
      std::vector<int> rank(pop.size());
      std::iota(rank.begin(), rank.end(), 0);
      std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) { return fit[a] < fit[b]; });
      std::vector<std::vector<int>> next;
      for (int e = 0; e < 2; ++e) next.push_back(decoded[rank[e]]);  // elites, already repaired
      while (static_cast<int>(next.size()) < pop_size) {
        const auto& a = pop[tournament(fit)];
        const auto& b = pop[tournament(fit)];
        std::vector<int> child(n);
        for (int d = 0; d < n; ++d) {
          child[d] = rng_.chance(0.5) ? a[d] : b[d];
          if (rng_.chance(config_.mutation_rate)) child[d] = random_gene(d);
        }
        next.push_back(std::move(child));
      }
      pop = std::move(next);
      for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = decode(pop[i], decoded[i]);
      const double f = fit[best_of()];
      if (f < best_fit) {
        best_fit = f;
        stall = 0;
      } else {
        ++stall;
      }
    }
    const int b = best_of();
    if (!std::isfinite(fit[b])) return false;
    best = decoded[b];
    improve(best);
    return true;
  }

 private:
  int random_gene(int d) {
    const int size = static_cast<int>(opts_[d].size());
    // bias towards cheap options
    if (rng_.chance(0.5)) return rng_.index(std::max(1, size / 10));
    return rng_.index(size);
  }

  int tournament(const std::vector<double>& fit) {
    int best = rng_.index(fit.size());
    for (int i = 1; i < 3; ++i) {
      const int c = rng_.index(fit.size());
      if (fit[c] < fit[best]) best = c;
    }
    return best;
  }

  double decode(const std::vector<int>& genes, std::vector<int>& out) {
    const int n = static_cast<int>(genes.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return opts_[a][genes[a]].t_launch < opts_[b][genes[b]].t_launch; });
    Occupancy occ(uavs_);
    out = genes;
    double cost = 0.0;
    for (int d : order) {
      int pick = occ.fits(opts_[d][genes[d]]) ? genes[d] : -1;
      for (int i = 0; pick < 0 && i < static_cast<int>(opts_[d].size()); ++i)
        if (occ.fits(opts_[d][i])) pick = i;
      if (pick < 0) return std::numeric_limits<double>::infinity();
      occ.add(opts_[d][pick]);
      out[d] = pick;
      cost += opts_[d][pick].result.cost_dollars;
    }
    return cost;
  }

  // Re-picks each delivery's cheapest fitting option until nothing changes.
  void improve(std::vector<int>& sol) {
    const int n = static_cast<int>(sol.size());
    bool changed = true;
    while (changed) {
      changed = false;
      for (int d = 0; d < n; ++d) {
        Occupancy occ(uavs_);
        for (int o = 0; o < n; ++o)
          if (o != d) occ.add(opts_[o][sol[o]]);
        for (int i = 0; i < sol[d]; ++i)
          if (occ.fits(opts_[d][i])) {
            sol[d] = i;
            changed = true;
            break;
          }
      }
    }
  }

  const std::vector<std::vector<JobOption>>& opts_;
  int uavs_;
  SchedulerConfig config_;
  Rng rng_;
};

Schedule empty_schedule(const Instance& inst) {
  Schedule s;
  for (int k = 0; k < static_cast<int>(inst.uavs.size()); ++k) s.per_uav.push_back({k, inst.uavs[k].id, {}, 0.0});
  return s;
}

}  // namespace

Schedule assemble_schedule(const std::vector<std::vector<Job>>& jobs, const std::vector<const JobOption*>& chosen,
                           const Instance& inst, const TransformedGraph& xf) {
  (void)xf;
  Schedule s = empty_schedule(inst);
  for (std::size_t d = 0; d < chosen.size(); ++d) {
    const JobOption& o = *chosen[d];
    const Job& job = jobs[d][o.job];
    ScheduledJob sj;
    sj.delivery = job.delivery;
    sj.sortie_index = job.sortie_index;
    sj.launch_id = job.launch_id;
    sj.recover_id = job.recover_id;
    sj.t_launch = o.t_launch;
    sj.t_recover = o.result.finish_time;
    sj.launch_pos = o.result.launch_pos;
    sj.intercept_pos = o.result.intercept_pos;
    sj.outbound_j = o.result.outbound_j;
    sj.return_j = o.result.return_j;
    sj.energy_j = o.result.energy_j;
    sj.cost_dollars = o.result.cost_dollars;
    s.per_uav[o.uav].jobs.push_back(sj);
  }
  for (auto& u : s.per_uav) {
    std::stable_sort(u.jobs.begin(), u.jobs.end(),
                     [](const ScheduledJob& a, const ScheduledJob& b) { return a.t_launch < b.t_launch; });
    for (const auto& j : u.jobs) u.J += j.cost_dollars;
  }
  s.J = s.recompute_J();
  return s;
}

Schedule schedule(const RoutePlan& plan, const TruckTimeline& timeline, const Instance& inst,
                  const TransformedGraph& xf, const SchedulerConfig& config) {
  if (plan.uav_served.empty()) return empty_schedule(inst);
  const auto jobs = candidate_jobs(plan, timeline, inst, xf, config);
  auto table = option_table(jobs, timeline, inst, config, config.exec);
  const int uavs = static_cast<int>(inst.uavs.size());

  double product = 1.0;
  for (std::size_t d = 0; d < table.size(); ++d) {
    if (table[d].empty()) {
      Schedule s = empty_schedule(inst);
      s.feasible = false;
      s.reason = "delivery " + std::to_string(plan.uav_served[d]) + " has no feasible sortie";
      return s;
    }
    table[d] = prune_dominated(std::move(table[d]), uavs);
    product *= static_cast<double>(table[d].size());
  }

  std::vector<int> pick;
  bool ok;
  if (product <= static_cast<double>(config.exact_limit)) {
    ok = BranchAndBound(table, uavs).solve(pick);
  } else {
    ok = ScheduleGa(table, uavs, config).solve(pick);
  }
  if (!ok) {
    Schedule s = empty_schedule(inst);
    s.feasible = false;
    s.reason = "no conflict-free UAV assignment";
    return s;
  }
  std::vector<const JobOption*> chosen;
  for (std::size_t d = 0; d < table.size(); ++d) chosen.push_back(&table[d][pick[d]]);
  return assemble_schedule(jobs, chosen, inst, xf);
}

json to_json(const Schedule& s, const Instance& inst) {
  (void)inst;
  auto xyz = [](const Vec3& p) { return json::array({p.x, p.y, p.z}); };
  json uavs = json::array();
  for (const auto& u : s.per_uav) {
    json jobs = json::array();
    for (const auto& j : u.jobs)
      jobs.push_back({{"delivery_id", j.delivery},
                      {"sortie", {{"launch_id", j.launch_id}, {"recover_id", j.recover_id}}},
                      {"t_launch_s", j.t_launch},
                      {"t_recover_s", j.t_recover},
                      {"energy_j", j.energy_j},
                      {"outbound_j", j.outbound_j},
                      {"return_j", j.return_j},
                      {"cost_dollars", j.cost_dollars},
                      {"launch_xyz", xyz(j.launch_pos)},
                      {"intercept_xyz", xyz(j.intercept_pos)}});
    uavs.push_back({{"uav_id", u.uav_id}, {"J_dollars", u.J}, {"jobs", std::move(jobs)}});
  }
  json out{{"feasible", s.feasible}, {"J_dollars", s.J}, {"uavs", std::move(uavs)}};
  if (!s.feasible) out["reason"] = s.reason;
  return out;
}

}  // namespace tandem
