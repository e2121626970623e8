#include "tandem/cost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tandem {

EdgeKinematics edge_kinematics(double d, double v, bool stop_at_start, bool stop_at_end, const TruckParams& truck) {
  if (!(d > 0.0) || !(v > 0.0)) throw std::invalid_argument("edge length and speed must be > 0");
  const double ua = truck.accel_input;
  const double ub = -truck.brake_input;  // magnitude
  EdgeKinematics k;
  const double need_a = stop_at_start ? v * v / (2.0 * ua) : 0.0;
  const double need_b = stop_at_end ? v * v / (2.0 * ub) : 0.0;

  if (need_a + need_b <= d) {
    k.peak_speed = v;
    k.accel_dist = need_a;
    k.decel_dist = need_b;
    k.accel_time = stop_at_start ? v / ua : 0.0;
    k.decel_time = stop_at_end ? v / ub : 0.0;
    k.cruise_dist = d - need_a - need_b;
    k.cruise_time = k.cruise_dist / v;
  } else {
    k.triangular = true;
    double vp;
    if (stop_at_start && stop_at_end)
      vp = std::sqrt(2.0 * d / (1.0 / ua + 1.0 / ub));
    else if (stop_at_start)
      vp = std::sqrt(2.0 * ua * d);
    else
      vp = std::sqrt(2.0 * ub * d);
    k.peak_speed = vp;
    if (stop_at_start) {
      k.accel_time = vp / ua;
      k.accel_dist = vp * vp / (2.0 * ua);
    }
    if (stop_at_end) {
      k.decel_time = vp / ub;
      k.decel_dist = d - k.accel_dist;
    } else {
      k.accel_dist = d;
    }
  }
  k.cruise_speed = k.peak_speed;
  return k;
}

double truck_edge_time(double d, double v, bool stop_at_start, bool stop_at_end, const TruckParams& truck) {
  return edge_kinematics(d, v, stop_at_start, stop_at_end, truck).total_time();
}

namespace {

double drag_factor(double mass, const TruckParams& t) {
  return t.drag_coeff * t.air_density * t.frontal_area_m2 / (2.0 * mass);
}

// Closed form of the clamped acceleration integral; valid when the idle
// polynomial is non-negative for v >= 0 (all coefficients >= 0).
double accel_fuel_closed(double v_end, double mass, const TruckParams& t) {
  const double a0 = t.accel_input - t.rolling_friction * t.gravity;
  if (a0 <= 0.0 || v_end <= 0.0) return 0.0;
  const double k = drag_factor(mass, t);
  const double v_star = k > 0.0 ? std::sqrt(a0 / k) : v_end;
  const double v = std::min(v_end, v_star);
  const auto& c = t.idle_coeffs;
  const double v2 = v * v;
  const double v3 = v2 * v;
  const double antider = a0 * c[0] * v + a0 * c[1] * v2 / 2.0 + (a0 * c[2] - k * c[0]) * v3 / 3.0 -
                         k * c[1] * v2 * v2 / 4.0 - k * c[2] * v3 * v2 / 5.0;
  // dt = dv / u_acc along the acceleration ramp.
  return antider / t.accel_input;
}

double equivalent_accel(double v, double mass, const TruckParams& t) {
  return -drag_factor(mass, t) * v * v - t.rolling_friction * t.gravity + t.accel_input;
}

double accel_fuel(double v_end, double mass, const TruckParams& t) {
  const auto& c = t.idle_coeffs;
  if (c[0] >= 0.0 && c[1] >= 0.0 && c[2] >= 0.0) return accel_fuel_closed(v_end, mass, t);
  return accel_fuel_trapezoid(v_end, mass, t);
}

double cruise_rate(double v, const TruckParams& t) {
  const auto& b = t.cruise_coeffs;
  return std::max(0.0, b[0] + b[1] * v + b[2] * v * v + b[3] * v * v * v);
}

}  // namespace

double accel_fuel_trapezoid(double v_end, double mass, const TruckParams& t, double dt) {
  if (v_end <= 0.0) return 0.0;
  const auto& c = t.idle_coeffs;
  auto rate = [&](double v) {
    return std::max(0.0, equivalent_accel(v, mass, t) * (c[0] + c[1] * v + c[2] * v * v));
  };
  const double duration = v_end / t.accel_input;
  const auto steps = static_cast<long>(std::ceil(duration / dt));
  const double h = duration / static_cast<double>(steps);
  double sum = 0.5 * (rate(0.0) + rate(v_end));
  for (long i = 1; i < steps; ++i) sum += rate(t.accel_input * h * static_cast<double>(i));
  return sum * h;
}

TruckEnergy truck_edge_energy(double d, double v, double mass, bool stop_at_start, bool stop_at_end,
                              const TruckParams& truck) {
  const EdgeKinematics k = edge_kinematics(d, v, stop_at_start, stop_at_end, truck);
  TruckEnergy e;
  if (stop_at_start) e.accel_ml = accel_fuel(k.peak_speed, mass, truck);
  e.cruise_ml = cruise_rate(k.cruise_speed, truck) * k.cruise_time;
  return e;
}

double docked_uav_marginal_ml(double d, double v, double truck_mass, double extra_mass, bool stop_at_start,
                              bool stop_at_end, const TruckParams& truck) {
  const double with = truck_edge_energy(d, v, truck_mass + extra_mass, stop_at_start, stop_at_end, truck).total_ml();
  const double without = truck_edge_energy(d, v, truck_mass, stop_at_start, stop_at_end, truck).total_ml();
  return std::max(0.0, with - without);
}

// ---------------------------------------------------------------------------

namespace {

void check_mass(const UavParams& uav, double mass) {
  if (!(mass >= uav.empty_mass_kg)) throw std::invalid_argument("UAV mass below its empty mass");
}

double vertical_power(const UavParams& uav, double weight, double speed) {
  const double half = speed / 2.0;
  return uav.d[1] * std::pow(weight, 1.5) +
         uav.k1 * weight * (half + std::sqrt(half * half + weight / (uav.k2 * uav.k2)));
}

}  // namespace

double ascend_energy(const UavParams& uav, double mass, double rise, double g) {
  check_mass(uav, mass);
  if (rise < 0.0) throw std::invalid_argument("ascend leg needs z_to >= z_from");
  if (rise == 0.0) return 0.0;
  return rise / uav.ascent_mps * vertical_power(uav, mass * g, uav.ascent_mps);
}

double descend_energy(const UavParams& uav, double mass, double drop, double g) {
  check_mass(uav, mass);
  if (drop > 0.0) throw std::invalid_argument("descend leg needs z_to <= z_from");
  if (drop == 0.0) return 0.0;
  // Both the drop and V_d are negative, so the duration is positive.
  return drop / uav.descent_mps * vertical_power(uav, mass * g, uav.descent_mps);
}

double transverse_power(const UavParams& uav, double mass, double speed, double g) {
  check_mass(uav, mass);
  const double along = speed * std::cos(uav.attack_angle_rad);
  const double lift_deficit = mass * g - uav.d[4] * along * along;
  const double drag = uav.d[3] * speed * speed;
  const double thrust = std::sqrt(lift_deficit * lift_deficit + drag * drag);
  const double t15 = std::pow(thrust, 1.5);
  const double hover = uav.d[0] * t15;
  const double parasite = uav.d[3] * speed * speed * speed;
  const double profile = uav.d[1] * t15 + uav.d[2] * along * along * std::sqrt(thrust);
  return hover + parasite + profile;
}

double transverse_energy(const UavParams& uav, double mass, double distance, double g) {
  if (distance < 0.0) throw std::invalid_argument("horizontal distance must be >= 0");
  if (distance == 0.0) {
    check_mass(uav, mass);
    return 0.0;
  }
  return transverse_power(uav, mass, uav.cruise_mps, g) * distance / uav.cruise_mps;
}

double uav_leg_energy(UavLeg leg, const UavParams& uav, double mass, double horizontal, double z_from, double z_to,
                      double g) {
  switch (leg) {
    case UavLeg::Ascend: return ascend_energy(uav, mass, z_to - z_from, g);
    case UavLeg::Descend: return descend_energy(uav, mass, z_to - z_from, g);
    case UavLeg::Transverse: return transverse_energy(uav, mass, horizontal, g);
  }
  return 0.0;
}

SortieEnergy uav_sortie_energy(const SortieGeometry& geo, const UavParams& uav, double package, double g) {
  const double z = uav.cruise_altitude_m;
  const double loaded = uav.empty_mass_kg + package;
  const double empty = uav.empty_mass_kg;
  SortieEnergy e;
  e.outbound_j = ascend_energy(uav, loaded, z - geo.launch.z, g) +
                 transverse_energy(uav, loaded, horizontal_distance(geo.launch, geo.delivery), g) +
                 descend_energy(uav, loaded, geo.delivery.z - z, g);
  e.return_j = ascend_energy(uav, empty, z - geo.delivery.z, g) +
               transverse_energy(uav, empty, horizontal_distance(geo.delivery, geo.recover), g) +
               descend_energy(uav, empty, geo.recover.z - z, g);
  e.total_j = e.outbound_j + e.return_j;
  return e;
}

double outbound_flight_time(const SortieGeometry& geo, const UavParams& uav) {
  const double z = uav.cruise_altitude_m;
  return (z - geo.launch.z) / uav.ascent_mps + horizontal_distance(geo.launch, geo.delivery) / uav.cruise_mps +
         (geo.delivery.z - z) / uav.descent_mps;
}

double return_flight_time(const SortieGeometry& geo, const UavParams& uav) {
  const double z = uav.cruise_altitude_m;
  return (z - geo.delivery.z) / uav.ascent_mps + horizontal_distance(geo.delivery, geo.recover) / uav.cruise_mps +
         (geo.recover.z - z) / uav.descent_mps;
}

double max_feasible_distance(const std::function<double(double)>& energy, double budget, double tolerance) {
  if (energy(0.0) > budget) return 0.0;
  constexpr double kCeiling = 1e9;
  double lo = 0.0;
  double hi = 1.0;
  while (energy(hi) <= budget) {
    lo = hi;
    hi *= 2.0;
    if (hi > kCeiling) return lo;
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (energy(mid) <= budget)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double compute_rmax(const UavParams& uav, double payload, double deck_z, double delivery_z, double g) {
  auto energy = [&](double r) {
    SortieGeometry geo{{0.0, 0.0, deck_z}, {r, 0.0, delivery_z}, {0.0, 0.0, deck_z}};
    return uav_sortie_energy(geo, uav, payload, g).total_j;
  };
  return max_feasible_distance(energy, uav.battery_j);
}

}  // namespace tandem
