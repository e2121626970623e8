#pragma once

#include <functional>

#include "tandem/model.hpp"

namespace tandem {

// ---------------------------------------------------------------------------
// Truck edge model (bang-bang velocity profile)

/// Phase breakdown of one street edge. Without a stop the truck holds the
/// edge speed limit; a stop at the start forces an acceleration phase from
/// rest, a stop at the end a braking phase to rest. When the edge is too short
/// to reach the limit, the profile becomes triangular with a lower peak.
struct EdgeKinematics {
  double accel_time = 0.0;
  double accel_dist = 0.0;
  double cruise_time = 0.0;
  double cruise_dist = 0.0;
  double decel_time = 0.0;
  double decel_dist = 0.0;
  double peak_speed = 0.0;
  double cruise_speed = 0.0;  // speed held between the phases (== peak_speed)
  bool triangular = false;

  double total_time() const { return accel_time + cruise_time + decel_time; }
};

EdgeKinematics edge_kinematics(double length_m, double speed_limit, bool stop_at_start, bool stop_at_end,
                               const TruckParams& truck);

double truck_edge_time(double length_m, double speed_limit, bool stop_at_start, bool stop_at_end,
                       const TruckParams& truck);

struct TruckEnergy {
  double accel_ml = 0.0;
  double cruise_ml = 0.0;
  double total_ml() const { return accel_ml + cruise_ml; }
};

/// Fuel over one edge for a truck of the given mass. Acceleration fuel integrates
/// the equivalent acceleration times the idle polynomial (negative integrand is
/// cut to zero, so braking costs nothing); cruise fuel integrates the cruise
/// polynomial at the held speed.
TruckEnergy truck_edge_energy(double length_m, double speed_limit, double mass_kg, bool stop_at_start,
                              bool stop_at_end, const TruckParams& truck);

/// Acceleration-phase fuel up to `end_speed`, integrated numerically with the
/// trapezoid rule at step `dt` seconds. Used where the closed form does not
/// apply, and by tests.
double accel_fuel_trapezoid(double end_speed, double mass_kg, const TruckParams& truck, double dt = 1e-3);

/// Extra fuel caused by carrying `extra_mass_kg` (a docked UAV) over the edge.
double docked_uav_marginal_ml(double length_m, double speed_limit, double truck_mass_kg, double extra_mass_kg,
                              bool stop_at_start, bool stop_at_end, const TruckParams& truck);

// ---------------------------------------------------------------------------
// Quadrotor energy model

enum class UavLeg { Ascend, Descend, Transverse };

double ascend_energy(const UavParams& uav, double mass_kg, double rise_m, double gravity = kStandardGravity);
/// `drop_m` is z_to - z_from and must be <= 0.
double descend_energy(const UavParams& uav, double mass_kg, double drop_m, double gravity = kStandardGravity);
/// Hover + parasite + profile power in watts at horizontal speed `speed_mps`.
double transverse_power(const UavParams& uav, double mass_kg, double speed_mps, double gravity = kStandardGravity);
double transverse_energy(const UavParams& uav, double mass_kg, double distance_m, double gravity = kStandardGravity);

/// Throws std::invalid_argument on a wrong-signed vertical leg or mass below the empty mass.
double uav_leg_energy(UavLeg leg, const UavParams& uav, double mass_kg, double horizontal_m, double z_from,
                      double z_to, double gravity = kStandardGravity);

struct SortieGeometry {
  Vec3 launch;    // truck deck at launch
  Vec3 delivery;
  Vec3 recover;   // truck deck at recovery
};

struct SortieEnergy {
  double outbound_j = 0.0;
  double return_j = 0.0;
  double total_j = 0.0;
};

/// The package rides on the outbound leg only; the return leg flies empty.
SortieEnergy uav_sortie_energy(const SortieGeometry& geo, const UavParams& uav, double package_kg,
                               double gravity = kStandardGravity);

/// Flight time from launch to touchdown at the delivery point.
double outbound_flight_time(const SortieGeometry& geo, const UavParams& uav);
/// Flight time from the delivery point to touchdown on the truck.
double return_flight_time(const SortieGeometry& geo, const UavParams& uav);

/// Largest distance R with energy(R) <= budget, assuming energy is
/// non-decreasing; bracketed by doubling then bisected to `tolerance`.
/// Returns 0 when energy(0) already exceeds the budget.
double max_feasible_distance(const std::function<double(double)>& energy, double budget, double tolerance = 1e-6);

/// Maximum one-way level-flight radius of an out-and-back sortie that fits the battery.
double compute_rmax(const UavParams& uav, double payload_kg, double deck_z, double delivery_z,
                    double gravity = kStandardGravity);

/// Joules to kWh.
inline constexpr double joules_to_kwh(double j) { return j / 3.6e6; }

}  // namespace tandem
