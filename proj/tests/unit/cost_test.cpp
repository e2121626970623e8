#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tandem/cost.hpp"
#include "tandem/oracle.hpp"

using namespace tandem;
using namespace tandem::testing;

namespace {

TruckParams symmetric_truck() {
  TruckParams t;
  t.accel_input = 2.0;
  t.brake_input = -2.0;
  return t;
}

UavParams toy_uav() {
  UavParams u;
  u.empty_mass_kg = 0.5;
  u.k1 = 0.0;
  u.k2 = 1.0;
  u.d = {1.0, 1.0, 0.0, 0.0, 0.0};
  u.ascent_mps = 2.0;
  u.descent_mps = -2.0;
  return u;
}

}  // namespace

TEST_CASE("free-flow edge time is d / V") {
  CHECK(truck_edge_time(100, 10, false, false, symmetric_truck()) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("both-stop edge: 5 s accel, 5 s cruise, 5 s brake") {
  const auto k = edge_kinematics(100, 10, true, true, symmetric_truck());
  CHECK(k.total_time() == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(k.accel_dist == doctest::Approx(25.0));
  CHECK(k.cruise_dist == doctest::Approx(50.0));
  CHECK(k.decel_dist == doctest::Approx(25.0));
  CHECK_FALSE(k.triangular);
}

TEST_CASE("stop at end only takes 12.5 s") {
  CHECK(truck_edge_time(100, 10, false, true, symmetric_truck()) == doctest::Approx(12.5).epsilon(1e-12));
  CHECK(truck_edge_time(100, 10, true, false, symmetric_truck()) == doctest::Approx(12.5).epsilon(1e-12));
}

TEST_CASE("short edge falls back to a triangular profile") {
  const auto k = edge_kinematics(20, 10, true, true, symmetric_truck());
  CHECK(k.triangular);
  CHECK(k.peak_speed < 10.0);
  CHECK(k.peak_speed == doctest::Approx(std::sqrt(40.0)));  // v^2 / a = 20 with a = 2
  CHECK(k.accel_dist + k.cruise_dist + k.decel_dist == doctest::Approx(20.0));
}

TEST_CASE("closed-form times agree with the kinematic integrator") {
  const TruckParams t = symmetric_truck();
  for (bool a : {false, true})
    for (bool b : {false, true})
      for (double d : {20.0, 100.0, 333.0}) {
        const double closed = truck_edge_time(d, 10, a, b, t);
        const auto sim = oracle::kinematic_integrate({d, 10, a, b, 4000}, t, 1e-4);
        CHECK(sim.time_s == doctest::Approx(closed).epsilon(1e-6));
        CHECK(sim.distance_m == doctest::Approx(d).epsilon(1e-9));
      }
}

TEST_CASE("braking-only edge burns no acceleration fuel") {
  const auto e = truck_edge_energy(100, 10, 4000, false, true, TruckParams{});
  CHECK(e.accel_ml == 0.0);
  const auto sim = oracle::kinematic_integrate({100, 10, false, true, 4000}, TruckParams{}, 1e-4);
  CHECK(sim.accel_fuel_ml == 0.0);
}

TEST_CASE("constant cruise rate times cruise time") {
  TruckParams t;
  t.cruise_coeffs = {0.1, 0.0, 0.0, 0.0};
  const auto e = truck_edge_energy(50, 10, 4000, false, false, t);
  CHECK(e.cruise_ml == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(e.accel_ml == 0.0);
}

TEST_CASE("acceleration fuel closed form matches the trapezoid rule") {
  const TruckParams t;
  for (double m : {3500.0, 4200.0, 6000.0}) {
    const auto e = truck_edge_energy(400, 13, m, true, false, t);
    CHECK(e.accel_ml == doctest::Approx(accel_fuel_trapezoid(13, m, t, 1e-4)).epsilon(1e-6));
  }
}

TEST_CASE("edge fuel strictly increases with mass") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double d = rng.uniform(30, 400), v = rng.uniform(5, 20), m = rng.uniform(3500, 6000);
    const bool a = rng.chance(0.5), b = rng.chance(0.5);
    if (!a) continue;  // without an acceleration phase fuel does not depend on mass
    const TruckParams t;
    const double lo = truck_edge_energy(d, v, m, a, b, t).total_ml();
    const double hi = truck_edge_energy(d, v, m + 50, a, b, t).total_ml();
    CHECK(hi > lo);
    const auto sim = oracle::kinematic_integrate({d, v, a, b, m}, t, 1e-4);
    CHECK(sim.fuel_ml() == doctest::Approx(lo).epsilon(1e-3));
  }
}

TEST_CASE("docked UAV marginal cost is non-negative") {
  CHECK(docked_uav_marginal_ml(200, 12, 4000, 2.0, true, true, TruckParams{}) > 0.0);
  CHECK(docked_uav_marginal_ml(200, 12, 4000, 2.0, false, false, TruckParams{}) == 0.0);
}

TEST_CASE("hover for 3 s costs 6 J") {
  const UavParams u = toy_uav();
  CHECK(3.0 * transverse_power(u, 1.0, 0.0, 1.0) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("toy ascent costs 5 J") {
  CHECK(ascend_energy(toy_uav(), 1.0, 10.0, 1.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(uav_leg_energy(UavLeg::Ascend, toy_uav(), 1.0, 0.0, 0.0, 10.0, 1.0) == doctest::Approx(5.0));
}

TEST_CASE("descent mirrors ascent for symmetric parameters") {
  const UavParams u = toy_uav();
  CHECK(descend_energy(u, 1.0, -10.0, 1.0) == doctest::Approx(ascend_energy(u, 1.0, 10.0, 1.0)));
}

TEST_CASE("wrong-signed vertical legs and underweight UAVs throw") {
  const UavParams u;
  CHECK_THROWS_AS(uav_leg_energy(UavLeg::Ascend, u, 2.0, 0, 10, 5), std::invalid_argument);
  CHECK_THROWS_AS(uav_leg_energy(UavLeg::Descend, u, 2.0, 0, 5, 10), std::invalid_argument);
  CHECK_THROWS_AS(transverse_energy(u, 0.5, 10), std::invalid_argument);
}

TEST_CASE("degenerate sortie geometry costs nothing") {
  UavParams u;
  u.cruise_altitude_m = 3.0;
  const Vec3 p{5, 5, 3};
  CHECK(uav_sortie_energy({p, p, p}, u, 1.0).total_j == 0.0);
}

TEST_CASE("sortie energy is direction symmetric without a package") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const UavParams u = sample_uav(rng);
    const Vec3 a{rng.uniform(-300, 300), rng.uniform(-300, 300), 3.0};
    const Vec3 d{rng.uniform(-300, 300), rng.uniform(-300, 300), rng.uniform(0, 8)};
    const Vec3 b{rng.uniform(-300, 300), rng.uniform(-300, 300), 3.0};
    const double fwd = uav_sortie_energy({a, d, b}, u, 0.0).total_j;
    const double back = uav_sortie_energy({b, d, a}, u, 0.0).total_j;
    CHECK(std::abs(fwd - back) <= 1e-12 * fwd);
  }
}

TEST_CASE("sortie energy grows with payload") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const UavParams u = sample_uav(rng);
    const SortieGeometry g{{0, 0, 3}, {rng.uniform(0, 400), rng.uniform(0, 400), rng.uniform(0, 8)}, {50, 0, 3}};
    const double p = rng.uniform(0, 1.2);
    CHECK(uav_sortie_energy(g, u, p + 0.1).total_j >= uav_sortie_energy(g, u, p).total_j);
  }
}

TEST_CASE("closed-form sortie energy agrees with time-stepped flight") {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const UavParams u = sample_uav(rng);
    const SortieGeometry g{{0, 0, 3}, {rng.uniform(-300, 300), rng.uniform(-300, 300), rng.uniform(0, 8)}, {80, 10, 3}};
    const double p = rng.uniform(0.2, 1.2);
    CHECK(oracle::simulate_sortie_energy(g, u, p, kStandardGravity, 1e-4) ==
          doctest::Approx(uav_sortie_energy(g, u, p).total_j).epsilon(1e-6));
  }
}

TEST_CASE("linear toy model gives R_max = 200 m") {
  auto energy = [](double r) { return 200.0 + 4.0 * r; };
  CHECK(max_feasible_distance(energy, 1000.0) == doctest::Approx(200.0).epsilon(1e-9));
  CHECK(max_feasible_distance(energy, 100.0) == 0.0);
}

TEST_CASE("no battery, no range") {
  UavParams u;
  u.battery_j = 0.0;
  CHECK(compute_rmax(u, 0.5, 3, 0) == 0.0);
}

TEST_CASE("R_max fits the battery and shrinks with payload") {
  Rng rng(19);
  for (int i = 0; i < 50; ++i) {
    const UavParams u = sample_uav(rng);
    const double r0 = compute_rmax(u, 0.2, 3, 2);
    const double r1 = compute_rmax(u, 1.0, 3, 2);
    CHECK(r1 <= r0);
    const SortieGeometry g{{0, 0, 3}, {r0, 0, 2}, {0, 0, 3}};
    CHECK(uav_sortie_energy(g, u, 0.2).total_j <= u.battery_j + 1e-6);
  }
}
