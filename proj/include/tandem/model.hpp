#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tandem {

using json = nlohmann::json;

/// Raised when an input file is not well-formed JSON or misses required keys.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a structurally valid instance breaks a domain invariant.
/// The message names the violated invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when no feasible solution exists (e.g. a delivery the truck cannot reach).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using NodeId = int;

inline constexpr NodeId kDepotId = 1;
inline constexpr double kStandardGravity = 9.81;

enum class NodeClass : std::uint8_t { Depot, TruckDelivery, UavDelivery, Street, Rendezvous };

std::string_view to_string(NodeClass c);
NodeClass node_class_from_string(std::string_view s);

inline bool is_delivery(NodeClass c) {
  return c == NodeClass::TruckDelivery || c == NodeClass::UavDelivery;
}

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Horizontal (x, y) distance; UAV legs fly level at cruise altitude.
double horizontal_distance(const Vec3& a, const Vec3& b);

struct NodeLabel {
  NodeId id = 0;
  NodeClass cls = NodeClass::Street;
  double package_kg = 0.0;
  Vec3 position;

  friend bool operator==(const NodeLabel&, const NodeLabel&) = default;
};

struct StreetEdge {
  NodeId u = 0;
  NodeId v = 0;
  double length_m = 0.0;
  double speed_mps = 0.0;

  friend bool operator==(const StreetEdge&, const StreetEdge&) = default;
};

struct TruckParams {
  double empty_mass_kg = 3500.0;
  double frontal_area_m2 = 7.5;
  double drag_coeff = 0.6;
  double air_density = 1.2;
  double rolling_friction = 0.01;
  double gravity = kStandardGravity;
  double accel_input = 1.5;   // u_acc > 0
  double brake_input = -2.5;  // u_brake < 0
  // Fuel-rate polynomial applied to the equivalent acceleration, mL per (m/s^2 * s).
  std::array<double, 3> idle_coeffs{0.21672, 0.29043, 0.003225};
  // Cruise fuel-rate polynomial over velocity, mL/s.
  std::array<double, 4> cruise_coeffs{0.4707, 0.0735, -0.0022245, 0.00017925};
  double deck_height_m = 3.0;

  friend bool operator==(const TruckParams&, const TruckParams&) = default;
};

struct UavParams {
  int id = 0;
  double empty_mass_kg = 1.8;
  double k1 = 0.8554;
  double k2 = 0.3051;
  // d1..d5 of the quadrotor power model.
  std::array<double, 5> d{2.8037, 0.3177, 0.0, 0.0296, 0.0279};
  double ascent_mps = 5.0;    // V_a > 0
  double descent_mps = -4.0;  // V_d < 0
  double cruise_mps = 18.0;
  double attack_angle_rad = 0.1;
  double battery_j = 40000.0;
  double cruise_altitude_m = 30.0;

  friend bool operator==(const UavParams&, const UavParams&) = default;
};

struct ObjectiveWeights {
  double alpha = 0.9;
  double w1 = 0.000747;  // $ per mL fuel
  double w2 = 0.12;      // $ per kWh

  friend bool operator==(const ObjectiveWeights&, const ObjectiveWeights&) = default;
};

struct Instance {
  std::vector<NodeLabel> nodes;
  std::vector<StreetEdge> edges;
  TruckParams truck;
  std::vector<UavParams> uavs;
  ObjectiveWeights weights;

  const NodeLabel& node(NodeId id) const;
  const NodeLabel* find_node(NodeId id) const;
  std::vector<NodeId> ids_of(NodeClass c) const;
  double total_package_kg() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Checks every instance invariant; throws ValidationError naming the first violation.
void validate(const Instance& inst);

json to_json(const Instance& inst);
Instance instance_from_json(const json& j);

void to_json(json& j, const TruckParams& t);
void from_json(const json& j, TruckParams& t);
void to_json(json& j, const UavParams& u);
void from_json(const json& j, UavParams& u);

/// Reads and validates an instance file.
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Random instance generation

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Range&, const Range&) = default;
};

/// Ranges sampled by generate_instance. Defaults keep every UAV able to carry
/// the heaviest UAV-class package over a few city blocks.
struct GeneratorConfig {
  Range truck_package_kg{2.0, 20.0};
  Range uav_package_kg{0.2, 1.2};
  Range uav_delivery_height_m{0.0, 8.0};
  Range setback_m{12.0, 35.0};

  Range uav_empty_mass_kg{1.5, 2.2};
  Range uav_k1{0.80, 0.90};
  Range uav_k2{0.29, 0.32};
  Range uav_d1{2.6, 3.0};
  Range uav_d2{0.30, 0.34};
  Range uav_d3{0.0, 0.02};
  Range uav_d4{0.027, 0.032};
  Range uav_d5{0.025, 0.030};
  Range uav_ascent_mps{4.0, 6.0};
  Range uav_descent_mps{-5.0, -3.0};
  Range uav_cruise_mps{16.0, 19.0};
  Range uav_attack_angle_rad{0.05, 0.2};
  Range uav_battery_j{16000.0, 20000.0};
  Range uav_cruise_altitude_m{25.0, 32.0};

  TruckParams truck;
  ObjectiveWeights weights;

  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

json to_json(const GeneratorConfig& c);
GeneratorConfig generator_config_from_json(const json& j);

/// Names accepted by generate_instance.
std::vector<std::string> builtin_maps();

/// Deterministic in all arguments. Throws std::invalid_argument on an unknown map.
Instance generate_instance(std::uint64_t seed, int n_truck_deliveries, int n_uav_deliveries, int n_uavs,
                           std::string_view map, const GeneratorConfig& config = {});

}  // namespace tandem
