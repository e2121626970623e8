#include "tandem/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

namespace tandem {

std::string_view to_string(NodeClass c) {
  switch (c) {
    case NodeClass::Depot: return "depot";
    case NodeClass::TruckDelivery: return "truck_delivery";
    case NodeClass::UavDelivery: return "uav_delivery";
    case NodeClass::Street: return "street";
    case NodeClass::Rendezvous: return "rendezvous";
  }
  return "street";
}

NodeClass node_class_from_string(std::string_view s) {
  if (s == "depot") return NodeClass::Depot;
  if (s == "truck_delivery") return NodeClass::TruckDelivery;
  if (s == "uav_delivery") return NodeClass::UavDelivery;
  if (s == "street") return NodeClass::Street;
  if (s == "rendezvous") return NodeClass::Rendezvous;
  throw ParseError("unknown node class '" + std::string(s) + "'");
}

double horizontal_distance(const Vec3& a, const Vec3& b) { return std::hypot(a.x - b.x, a.y - b.y); }

const NodeLabel* Instance::find_node(NodeId id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [id](const NodeLabel& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

const NodeLabel& Instance::node(NodeId id) const {
  const NodeLabel* n = find_node(id);
  if (!n) throw std::out_of_range("no node with id " + std::to_string(id));
  return *n;
}

std::vector<NodeId> Instance::ids_of(NodeClass c) const {
  std::vector<NodeId> out;
  for (const auto& n : nodes)
    if (n.cls == c) out.push_back(n.id);
  std::sort(out.begin(), out.end());
  return out;
}

double Instance::total_package_kg() const {
  double total = 0.0;
  for (const auto& n : nodes) total += n.package_kg;
  return total;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

bool finite(const Vec3& p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z); }

}  // namespace

void validate(const Instance& inst) {
  require(!inst.nodes.empty(), "instance has no nodes");

  std::unordered_map<NodeId, std::size_t> index;
  int depots = 0;
  for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
    const auto& n = inst.nodes[i];
    require(index.emplace(n.id, i).second, "duplicate node id " + std::to_string(n.id));
    require(finite(n.position), "node " + std::to_string(n.id) + " has a non-finite position");
    if (n.cls == NodeClass::Depot) {
      ++depots;
      require(n.id == kDepotId, "depot id must be 1");
    }
    require(n.cls != NodeClass::Rendezvous,
            "node " + std::to_string(n.id) + ": rendezvous nodes are derived, not loaded");
    if (is_delivery(n.cls))
      require(n.package_kg > 0.0, "delivery node " + std::to_string(n.id) + " needs package_kg > 0");
    else
      require(n.package_kg == 0.0, "non-delivery node " + std::to_string(n.id) + " must have package_kg = 0");
  }
  require(depots == 1, "exactly one depot required, found " + std::to_string(depots));

  std::vector<std::vector<std::size_t>> adj(inst.nodes.size());
  for (const auto& e : inst.edges) {
    auto iu = index.find(e.u);
    auto iv = index.find(e.v);
    require(iu != index.end() && iv != index.end(),
            "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") references a missing node");
    require(e.u != e.v, "edge endpoints must be distinct (node " + std::to_string(e.u) + ")");
    require(e.length_m > 0.0 && std::isfinite(e.length_m), "edge length must be > 0");
    require(e.speed_mps > 0.0 && std::isfinite(e.speed_mps), "edge speed limit must be > 0");
    adj[iu->second].push_back(iv->second);
    adj[iv->second].push_back(iu->second);
  }

  std::vector<char> seen(inst.nodes.size(), 0);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    for (auto v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        q.push(v);
      }
  }
  require(reached == inst.nodes.size(), "disconnected graph");

  const auto& t = inst.truck;
  require(t.brake_input < 0.0 && 0.0 < t.accel_input, "truck inputs must satisfy u_brake < 0 < u_acc");
  require(t.empty_mass_kg > 0.0, "truck empty mass must be > 0");
  require(t.frontal_area_m2 > 0.0, "truck frontal area must be > 0");
  require(t.air_density > 0.0, "air density must be > 0");
  require(t.gravity > 0.0, "gravity must be > 0");
  require(t.drag_coeff >= 0.0 && t.rolling_friction >= 0.0, "drag and friction coefficients must be >= 0");

  double max_z = t.deck_height_m;
  for (const auto& n : inst.nodes) max_z = std::max(max_z, n.position.z);

  std::set<int> uav_ids;
  for (const auto& u : inst.uavs) {
    const std::string who = "uav " + std::to_string(u.id);
    require(uav_ids.insert(u.id).second, "duplicate uav id " + std::to_string(u.id));
    require(u.empty_mass_kg > 0.0, who + ": empty mass must be > 0");
    require(u.ascent_mps > 0.0, who + ": ascent speed must be > 0");
    require(u.descent_mps < 0.0, who + ": descent speed must be < 0");
    require(u.cruise_mps > 0.0, who + ": cruise speed must be > 0");
    require(u.battery_j > 0.0, who + ": battery capacity must be > 0");
    require(u.k2 > 0.0, who + ": k2 must be > 0");
    require(u.cruise_altitude_m > max_z, who + ": cruise altitude must be above every node and the truck deck");
  }

  const auto& w = inst.weights;
  require(w.alpha >= 0.0 && w.alpha <= 1.0, "alpha must lie in [0, 1]");
  require(w.w1 >= 0.0 && w.w2 >= 0.0, "weights w1, w2 must be >= 0");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <typename T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad value for '") + key + "': " + e.what());
  }
}

json range_json(const Range& r) { return json::array({r.lo, r.hi}); }

Range range_from(const json& j, const char* key, const Range& fallback) {
  if (!j.contains(key)) return fallback;
  auto a = j.at(key);
  if (!a.is_array() || a.size() != 2) throw ParseError(std::string("range '") + key + "' must be [lo, hi]");
  return {a[0].get<double>(), a[1].get<double>()};
}

}  // namespace

void to_json(json& j, const TruckParams& t) {
  j = json{{"empty_mass_kg", t.empty_mass_kg},
           {"frontal_area_m2", t.frontal_area_m2},
           {"drag_coeff", t.drag_coeff},
           {"air_density", t.air_density},
           {"rolling_friction", t.rolling_friction},
           {"gravity", t.gravity},
           {"accel_input", t.accel_input},
           {"brake_input", t.brake_input},
           {"idle_coeffs", t.idle_coeffs},
           {"cruise_coeffs", t.cruise_coeffs},
           {"deck_height_m", t.deck_height_m}};
}

void from_json(const json& j, TruckParams& t) {
  t.empty_mass_kg = get<double>(j, "empty_mass_kg");
  t.frontal_area_m2 = get<double>(j, "frontal_area_m2");
  t.drag_coeff = get<double>(j, "drag_coeff");
  t.air_density = get<double>(j, "air_density");
  t.rolling_friction = get<double>(j, "rolling_friction");
  t.gravity = get<double>(j, "gravity");
  t.accel_input = get<double>(j, "accel_input");
  t.brake_input = get<double>(j, "brake_input");
  t.idle_coeffs = get<std::array<double, 3>>(j, "idle_coeffs");
  t.cruise_coeffs = get<std::array<double, 4>>(j, "cruise_coeffs");
  t.deck_height_m = get<double>(j, "deck_height_m");
}

void to_json(json& j, const UavParams& u) {
  j = json{{"id", u.id},
           {"empty_mass_kg", u.empty_mass_kg},
           {"k1", u.k1},
           {"k2", u.k2},
           {"d", u.d},
           {"ascent_mps", u.ascent_mps},
           {"descent_mps", u.descent_mps},
           {"cruise_mps", u.cruise_mps},
           {"attack_angle_rad", u.attack_angle_rad},
           {"battery_j", u.battery_j},
           {"cruise_altitude_m", u.cruise_altitude_m}};
}

void from_json(const json& j, UavParams& u) {
  u.id = get<int>(j, "id");
  u.empty_mass_kg = get<double>(j, "empty_mass_kg");
  u.k1 = get<double>(j, "k1");
  u.k2 = get<double>(j, "k2");
  u.d = get<std::array<double, 5>>(j, "d");
  u.ascent_mps = get<double>(j, "ascent_mps");
  u.descent_mps = get<double>(j, "descent_mps");
  u.cruise_mps = get<double>(j, "cruise_mps");
  u.attack_angle_rad = get<double>(j, "attack_angle_rad");
  u.battery_j = get<double>(j, "battery_j");
  u.cruise_altitude_m = get<double>(j, "cruise_altitude_m");
}

json to_json(const Instance& inst) {
  json nodes = json::array();
  for (const auto& n : inst.nodes)
    nodes.push_back({{"id", n.id},
                     {"class", std::string(to_string(n.cls))},
                     {"package_kg", n.package_kg},
                     {"x_m", n.position.x},
                     {"y_m", n.position.y},
                     {"z_m", n.position.z}});
  json edges = json::array();
  for (const auto& e : inst.edges)
    edges.push_back({{"u", e.u}, {"v", e.v}, {"length_m", e.length_m}, {"speed_mps", e.speed_mps}});
  json uavs = json::array();
  for (const auto& u : inst.uavs) uavs.push_back(u);
  return json{{"nodes", nodes},
              {"edges", edges},
              {"truck", inst.truck},
              {"uavs", uavs},
              {"weights",
               {{"alpha", inst.weights.alpha}, {"w1", inst.weights.w1}, {"w2", inst.weights.w2}}}};
}

Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  Instance inst;
  for (const auto& n : get<json>(j, "nodes")) {
    NodeLabel label;
    label.id = get<int>(n, "id");
    label.cls = node_class_from_string(get<std::string>(n, "class"));
    label.package_kg = get<double>(n, "package_kg");
    label.position = {get<double>(n, "x_m"), get<double>(n, "y_m"), get<double>(n, "z_m")};
    inst.nodes.push_back(label);
  }
  for (const auto& e : get<json>(j, "edges"))
    inst.edges.push_back({get<int>(e, "u"), get<int>(e, "v"), get<double>(e, "length_m"), get<double>(e, "speed_mps")});
  inst.truck = get<TruckParams>(j, "truck");
  for (const auto& u : get<json>(j, "uavs")) inst.uavs.push_back(u.get<UavParams>());
  const json w = get<json>(j, "weights");
  inst.weights = {get<double>(w, "alpha"), get<double>(w, "w1"), get<double>(w, "w2")};
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  Instance inst = instance_from_json(j);
  validate(inst);
  return inst;
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(inst).dump(2) << '\n';
}

json to_json(const GeneratorConfig& c) {
  return json{{"truck_package_kg", range_json(c.truck_package_kg)},
              {"uav_package_kg", range_json(c.uav_package_kg)},
              {"uav_delivery_height_m", range_json(c.uav_delivery_height_m)},
              {"setback_m", range_json(c.setback_m)},
              {"uav_empty_mass_kg", range_json(c.uav_empty_mass_kg)},
              {"uav_k1", range_json(c.uav_k1)},
              {"uav_k2", range_json(c.uav_k2)},
              {"uav_d1", range_json(c.uav_d1)},
              {"uav_d2", range_json(c.uav_d2)},
              {"uav_d3", range_json(c.uav_d3)},
              {"uav_d4", range_json(c.uav_d4)},
              {"uav_d5", range_json(c.uav_d5)},
              {"uav_ascent_mps", range_json(c.uav_ascent_mps)},
              {"uav_descent_mps", range_json(c.uav_descent_mps)},
              {"uav_cruise_mps", range_json(c.uav_cruise_mps)},
              {"uav_attack_angle_rad", range_json(c.uav_attack_angle_rad)},
              {"uav_battery_j", range_json(c.uav_battery_j)},
              {"uav_cruise_altitude_m", range_json(c.uav_cruise_altitude_m)},
              {"truck", c.truck},
              {"weights", {{"alpha", c.weights.alpha}, {"w1", c.weights.w1}, {"w2", c.weights.w2}}}};
}

GeneratorConfig generator_config_from_json(const json& j) {
  GeneratorConfig c;
  if (!j.is_object()) throw ParseError("generator config must be a JSON object");
  c.truck_package_kg = range_from(j, "truck_package_kg", c.truck_package_kg);
  c.uav_package_kg = range_from(j, "uav_package_kg", c.uav_package_kg);
  c.uav_delivery_height_m = range_from(j, "uav_delivery_height_m", c.uav_delivery_height_m);
  c.setback_m = range_from(j, "setback_m", c.setback_m);
  c.uav_empty_mass_kg = range_from(j, "uav_empty_mass_kg", c.uav_empty_mass_kg);
  c.uav_k1 = range_from(j, "uav_k1", c.uav_k1);
  c.uav_k2 = range_from(j, "uav_k2", c.uav_k2);
  c.uav_d1 = range_from(j, "uav_d1", c.uav_d1);
  c.uav_d2 = range_from(j, "uav_d2", c.uav_d2);
  c.uav_d3 = range_from(j, "uav_d3", c.uav_d3);
  c.uav_d4 = range_from(j, "uav_d4", c.uav_d4);
  c.uav_d5 = range_from(j, "uav_d5", c.uav_d5);
  c.uav_ascent_mps = range_from(j, "uav_ascent_mps", c.uav_ascent_mps);
  c.uav_descent_mps = range_from(j, "uav_descent_mps", c.uav_descent_mps);
  c.uav_cruise_mps = range_from(j, "uav_cruise_mps", c.uav_cruise_mps);
  c.uav_attack_angle_rad = range_from(j, "uav_attack_angle_rad", c.uav_attack_angle_rad);
  c.uav_battery_j = range_from(j, "uav_battery_j", c.uav_battery_j);
  c.uav_cruise_altitude_m = range_from(j, "uav_cruise_altitude_m", c.uav_cruise_altitude_m);
  if (j.contains("truck")) c.truck = j.at("truck").get<TruckParams>();
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    c.weights = {get<double>(w, "alpha"), get<double>(w, "w1"), get<double>(w, "w2")};
  }
  return c;
}

}  // namespace tandem
