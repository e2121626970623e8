#include <doctest.h>

#include <filesystem>

#include "support.hpp"

using namespace tandem;
using namespace tandem::testing;

TEST_CASE("singleton depot is a valid instance") {
  Instance inst;
  inst.nodes.push_back(node(kDepotId, NodeClass::Depot, 0, 0));
  CHECK_NOTHROW(validate(inst));
}

TEST_CASE("isolated second node is reported as disconnected") {
  Instance inst;
  inst.nodes.push_back(node(kDepotId, NodeClass::Depot, 0, 0));
  inst.nodes.push_back(node(2, NodeClass::Street, 10, 0));
  CHECK_THROWS_WITH_AS(validate(inst), "disconnected graph", ValidationError);
}

TEST_CASE("two depots are rejected") {
  Instance inst = empty_line(1);
  inst.nodes[1].cls = NodeClass::Depot;
  CHECK_THROWS_AS(validate(inst), ValidationError);
}

TEST_CASE("depot must carry id 1") {
  Instance inst;
  inst.nodes.push_back(node(7, NodeClass::Depot, 0, 0));
  CHECK_THROWS_WITH_AS(validate(inst), "depot id must be 1", ValidationError);
}

TEST_CASE("delivery without a package is rejected") {
  Instance inst = empty_line(2);
  add_delivery(inst, 10, NodeClass::TruckDelivery, 2, 20, 0.0);
  CHECK_THROWS_AS(validate(inst), ValidationError);
}

TEST_CASE("malformed json is a parse error") {
  CHECK_THROWS_AS(instance_from_json(json::parse(R"({"nodes": 3})")), ParseError);
  CHECK_THROWS_AS(instance_from_json(json::object()), ParseError);
}

TEST_CASE("generated instance has the requested counts") {
  const Instance inst = generate_instance(1, 4, 8, 3, "grid-city");
  CHECK(inst.ids_of(NodeClass::TruckDelivery).size() == 4);
  CHECK(inst.ids_of(NodeClass::UavDelivery).size() == 8);
  CHECK(inst.uavs.size() == 3);
  CHECK_NOTHROW(validate(inst));
}

TEST_CASE("generation is deterministic") {
  CHECK(generate_instance(1, 4, 8, 3, "grid-city") == generate_instance(1, 4, 8, 3, "grid-city"));
  CHECK_FALSE(generate_instance(1, 4, 8, 3, "grid-city") == generate_instance(2, 4, 8, 3, "grid-city"));
}

TEST_CASE("empty delivery set still validates") {
  const Instance inst = generate_instance(2, 0, 0, 0, "grid-city");
  CHECK(inst.ids_of(NodeClass::TruckDelivery).empty());
  CHECK(inst.ids_of(NodeClass::UavDelivery).empty());
  CHECK(inst.uavs.empty());
  CHECK_NOTHROW(validate(inst));
}

TEST_CASE("unknown map name") {
  CHECK_THROWS_AS(generate_instance(1, 1, 1, 1, "atlantis"), std::invalid_argument);
}

TEST_CASE("save and load round-trip") {
  const auto dir = std::filesystem::temp_directory_path();
  for (std::uint64_t seed : {1u, 5u, 9u, 13u}) {
    const Instance inst = generate_instance(seed, 3, 5, 2, seed % 2 ? "grid-city" : "grid-town");
    const auto path = dir / ("tandem_roundtrip_" + std::to_string(seed) + ".json");
    save_instance(inst, path);
    CHECK(load_instance(path) == inst);
    std::filesystem::remove(path);
  }
}

TEST_CASE("generator config round-trips through json") {
  GeneratorConfig c;
  c.uav_battery_j = {1000.0, 2000.0};
  c.weights.alpha = 0.5;
  CHECK(generator_config_from_json(to_json(c)) == c);
}
