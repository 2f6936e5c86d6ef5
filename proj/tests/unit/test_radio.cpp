#include <doctest.h>

#include <fstream>

#include <nlohmann/json.hpp>

#include "../oracles.hpp"
#include "ringhop/error.hpp"
#include "ringhop/radio.hpp"

using namespace ringhop;

TEST_CASE("path loss anchors") {
  CHECK(path_loss(1.0, 900e6) == doctest::Approx(23.3));
  CHECK(path_loss(100.0, 900e6) == doctest::Approx(98.5));
  CHECK(path_loss(100.0, 868e6) < path_loss(100.0, 900e6));
}

TEST_CASE("builtin catalog") {
  const auto& all = builtin_transceivers();
  REQUIRE(all.size() == 4);
  for (const auto& tx : all) CHECK_NOTHROW(tx.validate());
  const auto& cc1200 = find_transceiver("cc1200");
  CHECK(cc1200.power_level_count() == 16);
  CHECK(cc1200.rate_level_count() == 7);
  CHECK(find_transceiver("Si4464").name == "Si4644");
  CHECK_THROWS_AS(find_transceiver("nRF905"), ValidationError);
}

TEST_CASE("feasibility examples") {
  const RadioEnvironment env;
  const auto& cc1200 = find_transceiver("CC1200");
  CHECK_FALSE(is_feasible(cc1200, env, 16, 1, 10e3));
  CHECK_FALSE(min_power_for(cc1200, env, 2, 100e3).has_value());
}

TEST_CASE("max range") {
  const RadioEnvironment env;
  CHECK(max_range(find_transceiver("SX1272"), env) == doctest::Approx(4410.0).epsilon(0.01));
  for (const auto& tx : builtin_transceivers()) {
    const double d = max_range(tx, env);
    CHECK(d == doctest::Approx(oracle::bisect_max_range(tx, env)).epsilon(1e-9));
    CHECK(is_feasible(tx, env, 1, tx.slowest_rate_level(), d));
    CHECK_FALSE(is_feasible(tx, env, 1, tx.slowest_rate_level(), d * 1.001));
  }
}

TEST_CASE("max range with a 23.3 dB budget is one meter") {
  TransceiverModel tx{"flat", {{0.0, 10.0}}, {{1e3, -20.3}}, 5.0};
  RadioEnvironment env;
  env.carrier_frequency_hz = 900e6;
  CHECK(max_range(tx, env) == doctest::Approx(1.0));
}

TEST_CASE("min_power_for agrees with a linear scan") {
  const RadioEnvironment env;
  for (const auto& tx : builtin_transceivers()) {
    const double reach = max_range(tx, env);
    for (int s = 1; s <= tx.rate_level_count(); ++s) {
      for (double f = 0.01; f < 1.2; f += 0.013) {
        const double d = f * reach;
        CHECK(min_power_for(tx, env, s, d) == oracle::scan_min_power(tx, env, s, d));
      }
    }
  }
}

TEST_CASE("transceiver JSON round trip and errors") {
  const auto& sx = find_transceiver("SX1272");
  const auto back = transceiver_from_json(to_json(sx));
  CHECK(back.name == sx.name);
  CHECK(back.power_levels.size() == sx.power_levels.size());
  CHECK(back.rate_levels.back().rate_bps == sx.rate_levels.back().rate_bps);

  auto doc = to_json(sx);
  doc["power_levels"][0]["current_ma"] = "lots";
  CHECK_THROWS_AS(transceiver_from_json(doc), ValidationError);

  doc = to_json(sx);
  doc["power_levels"][0]["output_dbm"] = -40.0;  // output must not increase with level
  CHECK_THROWS_AS(transceiver_from_json(doc), ValidationError);

  doc = to_json(sx);
  doc["rate_levels"] = nlohmann::json::array();
  CHECK_THROWS_AS(transceiver_from_json(doc), ValidationError);
}

TEST_CASE("catalog file") {
  const std::string path = "ringhop_test_catalog.json";
  {
    std::ofstream out(path);
    nlohmann::json doc = to_json(find_transceiver("CC1100"));
    doc["name"] = "MyRadio";
    out << nlohmann::json::array({doc}).dump();
  }
  const auto extra = load_catalog(path);
  REQUIRE(extra.size() == 1);
  CHECK(find_transceiver("myradio", extra).name == "MyRadio");

  { std::ofstream(path) << "{ not json"; }
  CHECK_THROWS_AS(load_catalog(path), ParseError);
  CHECK_THROWS_AS(load_catalog("/nonexistent/catalog.json"), IoError);
  std::remove(path.c_str());
}

TEST_CASE("environment validation") {
  RadioEnvironment env;
  env.supply_voltage_v = 0.0;
  CHECK_THROWS_AS(env.validate(), ValidationError);
}
