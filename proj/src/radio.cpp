#include "ringhop/radio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ringhop/error.hpp"

namespace ringhop {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

TransceiverModel make(std::string name, std::vector<PowerLevel> power,
                      std::vector<RateLevel> rates, double rx_current_ma) {
  return TransceiverModel{std::move(name), std::move(power), std::move(rates), rx_current_ma};
}

// Datasheet-derived power and rate tables. Rates are in bits/s.
std::vector<TransceiverModel> make_builtins() {
  std::vector<TransceiverModel> catalog;
  catalog.push_back(make("CC1100",
                         {{10.0, 31.1}, {7.0, 25.8}, {5.0, 20.0}, {0.0, 16.9}, {-5.0, 14.1},
                          {-10.0, 14.5}, {-15.0, 13.0}, {-20.0, 12.4}, {-30.0, 11.9}},
                         {{500e3, -88.0}, {250e3, -93.0}, {38.4e3, -103.0}, {1.2e3, -110.0}},
                         14.4));
  catalog.push_back(make("CC1200",
                         {{14.0, 45.0},
                          {12.0, 42.0},
                          {10.0, 34.0},
                          {9.0, 33.5},
                          {7.5, 31.0},
                          {5.0, 29.0},
                          {4.0, 27.0},
                          {2.0, 26.0},
                          {0.0, 25.0},
                          {-1.5, 24.0},
                          {-3.0, 23.0},
                          {-5.0, 22.5},
                          {-6.5, 22.0},
                          {-8.0, 21.7},
                          {-10.0, 21.5},
                          {-11.5, 21.0}},
                         {{1000e3, -97.0},
                          {500e3, -97.0},
                          {100e3, -107.0},
                          {50e3, -109.0},
                          {38.4e3, -110.0},
                          {4.8e3, -113.0},
                          {1.2e3, -122.0}},
                         19.0));
  catalog.push_back(make("Si4644",
                         {{20.0, 85.0}, {16.0, 43.0}, {14.0, 37.0}, {13.0, 29.0}, {10.0, 18.0}},
                         {{1000e3, -88.0},
                          {500e3, -97.0},
                          {125e3, -105.0},
                          {100e3, -106.0},
                          {40e3, -110.0},
                          {0.5e3, -126.0}},
                         10.7));
  // Level 3 is listed at 3.75 kbps, below level 4; kept verbatim. It is
  // dominated by level 4 (faster and more sensitive) so it never wins a search.
  catalog.push_back(make("SX1272", {{20.0, 125.0}, {17.0, 90.0}, {13.0, 28.0}, {7.0, 18.0}},
                         {{250e3, -97.0},
                          {38.4e3, -110.0},
                          {3.75e3, -116.0},
                          {18.75e3, -119.0},
                          {9.38e3, -122.0},
                          {1.172e3, -131.0},
                          {0.586e3, -134.0},
                          {0.293e3, -137.0}},
                         10.5));
  return catalog;
}

double require_number(const nlohmann::json& doc, const char* key, const std::string& path) {
  if (!doc.contains(key)) throw ValidationError(path + "." + key, "missing field");
  const auto& value = doc.at(key);
  if (!value.is_number()) throw ValidationError(path + "." + key, "expected a number");
  return value.get<double>();
}

}  // namespace

const PowerLevel& TransceiverModel::power(int level) const {
  if (level < 1 || level > power_level_count()) {
    throw ValidationError("power_level", name + " has no power level " + std::to_string(level));
  }
  return power_levels[static_cast<std::size_t>(level - 1)];
}

const RateLevel& TransceiverModel::rate(int level) const {
  if (level < 1 || level > rate_level_count()) {
    throw ValidationError("rate_level", name + " has no rate level " + std::to_string(level));
  }
  return rate_levels[static_cast<std::size_t>(level - 1)];
}

int TransceiverModel::slowest_rate_level() const {
  if (rate_levels.empty()) throw ValidationError("rate_levels", "no rate levels");
  const auto it = std::min_element(
      rate_levels.begin(), rate_levels.end(),
      [](const RateLevel& a, const RateLevel& b) { return a.rate_bps < b.rate_bps; });
  return static_cast<int>(it - rate_levels.begin()) + 1;
}

void TransceiverModel::validate() const {
  if (name.empty()) throw ValidationError("name", "transceiver name is empty");
  if (power_levels.empty()) throw ValidationError("power_levels", name + ": no power levels");
  if (rate_levels.empty()) throw ValidationError("rate_levels", name + ": no rate levels");
  for (std::size_t i = 0; i < power_levels.size(); ++i) {
    const auto field = "power_levels[" + std::to_string(i) + "]";
    if (!std::isfinite(power_levels[i].output_dbm)) {
      throw ValidationError(field + ".output_dbm", "not finite");
    }
    if (!(power_levels[i].current_ma > 0.0)) {
      throw ValidationError(field + ".current_ma", "current must be positive");
    }
    if (i > 0 && power_levels[i].output_dbm > power_levels[i - 1].output_dbm) {
      throw ValidationError(field + ".output_dbm",
                            "output power must not increase with level index");
    }
  }
  for (std::size_t i = 0; i < rate_levels.size(); ++i) {
    const auto field = "rate_levels[" + std::to_string(i) + "]";
    if (!(rate_levels[i].rate_bps > 0.0)) {
      throw ValidationError(field + ".rate_bps", "rate must be positive");
    }
    if (!std::isfinite(rate_levels[i].sensitivity_dbm)) {
      throw ValidationError(field + ".sensitivity_dbm", "not finite");
    }
  }
  if (!(rx_current_ma >= 0.0)) throw ValidationError("rx_current_ma", "must be non-negative");
}

void RadioEnvironment::validate() const {
  if (!(carrier_frequency_hz > 0.0)) {
    throw ValidationError("environment.carrier_frequency_hz", "must be positive");
  }
  if (!(supply_voltage_v > 0.0)) {
    throw ValidationError("environment.supply_voltage_v", "must be positive");
  }
  if (!(path_loss.reference_frequency_hz > 0.0)) {
    throw ValidationError("environment.path_loss.reference_frequency_hz", "must be positive");
  }
  if (!(path_loss.distance_slope_db > 0.0)) {
    throw ValidationError("environment.path_loss.distance_slope_db", "must be positive");
  }
}

double path_loss(double distance_m, double frequency_hz, const PathLossModel& model) {
  if (!(distance_m > 0.0)) throw ValidationError("distance", "distance must be positive");
  if (!(frequency_hz > 0.0)) throw ValidationError("frequency", "frequency must be positive");
  return model.intercept_db + model.distance_slope_db * std::log10(distance_m) +
         model.frequency_slope_db * std::log10(frequency_hz / model.reference_frequency_hz);
}

double link_budget_db(const TransceiverModel& tx, const RadioEnvironment& env, int power_level,
                      int rate_level) {
  return tx.power(power_level).output_dbm + env.tx_antenna_gain_dbi + env.rx_antenna_gain_dbi -
         tx.rate(rate_level).sensitivity_dbm;
}

bool is_feasible(const TransceiverModel& tx, const RadioEnvironment& env, int power_level,
                 int rate_level, double distance_m) {
  const double budget = link_budget_db(tx, env, power_level, rate_level);
  return budget + kBudgetSlackDb >=
         path_loss(distance_m, env.carrier_frequency_hz, env.path_loss);
}

std::optional<int> min_power_for(const TransceiverModel& tx, const RadioEnvironment& env,
                                 int rate_level, double distance_m) {
  tx.rate(rate_level);
  // Output is non-increasing in level index, so the feasible levels form a prefix.
  int lo = 1;
  int hi = tx.power_level_count();
  if (!is_feasible(tx, env, lo, rate_level, distance_m)) return std::nullopt;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (is_feasible(tx, env, mid, rate_level, distance_m)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

double max_range(const TransceiverModel& tx, const RadioEnvironment& env) {
  const auto& model = env.path_loss;
  const double budget = link_budget_db(tx, env, 1, tx.slowest_rate_level());
  const double frequency_term =
      model.frequency_slope_db * std::log10(env.carrier_frequency_hz / model.reference_frequency_hz);
  return std::pow(10.0, (budget - model.intercept_db - frequency_term) / model.distance_slope_db);
}

const std::vector<TransceiverModel>& builtin_transceivers() {
  static const std::vector<TransceiverModel> catalog = make_builtins();
  return catalog;
}

const TransceiverModel& find_transceiver(std::string_view name,
                                         const std::vector<TransceiverModel>& extra) {
  for (const auto& tx : extra) {
    if (iequals(tx.name, name)) return tx;
  }
  // The radio is sold as Si4464; accept either spelling.
  const std::string_view key = iequals(name, "Si4464") ? std::string_view("Si4644") : name;
  for (const auto& tx : builtin_transceivers()) {
    if (iequals(tx.name, key)) return tx;
  }
  throw ValidationError("transceiver", "unknown transceiver '" + std::string(name) + "'");
}

TransceiverModel transceiver_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("transceiver", "expected an object");
  TransceiverModel tx;
  if (!doc.contains("name") || !doc.at("name").is_string()) {
    throw ValidationError("transceiver.name", "missing or not a string");
  }
  tx.name = doc.at("name").get<std::string>();
  tx.rx_current_ma = require_number(doc, "rx_current_ma", "transceiver");

  for (const char* key : {"power_levels", "rate_levels"}) {
    if (!doc.contains(key)) throw ValidationError(std::string("transceiver.") + key, "missing");
    if (!doc.at(key).is_array()) {
      throw ValidationError(std::string("transceiver.") + key, "expected an array");
    }
  }
  std::size_t i = 0;
  for (const auto& entry : doc.at("power_levels")) {
    const auto path = "transceiver.power_levels[" + std::to_string(i++) + "]";
    if (!entry.is_object()) throw ValidationError(path, "expected an object");
    tx.power_levels.push_back(
        {require_number(entry, "output_dbm", path), require_number(entry, "current_ma", path)});
  }
  i = 0;
  for (const auto& entry : doc.at("rate_levels")) {
    const auto path = "transceiver.rate_levels[" + std::to_string(i++) + "]";
    if (!entry.is_object()) throw ValidationError(path, "expected an object");
    tx.rate_levels.push_back(
        {require_number(entry, "rate_bps", path), require_number(entry, "sensitivity_dbm", path)});
  }
  tx.validate();
  return tx;
}

nlohmann::json to_json(const TransceiverModel& tx) {
  nlohmann::json doc;
  doc["name"] = tx.name;
  doc["power_levels"] = nlohmann::json::array();
  for (const auto& level : tx.power_levels) {
    doc["power_levels"].push_back({{"output_dbm", level.output_dbm},
                                   {"current_ma", level.current_ma}});
  }
  doc["rate_levels"] = nlohmann::json::array();
  for (const auto& level : tx.rate_levels) {
    doc["rate_levels"].push_back({{"rate_bps", level.rate_bps},
                                  {"sensitivity_dbm", level.sensitivity_dbm}});
  }
  doc["rx_current_ma"] = tx.rx_current_ma;
  return doc;
}

std::vector<TransceiverModel> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open catalog file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  std::vector<TransceiverModel> catalog;
  if (doc.is_array()) {
    for (const auto& entry : doc) catalog.push_back(transceiver_from_json(entry));
  } else {
    catalog.push_back(transceiver_from_json(doc));
  }
  return catalog;
}

}  // namespace ringhop
