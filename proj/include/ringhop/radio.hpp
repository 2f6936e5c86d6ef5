#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ringhop {

struct PowerLevel {
  double output_dbm = 0.0;
  double current_ma = 0.0;
};

struct RateLevel {
  double rate_bps = 0.0;
  double sensitivity_dbm = 0.0;
};

/// A (power level, rate level) pair for one ring's uplink. Levels are 1-based;
/// power level 1 is the maximum output.
struct TxConfig {
  int power_level = 1;
  int rate_level = 1;

  friend auto operator<=>(const TxConfig&, const TxConfig&) = default;
};

/// Discrete transmit power and data-rate levels of a radio.
struct TransceiverModel {
  std::string name;
  std::vector<PowerLevel> power_levels;
  std::vector<RateLevel> rate_levels;
  double rx_current_ma = 0.0;

  int power_level_count() const { return static_cast<int>(power_levels.size()); }
  int rate_level_count() const { return static_cast<int>(rate_levels.size()); }
  const PowerLevel& power(int level) const;
  const RateLevel& rate(int level) const;
  /// Rate level with the lowest bit rate.
  int slowest_rate_level() const;
  double slowest_rate_bps() const { return rate(slowest_rate_level()).rate_bps; }

  /// Throws ValidationError when levels are empty, non-positive, or when
  /// output power increases with level index.
  void validate() const;
};

/// PL(d) = intercept + distance_slope*log10(d) + frequency_slope*log10(f / reference).
struct PathLossModel {
  double intercept_db = 23.3;
  double distance_slope_db = 37.6;
  double frequency_slope_db = 21.0;
  double reference_frequency_hz = 900e6;
};

struct RadioEnvironment {
  double carrier_frequency_hz = 868e6;
  double tx_antenna_gain_dbi = 0.0;
  double rx_antenna_gain_dbi = 3.0;
  double supply_voltage_v = 3.0;
  PathLossModel path_loss;

  void validate() const;
};

/// Slack on the link-budget comparison so that a hop of exactly max_range
/// stays feasible despite rounding.
inline constexpr double kBudgetSlackDb = 1e-9;

double path_loss(double distance_m, double frequency_hz, const PathLossModel& model = {});

/// Output power plus antenna gains minus sensitivity: the loss a link tolerates.
double link_budget_db(const TransceiverModel& tx, const RadioEnvironment& env, int power_level,
                      int rate_level);

bool is_feasible(const TransceiverModel& tx, const RadioEnvironment& env, int power_level,
                 int rate_level, double distance_m);

/// Lowest-output (highest-index) power level that closes the link at `rate_level`.
std::optional<int> min_power_for(const TransceiverModel& tx, const RadioEnvironment& env,
                                 int rate_level, double distance_m);

/// Distance at which power level 1 and the slowest rate exactly close the link.
double max_range(const TransceiverModel& tx, const RadioEnvironment& env);

/// CC1100, CC1200, Si4644 and SX1272 as compiled-in defaults.
const std::vector<TransceiverModel>& builtin_transceivers();

/// Case-insensitive lookup among `extra` first, then the built-ins.
/// Throws ValidationError if the name is unknown.
const TransceiverModel& find_transceiver(std::string_view name,
                                         const std::vector<TransceiverModel>& extra = {});

TransceiverModel transceiver_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const TransceiverModel& tx);

/// A catalog file holds either one transceiver object or an array of them.
std::vector<TransceiverModel> load_catalog(const std::string& path);

}  // namespace ringhop
