#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ringhop/optimizer.hpp"

namespace ringhop {

/// One study configuration, as read from a scenario file.
///
/// Scenario files are JSON objects:
///
///     {
///       "id": "1.1",
///       "R": 7, "c": 3, "B": 1,
///       "spreading": "equidistant",          // or "fibonacci", "reverse-fibonacci"
///       "D": 1000.0,                          // optional; defaults to max_range
///       "transceiver": "CC1200",              // or an inline catalog object
///       "environment": {"carrier_frequency_hz": 868e6, "tx_antenna_gain_dbi": 0,
///                       "rx_antenna_gain_dbi": 3, "supply_voltage_v": 3},
///       "packet": {"payload_bytes": 15, "header_bytes": 2, "packet_bytes": 65},
///       "aggregation": true,
///       "models": ["single-hop", "next-ring-hop", "optimal-hop"]
///     }
///
/// Only R, c and transceiver are required.
struct Scenario {
  std::string id;
  int rings = 1;
  int children_ratio = 1;
  int branches = 1;
  Spreading spreading = Spreading::Equidistant;
  std::optional<double> max_distance;
  TransceiverModel transceiver;
  RadioEnvironment environment;
  PacketConfig packet;
  std::vector<RoutingModel> models{RoutingModel::SingleHop, RoutingModel::NextRingHop,
                                   RoutingModel::OptimalHop};

  /// Network (with D resolved to max_range when unset) plus radio and packet settings.
  Deployment deployment() const;
};

Scenario scenario_from_json(const nlohmann::json& doc,
                            const std::vector<TransceiverModel>& extra_catalog = {});
nlohmann::json to_json(const Scenario& scenario);

/// Throws IoError, ParseError (bad JSON) or ValidationError (bad contents).
Scenario load_scenario(const std::string& path,
                       const std::vector<TransceiverModel>& extra_catalog = {});

/// All requested routing models for one scenario.
struct ResultBundle {
  std::string scenario_id;
  std::vector<RoutingResult> results;
  /// Present when single-hop, next-ring-hop and optimal-hop were all run.
  std::optional<ImprovementRatios> ratios;

  const RoutingResult* find(RoutingModel model) const;

  friend bool operator==(const ResultBundle&, const ResultBundle&) = default;
};

ResultBundle run(const Scenario& scenario, const SearchOptions& options = {});

enum class SweepVariable { Rings, ChildrenRatio };

/// Grid over R or c. The template is a scenario document that may omit the
/// swept variable and the transceiver; both are filled in per row.
struct SweepSpec {
  std::string id;
  SweepVariable variable = SweepVariable::Rings;
  int from = 1;
  int to = 1;
  nlohmann::json scenario_template;
  std::vector<std::string> transceivers;
  std::vector<TransceiverModel> extra_catalog;
};

SweepSpec sweep_from_json(const nlohmann::json& doc,
                          const std::vector<TransceiverModel>& extra_catalog = {});
SweepSpec load_sweep(const std::string& path,
                     const std::vector<TransceiverModel>& extra_catalog = {});

struct SweepRow {
  std::string sweep_id;
  SweepVariable variable = SweepVariable::Rings;
  int value = 0;
  std::string transceiver;
  std::int64_t stations = 0;
  HopVector optimal_delta;
  double bottleneck_sh_j = 0.0;
  double bottleneck_nrh_j = 0.0;
  double bottleneck_oh_j = 0.0;
  ImprovementRatios ratios;
  /// Non-empty when this grid point failed; the other fields are then unset.
  std::string error;
};

/// One row per (value, transceiver), values outermost. A failing row records
/// its error and the sweep continues.
std::vector<SweepRow> sweep(const SweepSpec& spec, const SearchOptions& options = {});

enum class OutputFormat { Csv, Json };

OutputFormat parse_output_format(const std::string& text);

/// scenario_id, model, ring, delta, power_level, rate_level, n_p, n_dp_tx,
/// e_tx_mJ, e_rx_mJ, e_mJ, e_bt_mJ, e_N_mJ. One row per ring and one
/// "summary" row per model; numbers carry 6 significant digits.
std::string bundle_csv_header();
std::string bundle_to_csv(const ResultBundle& bundle, bool with_header = true);
nlohmann::json to_json(const ResultBundle& bundle);
ResultBundle bundle_from_json(const nlohmann::json& doc);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
nlohmann::json to_json(const std::vector<SweepRow>& rows);

/// Write text to `path`, or to stdout when path is empty or "-". Throws IoError.
void write_output(const std::string& text, const std::string& path);
void emit(const ResultBundle& bundle, OutputFormat format, const std::string& path);
void emit(const std::vector<SweepRow>& rows, OutputFormat format, const std::string& path);

/// Format with 6 significant digits.
std::string format_number(double value);

}  // namespace ringhop
