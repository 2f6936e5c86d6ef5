#include "ringhop/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ringhop/error.hpp"

namespace ringhop {

using nlohmann::json;

namespace {

const json* field(const json& doc, const char* key) {
  const auto it = doc.find(key);
  return it == doc.end() || it->is_null() ? nullptr : &*it;
}

int get_int(const json& value, const std::string& path) {
  if (value.is_number_integer()) return value.get<int>();
  if (value.is_number_float()) {
    const double v = value.get<double>();
    if (std::floor(v) == v) return static_cast<int>(v);
  }
  throw ValidationError(path, "expected an integer");
}

double get_double(const json& value, const std::string& path) {
  if (!value.is_number()) throw ValidationError(path, "expected a number");
  return value.get<double>();
}

bool get_bool(const json& value, const std::string& path) {
  if (!value.is_boolean()) throw ValidationError(path, "expected true or false");
  return value.get<bool>();
}

std::string get_string(const json& value, const std::string& path) {
  if (!value.is_string()) throw ValidationError(path, "expected a string");
  return value.get<std::string>();
}

void reject_unknown(const json& doc, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw ValidationError(prefix + key, "unknown field");
  }
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

RadioEnvironment environment_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("environment", "expected an object");
  reject_unknown(doc,
                 {"carrier_frequency_hz", "tx_antenna_gain_dbi", "rx_antenna_gain_dbi",
                  "supply_voltage_v", "path_loss"},
                 "environment.");
  RadioEnvironment env;
  if (auto* v = field(doc, "carrier_frequency_hz")) {
    env.carrier_frequency_hz = get_double(*v, "environment.carrier_frequency_hz");
  }
  if (auto* v = field(doc, "tx_antenna_gain_dbi")) {
    env.tx_antenna_gain_dbi = get_double(*v, "environment.tx_antenna_gain_dbi");
  }
  if (auto* v = field(doc, "rx_antenna_gain_dbi")) {
    env.rx_antenna_gain_dbi = get_double(*v, "environment.rx_antenna_gain_dbi");
  }
  if (auto* v = field(doc, "supply_voltage_v")) {
    env.supply_voltage_v = get_double(*v, "environment.supply_voltage_v");
  }
  if (auto* pl = field(doc, "path_loss")) {
    if (!pl->is_object()) throw ValidationError("environment.path_loss", "expected an object");
    reject_unknown(*pl,
                   {"intercept_db", "distance_slope_db", "frequency_slope_db",
                    "reference_frequency_hz"},
                   "environment.path_loss.");
    auto& m = env.path_loss;
    if (auto* v = field(*pl, "intercept_db")) m.intercept_db = get_double(*v, "path_loss.intercept_db");
    if (auto* v = field(*pl, "distance_slope_db")) {
      m.distance_slope_db = get_double(*v, "path_loss.distance_slope_db");
    }
    if (auto* v = field(*pl, "frequency_slope_db")) {
      m.frequency_slope_db = get_double(*v, "path_loss.frequency_slope_db");
    }
    if (auto* v = field(*pl, "reference_frequency_hz")) {
      m.reference_frequency_hz = get_double(*v, "path_loss.reference_frequency_hz");
    }
  }
  env.validate();
  return env;
}

json to_json(const RadioEnvironment& env) {
  return {{"carrier_frequency_hz", env.carrier_frequency_hz},
          {"tx_antenna_gain_dbi", env.tx_antenna_gain_dbi},
          {"rx_antenna_gain_dbi", env.rx_antenna_gain_dbi},
          {"supply_voltage_v", env.supply_voltage_v},
          {"path_loss",
           {{"intercept_db", env.path_loss.intercept_db},
            {"distance_slope_db", env.path_loss.distance_slope_db},
            {"frequency_slope_db", env.path_loss.frequency_slope_db},
            {"reference_frequency_hz", env.path_loss.reference_frequency_hz}}}};
}

std::string delta_cell(const HopVector& delta) {
  std::string out;
  for (std::size_t i = 0; i < delta.delta.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(delta.delta[i]);
  }
  return out;
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string millijoules(double joules) { return format_number(joules * 1e3); }

std::string_view to_string(SweepVariable variable) {
  return variable == SweepVariable::Rings ? "R" : "c";
}

json to_json(const SearchStats& s) {
  return {{"combos_evaluated", s.combos_evaluated},
          {"combos_feasible", s.combos_feasible},
          {"assignments_evaluated", s.assignments_evaluated},
          {"branches_cut", s.branches_cut},
          {"configs_pruned", s.configs_pruned}};
}

json to_json(const RoutingResult& r) {
  json doc;
  doc["model"] = std::string(to_string(r.model));
  doc["delta"] = r.delta.delta;
  doc["config"] = json::array();
  for (const auto& c : r.config.entries) {
    doc["config"].push_back({{"power_level", c.power_level}, {"rate_level", c.rate_level}});
  }
  doc["payloads"] = r.payloads;
  doc["packets"] = r.packets;
  doc["rings"] = json::array();
  for (const auto& e : r.report.rings) doc["rings"].push_back({{"tx_j", e.tx_j}, {"rx_j", e.rx_j}});
  doc["bottleneck_j"] = r.report.bottleneck_j;
  doc["bottleneck_ring"] = r.report.bottleneck_ring;
  doc["network_j"] = r.report.network_j;
  doc["stats"] = to_json(r.stats);
  return doc;
}

RoutingResult routing_result_from_json(const json& doc) {
  try {
    RoutingResult r;
    r.model = parse_routing_model(doc.at("model").get<std::string>());
    r.delta.delta = doc.at("delta").get<std::vector<int>>();
    for (const auto& c : doc.at("config")) {
      r.config.entries.push_back({c.at("power_level").get<int>(), c.at("rate_level").get<int>()});
    }
    r.payloads = doc.at("payloads").get<std::vector<std::int64_t>>();
    r.packets = doc.at("packets").get<std::vector<std::int64_t>>();
    for (const auto& e : doc.at("rings")) {
      r.report.rings.push_back({e.at("tx_j").get<double>(), e.at("rx_j").get<double>()});
    }
    r.report.bottleneck_j = doc.at("bottleneck_j").get<double>();
    r.report.bottleneck_ring = doc.at("bottleneck_ring").get<int>();
    r.report.network_j = doc.at("network_j").get<double>();
    const auto& s = doc.at("stats");
    r.stats.combos_evaluated = s.at("combos_evaluated").get<std::uint64_t>();
    r.stats.combos_feasible = s.at("combos_feasible").get<std::uint64_t>();
    r.stats.assignments_evaluated = s.at("assignments_evaluated").get<std::uint64_t>();
    r.stats.branches_cut = s.at("branches_cut").get<std::uint64_t>();
    r.stats.configs_pruned = s.at("configs_pruned").get<std::uint64_t>();
    return r;
  } catch (const json::exception& e) {
    throw ValidationError("results", e.what());
  }
}

}  // namespace

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

Deployment Scenario::deployment() const {
  transceiver.validate();
  environment.validate();
  packet.validate();
  const double d = max_distance ? *max_distance : max_range(transceiver, environment);
  return Deployment{build_network(d, rings, children_ratio, branches, spreading), transceiver,
                    environment, packet};
}

Scenario scenario_from_json(const json& doc, const std::vector<TransceiverModel>& extra_catalog) {
  if (!doc.is_object()) throw ValidationError("", "scenario must be a JSON object");
  reject_unknown(doc,
                 {"id", "R", "c", "B", "D", "spreading", "transceiver", "environment", "packet",
                  "aggregation", "models", "description"},
                 "");
  Scenario s;
  if (auto* v = field(doc, "id")) s.id = get_string(*v, "id");

  const auto* rings = field(doc, "R");
  if (!rings) throw ValidationError("R", "missing field");
  s.rings = get_int(*rings, "R");
  const auto* ratio = field(doc, "c");
  if (!ratio) throw ValidationError("c", "missing field");
  s.children_ratio = get_int(*ratio, "c");
  if (auto* v = field(doc, "B")) s.branches = get_int(*v, "B");
  if (s.rings < 1 || s.rings > kMaxRings) {
    throw ValidationError("R", "must lie in 1.." + std::to_string(kMaxRings));
  }
  if (s.children_ratio < 1) throw ValidationError("c", "must be >= 1");
  if (s.branches < 1) throw ValidationError("B", "must be >= 1");
  if (auto* v = field(doc, "D")) {
    const double d = get_double(*v, "D");
    if (!(d > 0.0)) throw ValidationError("D", "must be positive");
    s.max_distance = d;
  }
  if (auto* v = field(doc, "spreading")) s.spreading = parse_spreading(get_string(*v, "spreading"));

  const auto* tx = field(doc, "transceiver");
  if (!tx) throw ValidationError("transceiver", "missing field");
  if (tx->is_string()) {
    s.transceiver = find_transceiver(tx->get<std::string>(), extra_catalog);
  } else {
    s.transceiver = transceiver_from_json(*tx);
  }

  if (auto* v = field(doc, "environment")) s.environment = environment_from_json(*v);

  if (auto* v = field(doc, "packet")) {
    if (!v->is_object()) throw ValidationError("packet", "expected an object");
    reject_unknown(*v, {"payload_bytes", "header_bytes", "packet_bytes"}, "packet.");
    if (auto* f = field(*v, "payload_bytes")) {
      s.packet.payload_bytes = get_int(*f, "packet.payload_bytes");
    }
    if (auto* f = field(*v, "header_bytes")) s.packet.header_bytes = get_int(*f, "packet.header_bytes");
    if (auto* f = field(*v, "packet_bytes")) s.packet.packet_bytes = get_int(*f, "packet.packet_bytes");
  }
  if (auto* v = field(doc, "aggregation")) s.packet.aggregation = get_bool(*v, "aggregation");
  s.packet.validate();

  if (auto* v = field(doc, "models")) {
    if (!v->is_array() || v->empty()) throw ValidationError("models", "expected a non-empty array");
    s.models.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const auto path = "models[" + std::to_string(i) + "]";
      s.models.push_back(parse_routing_model(get_string((*v)[i], path)));
    }
  }
  return s;
}

json to_json(const Scenario& s) {
  json doc;
  doc["id"] = s.id;
  doc["R"] = s.rings;
  doc["c"] = s.children_ratio;
  doc["B"] = s.branches;
  if (s.max_distance) doc["D"] = *s.max_distance;
  doc["spreading"] = std::string(to_string(s.spreading));
  doc["transceiver"] = to_json(s.transceiver);
  doc["environment"] = to_json(s.environment);
  doc["packet"] = {{"payload_bytes", s.packet.payload_bytes},
                   {"header_bytes", s.packet.header_bytes},
                   {"packet_bytes", s.packet.packet_bytes}};
  doc["aggregation"] = s.packet.aggregation;
  doc["models"] = json::array();
  for (auto m : s.models) doc["models"].push_back(std::string(to_string(m)));
  return doc;
}

Scenario load_scenario(const std::string& path, const std::vector<TransceiverModel>& extra_catalog) {
  return scenario_from_json(parse_file(path), extra_catalog);
}

const RoutingResult* ResultBundle::find(RoutingModel model) const {
  for (const auto& r : results) {
    if (r.model == model) return &r;
  }
  return nullptr;
}

ResultBundle run(const Scenario& scenario, const SearchOptions& options) {
  const auto deployment = scenario.deployment();
  ResultBundle bundle;
  bundle.scenario_id = scenario.id;
  for (auto model : scenario.models) {
    if (bundle.find(model)) continue;
    bundle.results.push_back(baseline(model, deployment, options));
  }
  const auto* sh = bundle.find(RoutingModel::SingleHop);
  const auto* nrh = bundle.find(RoutingModel::NextRingHop);
  const auto* oh = bundle.find(RoutingModel::OptimalHop);
  if (sh && nrh && oh) bundle.ratios = improvement_ratios(*sh, *nrh, *oh);
  return bundle;
}

SweepSpec sweep_from_json(const json& doc, const std::vector<TransceiverModel>& extra_catalog) {
  if (!doc.is_object()) throw ValidationError("", "sweep spec must be a JSON object");
  reject_unknown(doc, {"id", "variable", "from", "to", "template", "transceivers", "description"},
                 "");
  SweepSpec spec;
  spec.extra_catalog = extra_catalog;
  if (auto* v = field(doc, "id")) spec.id = get_string(*v, "id");
  const auto* variable = field(doc, "variable");
  if (!variable) throw ValidationError("variable", "missing field");
  const auto name = get_string(*variable, "variable");
  if (name == "R") {
    spec.variable = SweepVariable::Rings;
  } else if (name == "c") {
    spec.variable = SweepVariable::ChildrenRatio;
  } else {
    throw ValidationError("variable", "must be \"R\" or \"c\"");
  }
  const auto* from = field(doc, "from");
  const auto* to = field(doc, "to");
  if (!from) throw ValidationError("from", "missing field");
  if (!to) throw ValidationError("to", "missing field");
  spec.from = get_int(*from, "from");
  spec.to = get_int(*to, "to");
  if (spec.from < 1) throw ValidationError("from", "must be >= 1");
  if (spec.to < spec.from) throw ValidationError("to", "range is empty");
  if (spec.variable == SweepVariable::Rings && spec.to > kMaxRings) {
    throw ValidationError("to", "must be <= " + std::to_string(kMaxRings));
  }

  spec.scenario_template = json::object();
  if (auto* v = field(doc, "template")) {
    if (!v->is_object()) throw ValidationError("template", "expected an object");
    spec.scenario_template = *v;
  }
  if (auto* v = field(doc, "transceivers")) {
    if (!v->is_array()) throw ValidationError("transceivers", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const auto path = "transceivers[" + std::to_string(i) + "]";
      auto tx_name = get_string((*v)[i], path);
      find_transceiver(tx_name, extra_catalog);
      spec.transceivers.push_back(std::move(tx_name));
    }
  }
  if (spec.transceivers.empty()) {
    if (!spec.scenario_template.contains("transceiver")) {
      throw ValidationError("transceivers", "no transceiver in list or template");
    }
    spec.transceivers.emplace_back();
  }
  return spec;
}

SweepSpec load_sweep(const std::string& path, const std::vector<TransceiverModel>& extra_catalog) {
  return sweep_from_json(parse_file(path), extra_catalog);
}

std::vector<SweepRow> sweep(const SweepSpec& spec, const SearchOptions& options) {
  std::vector<SweepRow> rows;
  for (int value = spec.from; value <= spec.to; ++value) {
    for (const auto& tx_name : spec.transceivers) {
      SweepRow row;
      row.sweep_id = spec.id;
      row.variable = spec.variable;
      row.value = value;
      try {
        json doc = spec.scenario_template;
        doc[spec.variable == SweepVariable::Rings ? "R" : "c"] = value;
        if (!tx_name.empty()) doc["transceiver"] = tx_name;
        doc["models"] = {"single-hop", "next-ring-hop", "optimal-hop"};
        if (!doc.contains("R")) doc["R"] = 1;
        if (!doc.contains("c")) doc["c"] = 1;
        const auto scenario = scenario_from_json(doc, spec.extra_catalog);
        row.transceiver = scenario.transceiver.name;
        const auto bundle = run(scenario, options);
        row.stations = bundle.find(RoutingModel::OptimalHop)->payloads.empty()
                           ? 0
                           : scenario.deployment().network.station_count;
        row.optimal_delta = bundle.find(RoutingModel::OptimalHop)->delta;
        row.bottleneck_sh_j = bundle.find(RoutingModel::SingleHop)->report.bottleneck_j;
        row.bottleneck_nrh_j = bundle.find(RoutingModel::NextRingHop)->report.bottleneck_j;
        row.bottleneck_oh_j = bundle.find(RoutingModel::OptimalHop)->report.bottleneck_j;
        row.ratios = *bundle.ratios;
      } catch (const Error& e) {
        if (row.transceiver.empty()) row.transceiver = tx_name;
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

OutputFormat parse_output_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw ValidationError("format", "expected csv or json, got '" + text + "'");
}

std::string bundle_csv_header() {
  return "scenario_id,model,ring,delta,power_level,rate_level,n_p,n_dp_tx,e_tx_mJ,e_rx_mJ,e_mJ,"
         "e_bt_mJ,e_N_mJ\n";
}

std::string bundle_to_csv(const ResultBundle& bundle, bool with_header) {
  std::ostringstream out;
  if (with_header) out << bundle_csv_header();
  const auto id = csv_escape(bundle.scenario_id);
  for (const auto& result : bundle.results) {
    const auto model = to_string(result.model);
    for (int r = 1; r <= result.delta.ring_count(); ++r) {
      const auto i = static_cast<std::size_t>(r - 1);
      const auto& energy = result.report.rings[i];
      const auto& config = result.config.entries[i];
      out << id << ',' << model << ',' << r << ',' << result.delta.delta[i] << ','
          << config.power_level << ',' << config.rate_level << ',' << result.payloads[i] << ','
          << result.packets[i] << ',' << millijoules(energy.tx_j) << ','
          << millijoules(energy.rx_j) << ',' << millijoules(energy.total_j()) << ",,\n";
    }
    out << id << ',' << model << ",summary," << delta_cell(result.delta) << ",,,,,,,,"
        << millijoules(result.report.bottleneck_j) << ','
        << millijoules(result.report.network_j) << '\n';
  }
  return out.str();
}

json to_json(const ResultBundle& bundle) {
  json doc;
  doc["scenario_id"] = bundle.scenario_id;
  doc["results"] = json::array();
  for (const auto& r : bundle.results) doc["results"].push_back(to_json(r));
  if (bundle.ratios) {
    doc["ratios"] = {{"rho_SH", bundle.ratios->rho_sh}, {"rho_NRH", bundle.ratios->rho_nrh}};
  } else {
    doc["ratios"] = nullptr;
  }
  return doc;
}

ResultBundle bundle_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("", "bundle must be a JSON object");
  ResultBundle bundle;
  try {
    bundle.scenario_id = doc.at("scenario_id").get<std::string>();
    for (const auto& r : doc.at("results")) bundle.results.push_back(routing_result_from_json(r));
    if (auto* v = field(doc, "ratios")) {
      bundle.ratios = ImprovementRatios{v->at("rho_SH").get<double>(), v->at("rho_NRH").get<double>()};
    }
  } catch (const json::exception& e) {
    throw ValidationError("bundle", e.what());
  }
  return bundle;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "sweep_id,variable,value,transceiver,N,delta_OH,e_bt_SH_mJ,e_bt_NRH_mJ,e_bt_OH_mJ,"
         "rho_SH,rho_NRH,error\n";
  for (const auto& row : rows) {
    out << csv_escape(row.sweep_id) << ',' << to_string(row.variable) << ',' << row.value << ','
        << csv_escape(row.transceiver) << ',';
    if (row.error.empty()) {
      out << row.stations << ',' << delta_cell(row.optimal_delta) << ','
          << millijoules(row.bottleneck_sh_j) << ',' << millijoules(row.bottleneck_nrh_j) << ','
          << millijoules(row.bottleneck_oh_j) << ',' << format_number(row.ratios.rho_sh) << ','
          << format_number(row.ratios.rho_nrh) << ",\n";
    } else {
      out << ",,,,,,," << csv_escape(row.error) << '\n';
    }
  }
  return out.str();
}

json to_json(const std::vector<SweepRow>& rows) {
  json doc = json::array();
  for (const auto& row : rows) {
    json entry{{"sweep_id", row.sweep_id},
               {"variable", std::string(to_string(row.variable))},
               {"value", row.value},
               {"transceiver", row.transceiver}};
    if (row.error.empty()) {
      entry["N"] = row.stations;
      entry["delta_OH"] = row.optimal_delta.delta;
      entry["e_bt_SH_j"] = row.bottleneck_sh_j;
      entry["e_bt_NRH_j"] = row.bottleneck_nrh_j;
      entry["e_bt_OH_j"] = row.bottleneck_oh_j;
      entry["rho_SH"] = row.ratios.rho_sh;
      entry["rho_NRH"] = row.ratios.rho_nrh;
      entry["error"] = nullptr;
    } else {
      entry["error"] = row.error;
    }
    doc.push_back(std::move(entry));
  }
  return doc;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

void emit(const ResultBundle& bundle, OutputFormat format, const std::string& path) {
  write_output(format == OutputFormat::Csv ? bundle_to_csv(bundle) : to_json(bundle).dump(2) + "\n",
               path);
}

void emit(const std::vector<SweepRow>& rows, OutputFormat format, const std::string& path) {
  write_output(format == OutputFormat::Csv ? sweep_to_csv(rows) : to_json(rows).dump(2) + "\n",
               path);
}

}  // namespace ringhop
