// ringhop: energy-optimal hop planning for ring-structured LPWAN uplinks.
//
//   ringhop optimize scenarios/scenario_1_1.json --format csv
//   ringhop sweep scenarios/sweep_3_rings.json --out sweep3.csv
//   ringhop catalog
//   ringhop table8
//
// Exit codes: 0 ok, 1 usage or golden mismatch, 2 parse, 3 validation,
// 4 I/O, 5 infeasible scenario.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ringhop/error.hpp"
#include "ringhop/scenario.hpp"

namespace {

using namespace ringhop;

struct CommonFlags {
  std::string format = "csv";
  std::string out = "-";
  bool no_aggregation = false;
  bool exhaustive = false;
  int threads = 0;
  bool override_guards = false;
  std::string catalog;
};

SearchOptions search_options(const CommonFlags& flags) {
  SearchOptions opts;
  opts.exhaustive = flags.exhaustive;
  opts.threads = flags.threads;
  opts.override_guards = flags.override_guards;
  return opts;
}

std::vector<TransceiverModel> extra_catalog(const CommonFlags& flags) {
  if (flags.catalog.empty()) return {};
  return load_catalog(flags.catalog);
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", flags.out, "Output file, '-' for stdout")->capture_default_str();
  cmd->add_flag("--no-aggregation", flags.no_aggregation, "One payload per packet");
  cmd->add_flag("--exhaustive", flags.exhaustive, "Search every feasible (power, rate) pair");
  cmd->add_option("--threads", flags.threads, "Worker threads (0: RINGHOP_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--override-guards", flags.override_guards,
                "Allow R > 10 and lift the per-combo assignment cap");
  cmd->add_option("--catalog", flags.catalog, "Extra transceiver catalog (JSON)");
}

int cmd_optimize(const std::string& path, const CommonFlags& flags) {
  auto scenario = load_scenario(path, extra_catalog(flags));
  if (flags.no_aggregation) scenario.packet.aggregation = false;
  const auto bundle = run(scenario, search_options(flags));
  emit(bundle, parse_output_format(flags.format), flags.out);
  return 0;
}

int cmd_sweep(const std::string& path, const CommonFlags& flags) {
  auto spec = load_sweep(path, extra_catalog(flags));
  if (flags.no_aggregation) spec.scenario_template["aggregation"] = false;
  const auto rows = sweep(spec, search_options(flags));
  emit(rows, parse_output_format(flags.format), flags.out);
  return 0;
}

int cmd_catalog(const CommonFlags& flags) {
  const auto extra = extra_catalog(flags);
  std::vector<TransceiverModel> all = extra;
  for (const auto& tx : builtin_transceivers()) all.push_back(tx);

  if (parse_output_format(flags.format) == OutputFormat::Json) {
    auto doc = nlohmann::json::array();
    for (const auto& tx : all) doc.push_back(to_json(tx));
    write_output(doc.dump(2) + "\n", flags.out);
    return 0;
  }
  const RadioEnvironment env;
  std::ostringstream out;
  out << "transceiver,kind,level,value,unit,current_mA,sensitivity_dBm\n";
  for (const auto& tx : all) {
    for (int p = 1; p <= tx.power_level_count(); ++p) {
      const auto& level = tx.power(p);
      out << tx.name << ",power," << p << ',' << format_number(level.output_dbm) << ",dBm,"
          << format_number(level.current_ma) << ",\n";
    }
    for (int s = 1; s <= tx.rate_level_count(); ++s) {
      const auto& level = tx.rate(s);
      out << tx.name << ",rate," << s << ',' << format_number(level.rate_bps / 1e3) << ",kbps,"
          << format_number(tx.rx_current_ma) << ',' << format_number(level.sensitivity_dbm)
          << '\n';
    }
    out << tx.name << ",max_range,,"
        << format_number(max_range(tx, env)) << ",m,,\n";
  }
  write_output(out.str(), flags.out);
  return 0;
}

// Golden per-ring values for the 7-ring, c=3 CC1200 deployment.
struct GoldenRow {
  int sh_p, sh_s;
  int oh_delta;
  std::int64_t oh_np, oh_ndp;
};

constexpr GoldenRow kTable8[] = {
    {5, 1, 1, 985, 247}, {4, 3, 1, 328, 82}, {1, 4, 1, 109, 28}, {1, 6, 4, 4, 1},
    {4, 7, 1, 1, 1},     {2, 7, 3, 4, 1},    {1, 7, 1, 1, 1},
};

int cmd_table8(const CommonFlags& flags) {
  Scenario scenario;
  scenario.id = "1.1";
  scenario.rings = 7;
  scenario.children_ratio = 3;
  scenario.transceiver = find_transceiver("CC1200");
  scenario.models = {RoutingModel::SingleHop, RoutingModel::OptimalHop};
  const auto bundle = run(scenario, search_options(flags));
  const auto& sh = *bundle.find(RoutingModel::SingleHop);
  const auto& oh = *bundle.find(RoutingModel::OptimalHop);

  std::ostringstream out;
  out << "ring,sh_p,sh_s,sh_n_p,sh_n_dp,oh_delta,oh_p,oh_s,oh_n_p,oh_n_dp,match\n";
  bool all_match = true;
  for (int r = 1; r <= 7; ++r) {
    const auto i = static_cast<std::size_t>(r - 1);
    const auto& g = kTable8[i];
    const auto& sc = sh.config.entries[i];
    const auto& oc = oh.config.entries[i];
    const bool match = sc.power_level == g.sh_p && sc.rate_level == g.sh_s &&
                       oh.delta.delta[i] == g.oh_delta && oh.payloads[i] == g.oh_np &&
                       oh.packets[i] == g.oh_ndp;
    all_match = all_match && match;
    out << r << ',' << sc.power_level << ',' << sc.rate_level << ',' << sh.payloads[i] << ','
        << sh.packets[i] << ',' << oh.delta.delta[i] << ',' << oc.power_level << ','
        << oc.rate_level << ',' << oh.payloads[i] << ',' << oh.packets[i] << ','
        << (match ? "yes" : "NO") << '\n';
  }
  out << "# e_bt_mJ single-hop " << format_number(sh.report.bottleneck_j * 1e3)
      << " optimal-hop " << format_number(oh.report.bottleneck_j * 1e3) << '\n';
  write_output(out.str(), flags.out);
  return all_match ? 0 : 1;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return 2;
  if (dynamic_cast<const ValidationError*>(&e)) return 3;
  if (dynamic_cast<const GuardError*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  if (dynamic_cast<const InfeasibleError*>(&e)) return 5;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-optimal hop planning for ring-structured LPWAN uplinks"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string input;

  auto* optimize_cmd = app.add_subcommand("optimize", "Run all routing models for one scenario");
  optimize_cmd->add_option("scenario", input, "Scenario JSON file")->required();
  add_common(optimize_cmd, flags);

  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep R or c over a scenario template");
  sweep_cmd->add_option("spec", input, "Sweep JSON file")->required();
  add_common(sweep_cmd, flags);

  auto* catalog_cmd = app.add_subcommand("catalog", "Print transceiver tables");
  add_common(catalog_cmd, flags);

  auto* table8_cmd = app.add_subcommand("table8", "Reproduce the golden 7-ring configuration table");
  add_common(table8_cmd, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*optimize_cmd) return cmd_optimize(input, flags);
    if (*sweep_cmd) return cmd_sweep(input, flags);
    if (*catalog_cmd) return cmd_catalog(flags);
    if (*table8_cmd) return cmd_table8(flags);
  } catch (const std::exception& e) {
    std::cerr << "ringhop: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 1;
}
