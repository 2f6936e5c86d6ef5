#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "ringhop/error.hpp"
#include "ringhop/scenario.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace ringhop;

namespace {

// Documents cross the boundary as JSON text; the Python side decodes them.
Scenario scenario_from_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  return scenario_from_json(doc);
}

SearchOptions options(bool exhaustive, int threads, bool override_guards) {
  SearchOptions opts;
  opts.exhaustive = exhaustive;
  opts.threads = threads;
  opts.override_guards = override_guards;
  return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy-optimal hop planning for ring-structured LPWAN uplinks";

  auto base = py::register_exception<Error>(m, "RinghopError");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<GuardError>(m, "GuardError", base.ptr());

  m.def("path_loss", [](double d, double f) { return path_loss(d, f); }, "distance_m"_a,
        "frequency_hz"_a = 868e6);
  m.def("max_range", [](const std::string& name) {
    return max_range(find_transceiver(name), RadioEnvironment{});
  }, "transceiver"_a);
  m.def("transceivers", [] {
    std::vector<std::string> names;
    for (const auto& tx : builtin_transceivers()) names.push_back(tx.name);
    return names;
  });
  m.def("catalog_json", [] {
    auto doc = nlohmann::json::array();
    for (const auto& tx : builtin_transceivers()) doc.push_back(to_json(tx));
    return doc.dump();
  });

  m.def("hop_combination_count", &hop_combination_count, "rings"_a);
  m.def("hop_combinations", [](int rings, bool override_guard) {
    std::vector<std::vector<int>> out;
    for (auto& hv : enumerate_hop_combinations(rings, override_guard)) out.push_back(hv.delta);
    return out;
  }, "rings"_a, "override_guard"_a = false);
  m.def("ring_distances", [](double d, int rings, const std::string& spreading) {
    return build_network(d, rings, 1, 1, parse_spreading(spreading)).distances;
  }, "max_distance"_a, "rings"_a, "spreading"_a = "equidistant");
  m.def("payloads", [](const std::vector<int>& delta, int c, bool aggregation) {
    PacketConfig packet;
    packet.aggregation = aggregation;
    const auto t = ring_traffic(HopVector{delta}, c, packet);
    return py::make_tuple(t.payloads, t.packets);
  }, "delta"_a, "children_ratio"_a, "aggregation"_a = true);

  m.def("run_json", [](const std::string& scenario, bool exhaustive, int threads,
                       bool override_guards) {
    const auto s = scenario_from_text(scenario);
    py::gil_scoped_release release;
    return to_json(run(s, options(exhaustive, threads, override_guards))).dump();
  }, "scenario"_a, "exhaustive"_a = false, "threads"_a = 1, "override_guards"_a = false);

  m.def("run_csv", [](const std::string& scenario, int threads) {
    const auto s = scenario_from_text(scenario);
    py::gil_scoped_release release;
    return bundle_to_csv(run(s, options(false, threads, false)));
  }, "scenario"_a, "threads"_a = 1);

  m.def("sweep_json", [](const std::string& spec, int threads) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(spec);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.what());
    }
    const auto parsed = sweep_from_json(doc);
    py::gil_scoped_release release;
    return to_json(sweep(parsed, options(false, threads, false))).dump();
  }, "spec"_a, "threads"_a = 1);

  m.def("load_scenario_json", [](const std::string& path) {
    return to_json(load_scenario(path)).dump();
  }, "path"_a);
}
