// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.
//
//   ringhop_acceptance            run everything
//   ringhop_acceptance 3 7        run only criteria 3 and 7

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "ringhop/scenario.hpp"

using namespace ringhop;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string list(const std::vector<std::int64_t>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out + ")";
}

// Collects sub-check outcomes for one criterion.
struct Verdict {
  bool ok = true;
  std::vector<std::string> notes;

  void check(bool condition, const std::string& note) {
    ok = ok && condition;
    notes.push_back((condition ? "" : "MISS ") + note);
  }
  void info(const std::string& note) { notes.push_back("info " + note); }
};

Scenario shipped(const char* file) {
  return load_scenario(std::string(RINGHOP_SCENARIO_DIR) + "/" + file);
}

Deployment with_aggregation(Scenario s, bool aggregation) {
  s.packet.aggregation = aggregation;
  return s.deployment();
}

double reduction(double from, double to) { return 100.0 * (from - to) / from; }

// 1. |Delta| = R! and the three-ring listing.
Verdict hop_set() {
  Verdict v;
  const auto start = Clock::now();
  std::uint64_t factorial = 1;
  bool counts = true;
  for (int R = 1; R <= 8; ++R) {
    factorial *= static_cast<std::uint64_t>(R);
    const auto all = enumerate_hop_combinations(R);
    std::set<HopVector> unique(all.begin(), all.end());
    counts = counts && all.size() == factorial && unique.size() == factorial &&
             hop_combination_count(R) == factorial;
  }
  v.check(counts, "|Delta(R)| = R! for R = 1..8");
  const std::vector<HopVector> table{{{1, 1, 1}}, {{1, 1, 2}}, {{1, 1, 3}},
                                     {{1, 2, 1}}, {{1, 2, 2}}, {{1, 2, 3}}};
  v.check(enumerate_hop_combinations(3) == table, "Delta(3) lists the six expected vectors");
  const double t = seconds_since(start);
  v.check(t < 1.0, "runtime " + fmt(t, 3) + " s < 1 s");
  return v;
}

// 2. SX1272 coverage range.
Verdict coverage() {
  Verdict v;
  const double d = max_range(find_transceiver("SX1272"), RadioEnvironment{});
  v.check(std::abs(d - 4410.0) <= 44.1, "max_range(SX1272) = " + fmt(d, 6) + " m, target 4410 +/- 1%");
  return v;
}

// 3. Golden configuration table for the 7-ring CC1200 network.
Verdict golden_table() {
  Verdict v;
  const auto dep = shipped("scenario_1_1.json").deployment();
  const auto start = Clock::now();
  const auto sh = baseline(RoutingModel::SingleHop, dep);
  const auto oh = optimize(dep);
  const double t = seconds_since(start);

  const std::vector<TxConfig> sh_cfg{{5, 1}, {4, 3}, {1, 4}, {1, 6}, {4, 7}, {2, 7}, {1, 7}};
  v.check(sh.config.entries == sh_cfg, "single-hop (p, s) = " + sh.config.to_string());
  const HopVector delta{{1, 1, 1, 4, 1, 3, 1}};
  v.check(oh.delta == delta, "optimal-hop delta = " + oh.delta.to_string());
  v.check(oh.payloads == std::vector<std::int64_t>{985, 328, 109, 4, 1, 4, 1},
          "n_p = " + list(oh.payloads));
  v.check(oh.packets == std::vector<std::int64_t>{247, 82, 28, 1, 1, 1, 1},
          "n_DP = " + list(oh.packets));
  const std::vector<TxConfig> oh_cfg{{5, 1}, {5, 1}, {5, 1}, {1, 6}, {5, 1}, {1, 4}, {5, 1}};
  v.check(oh.config.entries == oh_cfg, "optimal-hop (p, s) = " + oh.config.to_string());
  v.check(t < 60.0, "search over " + std::to_string(oh.stats.combos_evaluated) + " combos in " +
                        fmt(t, 3) + " s < 60 s");
  return v;
}

// 4. Routing without aggregation.
Verdict no_aggregation_routing() {
  Verdict v;
  const auto s11 = shipped("scenario_1_1.json");
  const auto s12 = shipped("scenario_1_2.json");
  const auto oh11 = optimize(with_aggregation(s11, false));
  v.check(oh11.delta == HopVector{{1, 1, 1, 1, 1, 1, 7}},
          "c=3 without aggregation: delta = " + oh11.delta.to_string());
  const auto ones = HopVector::next_ring_hop(7);
  const auto agg12 = optimize(with_aggregation(s12, true));
  const auto raw12 = optimize(with_aggregation(s12, false));
  v.check(agg12.delta == ones, "c=2 with aggregation: delta = " + agg12.delta.to_string());
  v.check(raw12.delta == ones, "c=2 without aggregation: delta = " + raw12.delta.to_string());
  return v;
}

// 5. Bottleneck reduction figures.
Verdict reductions() {
  Verdict v;
  const auto s11 = shipped("scenario_1_1.json");
  const auto s12 = shipped("scenario_1_2.json");

  const auto agg12 = optimize(with_aggregation(s12, true));
  const auto raw12 = optimize(with_aggregation(s12, false));
  const double c2 = reduction(raw12.report.bottleneck_j, agg12.report.bottleneck_j);
  v.check(std::abs(c2 - 74.7) <= 2.0, "c=2 aggregation gain " + fmt(c2) + "%, target 74.7%");

  const auto agg11 = optimize(with_aggregation(s11, true));
  const auto raw11 = optimize(with_aggregation(s11, false));
  const double c3 = reduction(raw11.report.bottleneck_j, agg11.report.bottleneck_j);
  v.check(std::abs(c3 - 32.2) <= 2.0, "c=3 aggregation gain " + fmt(c3) + "%, target 32.2%");
  // Same-ring comparison: ring 1 (the aggregated bottleneck) in both solutions.
  const double ring1 =
      reduction(raw11.report.rings[0].total_j(), agg11.report.rings[0].total_j());
  v.info("c=3 ring-1 energy " + fmt(raw11.report.rings[0].total_j() * 1e3) + " -> " +
         fmt(agg11.report.rings[0].total_j() * 1e3) + " mJ, " + fmt(ring1) +
         "% (bottleneck moved from ring " + std::to_string(raw11.report.bottleneck_ring) +
         " to ring " + std::to_string(agg11.report.bottleneck_ring) + ")");

  const auto sh12 = baseline(RoutingModel::SingleHop, with_aggregation(s12, false));
  const double vs_sh = reduction(sh12.report.bottleneck_j, raw12.report.bottleneck_j);
  v.check(std::abs(vs_sh - 83.1) <= 2.0,
          "c=2 optimal-hop without aggregation vs single-hop " + fmt(vs_sh) + "%, target 83.1%");
  return v;
}

// 6. Where the bottleneck sits.
Verdict bottleneck_rings() {
  Verdict v;
  const auto bundle = run(shipped("scenario_1_1.json"));
  const int sh = bundle.find(RoutingModel::SingleHop)->report.bottleneck_ring;
  const int nrh = bundle.find(RoutingModel::NextRingHop)->report.bottleneck_ring;
  const int oh = bundle.find(RoutingModel::OptimalHop)->report.bottleneck_ring;
  v.check(sh == 7, "single-hop ring " + std::to_string(sh));
  v.check(nrh == 1, "next-ring-hop ring " + std::to_string(nrh));
  v.check(oh == 1, "optimal-hop ring " + std::to_string(oh));
  return v;
}

// 7. Spreading study.
Verdict spreading_study() {
  Verdict v;
  std::vector<ResultBundle> bundles;
  for (const char* f : {"scenario_2_1.json", "scenario_2_2.json", "scenario_2_3.json"}) {
    bundles.push_back(run(shipped(f)));
  }
  const auto sh = [&](int i) { return bundles[i].find(RoutingModel::SingleHop)->report.bottleneck_j; };
  const auto oh = [&](int i) { return bundles[i].find(RoutingModel::OptimalHop)->report.bottleneck_j; };
  double spread = 0.0;
  for (int i = 1; i < 3; ++i) spread = std::max(spread, std::abs(sh(i) - sh(0)) / sh(0));
  v.check(spread < 1e-12, "single-hop e_bt relative spread " + fmt(spread, 3));
  v.check(oh(1) < oh(0) && oh(1) < oh(2),
          "optimal-hop e_bt mJ: equidistant " + fmt(oh(0) * 1e3) + ", Fibonacci " +
              fmt(oh(1) * 1e3) + ", reverse Fibonacci " + fmt(oh(2) * 1e3));
  return v;
}

// 8. Shape of the ring-count sweep.
Verdict ring_sweep() {
  Verdict v;
  auto spec = load_sweep(std::string(RINGHOP_SCENARIO_DIR) + "/sweep_3_rings.json");
  spec.transceivers = {"SX1272"};
  const auto start = Clock::now();
  const auto rows = sweep(spec);
  const double t = seconds_since(start);
  bool clean = rows.size() == 10;
  for (const auto& row : rows) clean = clean && row.error.empty();
  v.check(clean, "ten error-free rows");
  if (!clean) return v;

  std::size_t peak = 0;
  std::string curve;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].ratios.rho_sh > rows[peak].ratios.rho_sh) peak = i;
    curve += (i ? " " : "") + fmt(rows[i].ratios.rho_sh, 3);
  }
  v.check(rows[peak].value == 4, "rho_SH peaks at R=" + std::to_string(rows[peak].value) +
                                     " [" + curve + "]");
  const double end_sh = rows[9].ratios.rho_sh;
  v.check(std::abs(end_sh - 1.0) <= 0.05, "rho_SH(R=10) = " + fmt(end_sh));
  v.check(rows[9].ratios.rho_nrh > rows[1].ratios.rho_nrh,
          "rho_NRH(R=10) = " + fmt(rows[9].ratios.rho_nrh) + " > rho_NRH(R=2) = " +
              fmt(rows[1].ratios.rho_nrh));
  v.check(t < 600.0, "sweep " + fmt(t, 3) + " s < 600 s");
  return v;
}

// 9. Optimal-hop never loses to either baseline.
Verdict envelope() {
  Verdict v;
  std::mt19937 rng(9);
  const auto& radios = builtin_transceivers();
  int violations = 0;
  int runs = 0;
  for (int i = 0; i < 200; ++i) {
    Scenario s;
    s.id = "random-" + std::to_string(i);
    s.rings = std::uniform_int_distribution<int>(1, 6)(rng);
    s.children_ratio = std::uniform_int_distribution<int>(1, 4)(rng);
    s.transceiver = radios[static_cast<std::size_t>(i) % radios.size()];
    s.packet.aggregation = (i / 4) % 2 == 0;
    s.spreading = static_cast<Spreading>(std::uniform_int_distribution<int>(0, 2)(rng));
    const auto bundle = run(s);
    const double oh = bundle.find(RoutingModel::OptimalHop)->report.bottleneck_j;
    const double sh = bundle.find(RoutingModel::SingleHop)->report.bottleneck_j;
    const double nrh = bundle.find(RoutingModel::NextRingHop)->report.bottleneck_j;
    if (oh > std::min(sh, nrh)) ++violations;
    ++runs;
  }
  v.check(violations == 0, std::to_string(violations) + " violations in " +
                               std::to_string(runs) + " scenarios");
  return v;
}

// 10. Pruned search equals the search over every feasible (power, rate) pair.
Verdict oracle_equivalence() {
  Verdict v;
  SearchOptions full;
  full.exhaustive = true;
  full.override_guards = true;
  int cases = 0;
  int mismatches = 0;
  std::string first_miss;
  const auto start = Clock::now();
  for (const auto& tx : builtin_transceivers()) {
    for (int R = 1; R <= 4; ++R) {
      for (int c = 1; c <= 4; ++c) {
        for (bool aggregation : {true, false}) {
          for (auto spreading : {Spreading::Equidistant, Spreading::Fibonacci,
                                 Spreading::ReverseFibonacci}) {
            Scenario s;
            s.rings = R;
            s.children_ratio = c;
            s.transceiver = tx;
            s.spreading = spreading;
            s.packet.aggregation = aggregation;
            const auto dep = s.deployment();
            const auto pruned = optimize(dep);
            const auto exhaustive = optimize(dep, full);
            const double rel = std::abs(pruned.report.bottleneck_j - exhaustive.report.bottleneck_j) /
                               exhaustive.report.bottleneck_j;
            ++cases;
            if (pruned.delta != exhaustive.delta || rel >= 1e-9) {
              if (mismatches++ == 0) {
                first_miss = tx.name + " R=" + std::to_string(R) + " c=" + std::to_string(c);
              }
            }
          }
        }
      }
    }
  }
  v.check(mismatches == 0, std::to_string(mismatches) + " mismatches in " +
                               std::to_string(cases) + " scenarios (R <= 4, all radios, " +
                               "spreadings, aggregation settings) in " +
                               fmt(seconds_since(start), 3) + " s" +
                               (first_miss.empty() ? "" : ", first " + first_miss));
  return v;
}

// 11. Every payload reaches the gateway exactly once.
Verdict conservation() {
  Verdict v;
  int checked = 0;
  int violations = 0;
  for (int R = 1; R <= 5; ++R) {
    for (int c = 1; c <= 5; ++c) {
      const auto net = build_network(1000.0, R, c, 1, Spreading::Equidistant);
      for (const auto& delta : enumerate_hop_combinations(R)) {
        const auto traffic = ring_traffic(delta, c, PacketConfig{});
        std::int64_t at_gateway = 0;
        for (const auto& child : traffic.children[0]) {
          at_gateway += child.per_parent * traffic.payloads[static_cast<std::size_t>(child.ring - 1)];
        }
        const auto sim = oracle::simulate_branch(delta, c);
        if (at_gateway != net.branch_load || sim.gateway_payloads != net.branch_load) ++violations;
        ++checked;
      }
    }
  }
  v.check(violations == 0, std::to_string(violations) + " violations over " +
                               std::to_string(checked) + " (delta, c) pairs, R <= 5");
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 12. Same CSV regardless of worker count.
Verdict determinism() {
  Verdict v;
  const std::string scenario = std::string(RINGHOP_SCENARIO_DIR) + "/scenario_1_1.json";
#ifdef RINGHOP_CLI_PATH
  const std::string cli = RINGHOP_CLI_PATH;
  std::string outputs[2];
  const int threads[2] = {1, 8};
  bool ran = true;
  for (int i = 0; i < 2; ++i) {
    const std::string out = "acceptance_threads_" + std::to_string(threads[i]) + ".csv";
    const std::string cmd = "\"" + cli + "\" optimize \"" + scenario + "\" --threads " +
                            std::to_string(threads[i]) + " --out " + out;
    ran = ran && std::system(cmd.c_str()) == 0;
    outputs[i] = slurp(out);
    std::remove(out.c_str());
  }
  v.check(ran && !outputs[0].empty(), "CLI runs succeeded");
  v.check(outputs[0] == outputs[1], "CLI CSV with 1 and 8 threads identical (" +
                                        std::to_string(outputs[0].size()) + " bytes)");
#endif
  SearchOptions one;
  SearchOptions eight;
  eight.threads = 8;
  const auto s = load_scenario(scenario);
  const auto a = run(s, one);
  const auto b = run(s, eight);
  v.check(bundle_to_csv(a) == bundle_to_csv(b) && to_json(a).dump() == to_json(b).dump(),
          "library CSV and JSON with 1 and 8 threads identical");
  return v;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "hop-set cardinality", hop_set},
      {2, "coverage range", coverage},
      {3, "golden configuration table", golden_table},
      {4, "routing without aggregation", no_aggregation_routing},
      {5, "bottleneck reduction figures", reductions},
      {6, "bottleneck locations", bottleneck_rings},
      {7, "spreading study", spreading_study},
      {8, "ring-count sweep shape", ring_sweep},
      {9, "optimality envelope", envelope},
      {10, "pruned vs exhaustive search", oracle_equivalence},
      {11, "payload conservation", conservation},
      {12, "determinism across threads", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Verdict verdict;
    const auto start = Clock::now();
    try {
      verdict = c.run();
    } catch (const std::exception& e) {
      verdict.ok = false;
      verdict.notes.push_back(std::string("exception: ") + e.what());
    }
    failed += verdict.ok ? 0 : 1;
    std::cout << (verdict.ok ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << "  ("
              << fmt(seconds_since(start), 3) << " s)\n";
    for (const auto& note : verdict.notes) std::cout << "        " << note << '\n';
    std::cout.flush();
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed\n" : "all criteria passed\n");
  return failed ? 1 : 0;
}
