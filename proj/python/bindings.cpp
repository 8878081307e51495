#include <sstream>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chaincap/arrival.hpp"
#include "chaincap/assess.hpp"
#include "chaincap/bench.hpp"
#include "chaincap/chainsim.hpp"
#include "chaincap/cli.hpp"
#include "chaincap/errors.hpp"
#include "chaincap/report.hpp"
#include "chaincap/scenarios.hpp"

namespace py = pybind11;
using namespace chaincap;

namespace {

// Structured results cross the boundary as JSON text; the Python package
// decodes them into plain dicts and lists.
std::string dump(const nlohmann::json& j) { return j.dump(); }

nlohmann::json scenario_json(const ScenarioSpec& s) {
  auto ucs = nlohmann::json::array();
  for (const auto& u : s.use_cases) {
    ucs.push_back({{"name", u.name},
                   {"reads_per_event", u.reads_per_event},
                   {"writes_per_event", u.writes_per_event},
                   {"write_payload_bytes", u.write_payload_bytes},
                   {"trigger", u.trigger},
                   {"recorded", u.recorded}});
  }
  return {{"id", std::string(to_string(s.id))},
          {"title", s.title},
          {"eta", s.eta ? nlohmann::json(s.eta->value()) : nlohmann::json(nullptr)},
          {"why", s.notes},
          {"use_cases", ucs}};
}

Catalog catalog_from(const std::string& overrides) {
  return overrides.empty() ? builtin_scenarios() : load_scenarios(overrides);
}

ScenarioId scenario_id(const std::string& text) {
  const auto id = parse_scenario_id(text);
  if (!id) {
    throw InputError("unknown scenario '" + text + "' (did you mean '" +
                     std::string(nearest_scenario_id(text)) + "'?)");
  }
  return *id;
}

std::string timeline_json(const RunResult& r) {
  const auto& tl = r.timeline;
  return dump({{"window_s", tl.window_s},
               {"committed_write_tps", tl.committed_write_tps},
               {"served_read_tps", tl.served_read_tps},
               {"mean_write_latency_ms", tl.mean_write_latency_ms},
               {"mean_read_latency_ms", tl.mean_read_latency_ms},
               {"cpu_utilization", tl.cpu_utilization},
               {"pool_depth", tl.pool_depth},
               {"ledger_bytes", tl.ledger_bytes},
               {"mem_utilization", tl.mem_utilization},
               {"totals",
                {{"arrived_writes", r.totals.arrived_writes},
                 {"committed_writes", r.totals.committed_writes},
                 {"pending_writes", r.totals.pending_writes},
                 {"arrived_reads", r.totals.arrived_reads},
                 {"served_reads", r.totals.served_reads},
                 {"inflight_reads", r.totals.inflight_reads},
                 {"blocks", r.ledger.blocks_produced},
                 {"ledger_bytes", r.ledger.bytes()}}}});
}

SearchOptions search_options(double tolerance, double duration, std::uint64_t seed) {
  SearchOptions o;
  o.tolerance = tolerance;
  o.probe.duration_s = duration;
  o.probe.seed = seed;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Blockchain capacity simulator and scenario suitability assessment";
  m.attr("__version__") = std::string(kToolVersion);

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ConflictError>(m, "ConflictError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ContractViolation>(m, "ContractViolation", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<CalibrationError>(m, "CalibrationError", base.ptr());
  py::register_exception<CampaignError>(m, "CampaignError", base.ptr());

  // ---- arrival
  m.def("lambda_write", [](double eta, std::uint32_t beta) {
    return chaincap::lambda_write({RatePerSecond(eta), 0, beta}).value();
  }, py::arg("eta"), py::arg("beta"));
  m.def("lambda_read", [](double eta, std::uint32_t alpha) {
    return chaincap::lambda_read({RatePerSecond(eta), alpha, 0}).value();
  }, py::arg("eta"), py::arg("alpha"));
  m.def("interarrivals", [](double rate, std::size_t count, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<double> out(count);
    for (auto& x : out) x = sample_interarrival(rate, rng);
    return out;
  }, py::arg("rate"), py::arg("count"), py::arg("seed"),
     "Exponential interarrival times (s) from the counter-based stream for `seed`.");
  m.def("arrival_times", [](double rate, double horizon, std::uint64_t seed,
                            const std::string& arrival) {
    const auto ev = generate_events({parse_arrival_kind(arrival), RatePerSecond(rate), seed},
                                    TxKind::Write, horizon, 0, "py");
    std::vector<double> t;
    t.reserve(ev.size());
    for (const auto& e : ev) t.push_back(e.timestamp);
    return t;
  }, py::arg("rate"), py::arg("horizon"), py::arg("seed"), py::arg("arrival") = "poisson");

  // ---- scenarios
  m.def("_scenarios_json", [](const std::string& overrides) {
    auto arr = nlohmann::json::array();
    for (const auto& s : catalog_from(overrides)) arr.push_back(scenario_json(s));
    return dump(arr);
  }, py::arg("overrides") = "");
  m.def("_workload_json", [](const std::string& scenario, double eta, const std::string& use_case,
                             const std::string& overrides) {
    const auto catalog = catalog_from(overrides);
    const auto& spec = find_scenario(catalog, scenario_id(scenario));
    ScenarioWorkload w;
    if (use_case.empty()) {
      w = workload_for(spec, eta);
    } else {
      const auto* uc = spec.find_use_case(use_case);
      if (uc == nullptr) throw InputError("unknown use case '" + use_case + "'");
      w = workload_for(spec.id, *uc, eta);
    }
    return dump({{"scenario", std::string(to_string(w.scenario_id))},
                 {"use_case", w.use_case},
                 {"eta", w.eta.value()},
                 {"lambda_read", w.lambda_read.value()},
                 {"lambda_write", w.lambda_write.value()}});
  }, py::arg("scenario"), py::arg("eta"), py::arg("use_case") = "", py::arg("overrides") = "");

  // ---- cluster
  py::class_<ClusterConfig>(m, "ClusterConfig")
      .def(py::init<>())
      .def_readwrite("node_count", &ClusterConfig::node_count)
      .def_readwrite("rtt_ms", &ClusterConfig::rtt_ms)
      .def_readwrite("rtt_matrix_ms", &ClusterConfig::rtt_matrix_ms)
      .def_readwrite("block_interval_ms", &ClusterConfig::block_interval_ms)
      .def_readwrite("block_tx_capacity", &ClusterConfig::block_tx_capacity)
      .def_readwrite("write_exec_us", &ClusterConfig::write_exec_us)
      .def_readwrite("read_service_us", &ClusterConfig::read_service_us)
      .def_readwrite("msg_proc_us", &ClusterConfig::msg_proc_us)
      .def_readwrite("pool_scan_cost_us_per_tx", &ClusterConfig::pool_scan_cost_us_per_tx)
      .def_readwrite("node_cpu_capacity", &ClusterConfig::node_cpu_capacity)
      .def_readwrite("node_mem_bytes", &ClusterConfig::node_mem_bytes)
      .def_readwrite("empty_block_bytes", &ClusterConfig::empty_block_bytes)
      .def_property(
          "read_mode", [](const ClusterConfig& c) { return std::string(to_string(c.read_mode)); },
          [](ClusterConfig& c, const std::string& v) { c.read_mode = parse_read_mode(v); })
      .def_readwrite("block_production", &ClusterConfig::block_production)
      .def_readwrite("window_s", &ClusterConfig::window_s)
      .def("validate", &ClusterConfig::validate)
      .def("to_ini", [](const ClusterConfig& c) { return serialize_cluster_profile(c); })
      .def_static("from_ini", [](const std::string& text) { return parse_cluster_profile(text); })
      .def(py::self == py::self)
      .def("__repr__", [](const ClusterConfig& c) {
        return "ClusterConfig(node_count=" + std::to_string(c.node_count) + ", read_mode='" +
               std::string(to_string(c.read_mode)) + "')";
      });
  m.def("default_cluster", &default_cluster);

  // ---- simulation and search
  m.def("_simulate_json", [](const ClusterConfig& cluster, const std::string& kind, double rate,
                             double duration, std::uint64_t seed, const std::string& arrival,
                             std::uint32_t payload) {
    py::gil_scoped_release release;
    const auto tx = parse_tx_kind(kind);
    const auto events = generate_events({parse_arrival_kind(arrival), RatePerSecond(rate), seed},
                                        tx, duration, payload, "py");
    return timeline_json(run(cluster, events, duration, seed));
  });
  m.def("_trial_json", [](const ClusterConfig& cluster, const std::string& kind, double rate,
                          double duration, std::uint64_t seed, const std::string& arrival) {
    py::gil_scoped_release release;
    ProbeSettings p;
    p.duration_s = duration;
    p.seed = seed;
    const auto s = run_trial(cluster, parse_tx_kind(kind), parse_arrival_kind(arrival), rate, p);
    return dump({{"lambda_offered", s.lambda_offered},
                 {"mean_tps", s.mean_tps},
                 {"mean_latency_ms", s.mean_latency_ms},
                 {"mean_cpu", s.mean_cpu},
                 {"mean_pool_depth", s.mean_pool_depth},
                 {"steady", s.steady}});
  });
  m.def("find_max_lambda", [](const ClusterConfig& cluster, const std::string& kind,
                              const std::string& arrival, double tolerance, double duration,
                              std::uint64_t seed) {
    py::gil_scoped_release release;
    return chaincap::find_max_lambda(cluster, parse_tx_kind(kind), parse_arrival_kind(arrival),
                                     search_options(tolerance, duration, seed))
        .value();
  }, py::arg("cluster"), py::arg("kind"), py::arg("arrival") = "poisson",
     py::arg("tolerance") = 0.01, py::arg("duration") = 60.0, py::arg("seed") = 1);
  m.def("_capacity_json", [](const ClusterConfig& cluster, const std::string& arrival,
                             double tolerance, double duration, std::uint64_t seed) {
    py::gil_scoped_release release;
    return dump(to_json(find_capacity(cluster, parse_arrival_kind(arrival),
                                      search_options(tolerance, duration, seed))));
  });

  // ---- assessment
  m.def("_assess_json", [](const std::string& scenario, const std::string& capacity_json,
                           std::optional<double> eta, const std::string& overrides) {
    const auto capacity = capacity_from_json(nlohmann::json::parse(capacity_json));
    const auto catalog = catalog_from(overrides);
    return dump(methodology_report(find_scenario(catalog, scenario_id(scenario)), eta, capacity)
                    .to_json());
  }, py::arg("scenario"), py::arg("capacity_json"), py::arg("eta") = py::none(),
     py::arg("overrides") = "");

  // ---- command line
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = 0;
    {
      py::gil_scoped_release release;
      code = cli::run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command-line front end in-process; returns (exit_code, stdout, stderr).");
}
