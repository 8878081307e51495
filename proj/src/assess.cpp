#include "chaincap/assess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "chaincap/errors.hpp"

namespace chaincap {
namespace {

double headroom(double capacity, double demand) {
  return demand == 0.0 ? std::numeric_limits<double>::infinity() : capacity / demand;
}

// JSON has no infinity; unbounded headroom is written as null.
nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

double positive_axis(const std::optional<RatePerSecond>& axis, std::string_view name) {
  if (!axis) throw InputError(fmt::format("capacity profile has no {} value", name));
  if (!(axis->value() > 0.0)) {
    throw InputError(fmt::format("capacity {} must be > 0, got {}", name, axis->value()));
  }
  return axis->value();
}

}  // namespace

std::string_view to_string(Remediation r) {
  return r == Remediation::BatchTransactions ? "batch_transactions" : "scale_blockchain";
}

Verdict assess(const ScenarioWorkload& workload, const CapacityProfile& capacity) {
  const double max_read = positive_axis(capacity.max_lambda_read, "max_lambda_read");
  const double max_write = positive_axis(capacity.max_lambda_write, "max_lambda_write");

  Verdict v;
  v.scenario_id = workload.scenario_id;
  v.use_case = workload.use_case;
  v.lambda_read = workload.lambda_read;
  v.lambda_write = workload.lambda_write;
  v.capacity = capacity;
  v.read_ok = workload.lambda_read.value() <= max_read;
  v.write_ok = workload.lambda_write.value() <= max_write;
  v.headroom_read = headroom(max_read, workload.lambda_read.value());
  v.headroom_write = headroom(max_write, workload.lambda_write.value());
  if (!v.write_ok) v.remediation.push_back(Remediation::BatchTransactions);
  if (!v.suitable()) v.remediation.push_back(Remediation::ScaleBlockchain);
  return v;
}

nlohmann::json to_json(const CapacityProfile& p) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["source"] = p.source;
  j["node_count"] = p.node_count;
  auto axis = [](const std::optional<RatePerSecond>& a) {
    return a ? nlohmann::json(a->value()) : nlohmann::json(nullptr);
  };
  j["max_lambda_read"] = axis(p.max_lambda_read);
  j["max_lambda_write"] = axis(p.max_lambda_write);
  j["search_tolerance"] = p.search_tolerance;
  return j;
}

CapacityProfile capacity_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("capacity file: expected a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "schema_version" && key != "source" && key != "node_count" &&
        key != "max_lambda_read" && key != "max_lambda_write" && key != "search_tolerance" &&
        key != "note") {
      throw InputError(fmt::format("capacity file: unknown key '{}'", key));
    }
  }
  if (!doc.contains("schema_version") || doc["schema_version"] != 1) {
    throw InputError("capacity file: schema_version must be 1");
  }
  CapacityProfile p;
  try {
    p.node_count = doc.value("node_count", 4u);
    p.source = doc.value("source", std::string("user-supplied"));
    p.search_tolerance = doc.value("search_tolerance", 0.0);
    auto axis = [&](const char* key) -> std::optional<RatePerSecond> {
      if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
      return RatePerSecond(doc[key].get<double>());
    };
    p.max_lambda_read = axis("max_lambda_read");
    p.max_lambda_write = axis("max_lambda_write");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("capacity file: {}", e.what()));
  } catch (const DomainError& e) {
    throw InputError(fmt::format("capacity file: {}", e.what()));
  }
  return p;
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["scenario"] = std::string(to_string(v.scenario_id));
  j["use_case"] = v.use_case;
  j["lambda_read"] = v.lambda_read.value();
  j["lambda_write"] = v.lambda_write.value();
  j["capacity"] = to_json(v.capacity);
  j["read_ok"] = v.read_ok;
  j["write_ok"] = v.write_ok;
  j["suitable"] = v.suitable();
  j["headroom_read"] = finite_or_null(v.headroom_read);
  j["headroom_write"] = finite_or_null(v.headroom_write);
  auto rem = nlohmann::json::array();
  for (const auto r : v.remediation) rem.push_back(std::string(to_string(r)));
  j["remediation"] = rem;
  return j;
}

bool MethodologyReport::suitable() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.suitable(); });
}

MethodologyReport methodology_report(const ScenarioSpec& scenario, std::optional<double> eta,
                                     const CapacityProfile& capacity) {
  if (!eta && scenario.eta) eta = scenario.eta->value();
  if (!eta) {
    throw InputError(fmt::format(
        "eta required: scenario '{}' has no default concurrent-event rate; pass one explicitly",
        to_string(scenario.id)));
  }
  MethodologyReport r;
  r.scenario_id = scenario.id;
  r.title = scenario.title;
  r.why = scenario.notes;
  r.use_cases = scenario.use_cases;
  r.eta = RatePerSecond(*eta);
  r.capacity = capacity;
  for (const auto& u : scenario.use_cases) {
    r.workloads.push_back(workload_for(scenario.id, u, *eta));
    r.verdicts.push_back(assess(r.workloads.back(), capacity));
  }
  return r;
}

nlohmann::json MethodologyReport::to_json() const {
  using nlohmann::json;
  json stages = json::array();
  stages.push_back({{"stage", "why"}, {"rationale", why}});
  json what = json::array();
  json when = json::array();
  for (const auto& u : use_cases) {
    what.push_back({{"use_case", u.name},
                    {"recorded", u.recorded},
                    {"write_payload_bytes", u.write_payload_bytes}});
    when.push_back({{"use_case", u.name},
                    {"trigger", u.trigger},
                    {"reads_per_event", u.reads_per_event},
                    {"writes_per_event", u.writes_per_event}});
  }
  stages.push_back({{"stage", "what"}, {"use_cases", what}});
  stages.push_back({{"stage", "when"}, {"use_cases", when}});
  json rates = json::array();
  for (const auto& w : workloads) {
    rates.push_back({{"use_case", w.use_case},
                     {"lambda_read", w.lambda_read.value()},
                     {"lambda_write", w.lambda_write.value()}});
  }
  stages.push_back({{"stage", "arrival_model"},
                    {"process", "poisson"},
                    {"eta", eta.value()},
                    {"rates", rates}});
  stages.push_back({{"stage", "evaluation"}, {"capacity", chaincap::to_json(capacity)}});
  json cmp = json::array();
  for (const auto& v : verdicts) cmp.push_back(chaincap::to_json(v));
  stages.push_back({{"stage", "comparison"}, {"suitable", suitable()}, {"verdicts", cmp}});

  return json{{"schema_version", 1},
              {"scenario", std::string(chaincap::to_string(scenario_id))},
              {"title", title},
              {"stages", stages}};
}

std::string MethodologyReport::to_text() const {
  std::string out = fmt::format("Scenario: {} ({})\n", title, chaincap::to_string(scenario_id));
  out += fmt::format("1. Why on chain: {}\n", why);
  out += "2. What is recorded:\n";
  for (const auto& u : use_cases) out += fmt::format("   - {}: {}\n", u.name, u.recorded);
  out += "3. When transactions occur:\n";
  for (const auto& u : use_cases) {
    out += fmt::format("   - {}: {} [{} R, {} W per event]\n", u.name, u.trigger,
                       u.reads_per_event, u.writes_per_event);
  }
  out += fmt::format("4. Arrival model: Poisson, eta = {} events/s\n", eta.value());
  for (const auto& w : workloads) {
    out += fmt::format("   - {}: lambda_read = {}, lambda_write = {}\n", w.use_case,
                       w.lambda_read.value(), w.lambda_write.value());
  }
  auto axis = [](const std::optional<RatePerSecond>& a) {
    return a ? fmt::format("{}", a->value()) : std::string("n/a");
  };
  out += fmt::format("5. Capacity ({}, {} nodes): read {} tps, write {} tps\n", capacity.source,
                     capacity.node_count, axis(capacity.max_lambda_read),
                     axis(capacity.max_lambda_write));
  out += "6. Comparison:\n";
  for (const auto& v : verdicts) {
    const double max_read = v.capacity.max_lambda_read->value();
    const double max_write = v.capacity.max_lambda_write->value();
    out += fmt::format("   - {}: read {} {} {}, write {} {} {} -> {}\n", v.use_case,
                       v.lambda_read.value(), v.read_ok ? "<=" : ">", max_read,
                       v.lambda_write.value(), v.write_ok ? "<=" : ">", max_write,
                       v.suitable() ? "suitable" : "unsuitable");
  }
  out += fmt::format("Verdict: {}\n", suitable() ? "suitable" : "unsuitable");
  return out;
}

}  // namespace chaincap
