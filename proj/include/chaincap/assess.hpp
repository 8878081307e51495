#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chaincap/bench.hpp"
#include "chaincap/scenarios.hpp"

namespace chaincap {

enum class Remediation { BatchTransactions, ScaleBlockchain };

std::string_view to_string(Remediation r);

struct Verdict {
  ScenarioId scenario_id = ScenarioId::PublicKeyMgmt;
  std::string use_case;
  RatePerSecond lambda_read;
  RatePerSecond lambda_write;
  CapacityProfile capacity;
  bool read_ok = false;
  bool write_ok = false;
  double headroom_read = 0.0;   // capacity / demand, +inf for zero demand
  double headroom_write = 0.0;
  std::vector<Remediation> remediation;  // empty iff suitable

  bool suitable() const { return read_ok && write_ok; }
};

/// Compares demand with capacity; equality counts as suitable.
/// Throws InputError when an axis of the capacity is missing or not positive.
Verdict assess(const ScenarioWorkload& workload, const CapacityProfile& capacity);

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const CapacityProfile& p);
/// Accepts the capacity file schema (schema_version 1). Throws InputError.
CapacityProfile capacity_from_json(const nlohmann::json& doc);

struct MethodologyReport {
  ScenarioId scenario_id = ScenarioId::PublicKeyMgmt;
  std::string title;
  std::string why;
  std::vector<UseCaseSpec> use_cases;  // what is recorded and when
  RatePerSecond eta;
  std::vector<ScenarioWorkload> workloads;  // one per use case
  CapacityProfile capacity;
  std::vector<Verdict> verdicts;  // one per use case

  bool suitable() const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Walks the evaluation pipeline for one scenario: rationale, recorded data,
/// triggers, arrival rates, capacity and the per-use-case comparison.
/// `eta` overrides the catalog value; throws InputError("eta required ...")
/// when neither is set.
MethodologyReport methodology_report(const ScenarioSpec& scenario, std::optional<double> eta,
                                     const CapacityProfile& capacity);

}  // namespace chaincap
