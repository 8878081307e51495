#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaincap/arrival.hpp"

namespace chaincap {

enum class ScenarioId {
  PublicKeyMgmt,
  IdMgmt,
  AAA,
  ContextInfo,
  DataMgmtTrading,
  ResourceSharing,
  TradingSettlement,
};

inline constexpr std::array kAllScenarioIds{
    ScenarioId::PublicKeyMgmt,   ScenarioId::IdMgmt,          ScenarioId::AAA,
    ScenarioId::ContextInfo,     ScenarioId::DataMgmtTrading, ScenarioId::ResourceSharing,
    ScenarioId::TradingSettlement,
};

/// snake_case identifier used in files and on the command line.
std::string_view to_string(ScenarioId id);
std::optional<ScenarioId> parse_scenario_id(std::string_view text);
/// Closest identifier by edit distance, for "did you mean" hints.
std::string_view nearest_scenario_id(std::string_view text);

inline constexpr std::uint32_t kDefaultWritePayloadBytes = 256;

struct UseCaseSpec {
  std::string name;
  std::uint32_t reads_per_event = 0;
  std::uint32_t writes_per_event = 0;
  std::uint32_t write_payload_bytes = kDefaultWritePayloadBytes;
  std::string trigger;   // when transactions are generated, with (R)/(W) tags
  std::string recorded;  // what goes on chain

  friend bool operator==(const UseCaseSpec&, const UseCaseSpec&) = default;
};

struct ScenarioSpec {
  ScenarioId id = ScenarioId::PublicKeyMgmt;
  std::string title;
  // Unset for scenarios whose operator figures are unknown; assessment then
  // refuses to run until the user supplies one.
  std::optional<RatePerSecond> eta;
  std::string notes;  // why the scenario goes on chain
  std::vector<UseCaseSpec> use_cases;

  const UseCaseSpec* find_use_case(std::string_view name) const;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

using Catalog = std::vector<ScenarioSpec>;

struct ScenarioWorkload {
  ScenarioId scenario_id = ScenarioId::PublicKeyMgmt;
  std::string use_case;  // empty when aggregated over the whole scenario
  RatePerSecond eta;
  RatePerSecond lambda_read;
  RatePerSecond lambda_write;
};

/// The seven built-in scenarios, in ScenarioId order.
Catalog builtin_scenarios();

const ScenarioSpec& find_scenario(const Catalog& catalog, ScenarioId id);

/// Aggregate over every use case of the scenario. Throws DomainError for eta < 0.
ScenarioWorkload workload_for(const ScenarioSpec& spec, double eta);
ScenarioWorkload workload_for(ScenarioId id, const UseCaseSpec& use_case, double eta);

/// Built-ins with the document's overrides merged in by scenario id and
/// use-case name. Throws ParseError / ConflictError.
Catalog load_scenarios(std::string_view document);

/// Full catalog as an override document; load_scenarios() reproduces it.
std::string serialize_scenarios(const Catalog& catalog);

}  // namespace chaincap
