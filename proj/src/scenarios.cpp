#include "chaincap/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "chaincap/errors.hpp"
#include "chaincap/kvconfig.hpp"

namespace chaincap {
namespace {

constexpr std::array<std::string_view, 7> kIdNames{
    "public_key_mgmt", "id_mgmt",           "aaa",
    "context_info",    "data_mgmt_trading", "resource_sharing",
    "trading_settlement",
};

UseCaseSpec use_case(std::string name, std::uint32_t reads, std::uint32_t writes,
                     std::string recorded, std::string trigger) {
  return UseCaseSpec{std::move(name), reads, writes, kDefaultWritePayloadBytes,
                     std::move(trigger), std::move(recorded)};
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0u : 1u)});
      diag = up;
    }
  }
  return row[b.size()];
}

constexpr std::string_view kScenarioPrefix = "scenario.";
constexpr std::string_view kUseCaseInfix = ".use_case.";

std::uint32_t as_u32(const kv::Entry& e) {
  const auto v = kv::as_int(e);
  if (v < 0) throw ParseError(e.line, e.key, fmt::format("must be >= 0, got {}", v));
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw ParseError(e.line, e.key, "value too large");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::string_view to_string(ScenarioId id) { return kIdNames[static_cast<std::size_t>(id)]; }

std::optional<ScenarioId> parse_scenario_id(std::string_view text) {
  for (std::size_t i = 0; i < kIdNames.size(); ++i) {
    if (kIdNames[i] == text) return static_cast<ScenarioId>(i);
  }
  return std::nullopt;
}

std::string_view nearest_scenario_id(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::string_view best = kIdNames.front();
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (const auto name : kIdNames) {
    const auto d = edit_distance(lowered, name);
    if (d < best_d) {
      best_d = d;
      best = name;
    }
  }
  return best;
}

const UseCaseSpec* ScenarioSpec::find_use_case(std::string_view name) const {
  const auto it = std::find_if(use_cases.begin(), use_cases.end(),
                               [&](const UseCaseSpec& u) { return u.name == name; });
  return it == use_cases.end() ? nullptr : &*it;
}

Catalog builtin_scenarios() {
  Catalog c;

  // Reads of public keys happen inside AAA, so only the write side is counted here.
  c.push_back(ScenarioSpec{
      ScenarioId::PublicKeyMgmt,
      "Public key management",
      RatePerSecond(0.0115),
      "Replaces a centralized PKI; the ledger makes public keys tamper-evident and lets "
      "third parties fetch them to authenticate users. Default eta 0.0115 is the operator "
      "figure used in the published rate computation (an alternate figure of 0.0015 appears "
      "alongside it).",
      {
          use_case("subscriber_key", 0, 1,
                   "{Hash(ID) : Public key}, signed by the operator",
                   "End user subscribes to the network provider (W); user or operator "
                   "lookups are counted under aaa"),
          use_case("network_equipment_key", 0, 1,
                   "{Hash(NEID) : Public key}, signed by the operator",
                   "Network equipment is onboarded (W); operator lookups are counted under aaa"),
      }});

  c.push_back(ScenarioSpec{
      ScenarioId::IdMgmt,
      "ID management",
      std::nullopt,
      "Authority-endorsed pseudonyms and decentralized identifiers become publicly "
      "verifiable, and user behaviour stays auditable.",
      {
          use_case("pseudonym", 1, 1, "{pseudo-name : public key}, signed by the issuing authority",
                   "Pseudonym created by the central authority (W); pseudonym queried (R)"),
          use_case("did", 1, 1, "Identifiers and their schemas",
                   "DID created by the central authority (W); identifier verified (R)"),
      }});

  // One complete access-control event is three authentications (1 read each)
  // plus one authorization (2 reads + 1 write).
  c.push_back(ScenarioSpec{
      ScenarioId::AAA,
      "Authentication, authorization and access control",
      RatePerSecond(8333),
      "Traceable, auditable records of access to subscriber data, as data-protection "
      "regulation requires.",
      {
          use_case("authentication", 1, 0, "Data activity of inquiring the subscriber's data",
                   "Service request initiated; one signature check against the chain (R)"),
          use_case("authorization", 2, 1, "Data activity of inquiring the subscription profile",
                   "Specific service request; verify the grantee twice (R) and update the grant (W)"),
          use_case("access_control", 5, 1,
                   "Data activity of inquiring user data outside the subscription profile",
                   "Third party or network function accesses user data; 3 x authentication "
                   "+ 1 x authorization (5 R, 1 W)"),
      }});

  c.push_back(ScenarioSpec{
      ScenarioId::ContextInfo,
      "Context information management",
      std::nullopt,
      "Traceable, auditable records of access to subscriber context and location data.",
      {
          use_case("personal_context", 1, 1,
                   "Inquiry of the subscription profile and update/delete of the context",
                   "Network function accesses subscription data or updates/deletes context (R & W)"),
          use_case("location_info", 1, 1, "Location information access log",
                   "Third party or network function accesses the user's location (R & W)"),
      }});

  c.push_back(ScenarioSpec{
      ScenarioId::DataMgmtTrading,
      "Data management and data trading",
      std::nullopt,
      "Erasable subscription data, tamper-proof model updates, auditable IoT and sensing "
      "data, and contract-driven trading between data owners and requesters.",
      {
          use_case("subscription_data", 3, 4,
                   "Hash/address of the off-chain profile; remove and update actions",
                   "Subscribe (R & W); change subscription (R & W); de-register (R & W); "
                   "update subscription (W)"),
          use_case("ai_model_data", 1, 2, "Hash of model data, or encrypted model data",
                   "Training completed (W); gradient update completed (W); retrieve model or "
                   "gradient (R)"),
          use_case("iot_data", 1, 1, "Hash of raw data",
                   "Periodic store of streaming data (W); audit and trading/sharing (R)"),
          use_case("sensing_data", 0, 1, "Hash of the sensing data",
                   "Periodic store of streaming data (W)"),
          use_case("data_trading", 2, 1, "Data package exchanged between owner and requester",
                   "Data shared or exchanged when a trade occurs (R & W); audit (R)"),
      }});

  c.push_back(ScenarioSpec{
      ScenarioId::ResourceSharing,
      "Resource sharing",
      std::nullopt,
      "Automatic auctions and settlement through smart contracts; near-real-time, "
      "tamper-proof usage records for shared networks.",
      {
          use_case("spectrum", 1, 3, "Spectrum resource status with geographic information",
                   "Available spectrum published (W); trade deal (W); revoke (W); audit (R)"),
          use_case("computing_resource", 1, 3,
                   "Computing resource status with geographic information, per device/NF/MEC/DC",
                   "Available computing resource published (W); trade deal (W); revoke (W); "
                   "audit (R)"),
          use_case("network_sharing", 1, 2,
                   "Hash of user network usage and NE resource provision status",
                   "Settlement occurs (W); batch log information (W); audit (R)"),
      }});

  c.push_back(ScenarioSpec{
      ScenarioId::TradingSettlement,
      "Trading and settlement",
      std::nullopt,
      "Auditable usage and automatic settlement through smart contracts.",
      {
          use_case("interconnection_settlement", 1, 2,
                   "Interconnection traffic volume per hour; settlement per month",
                   "Periodic (W); per-hour/day/month (W); audit (R)"),
          use_case("roaming_settlement", 1, 2, "CDRs recorded in batches; per-user settlement",
                   "Periodic settlement (W); per-hour/day/month (W); audit (R)"),
          use_case("billing", 2, 1, "CDRs recorded in batches",
                   "Per-hour/day/month (W); periodic settlement (R); audit (R)"),
      }});

  return c;
}

const ScenarioSpec& find_scenario(const Catalog& catalog, ScenarioId id) {
  const auto it = std::find_if(catalog.begin(), catalog.end(),
                               [&](const ScenarioSpec& s) { return s.id == id; });
  if (it == catalog.end()) {
    throw InputError(fmt::format("scenario '{}' not in catalog", to_string(id)));
  }
  return *it;
}

ScenarioWorkload workload_for(const ScenarioSpec& spec, double eta) {
  if (!(eta >= 0.0)) throw DomainError(fmt::format("eta must be >= 0, got {}", eta));
  std::uint32_t reads = 0;
  std::uint32_t writes = 0;
  for (const auto& u : spec.use_cases) {
    reads += u.reads_per_event;
    writes += u.writes_per_event;
  }
  const WorkloadMultiplicity m{RatePerSecond(eta), reads, writes};
  return ScenarioWorkload{spec.id, {}, m.eta, lambda_read(m), lambda_write(m)};
}

ScenarioWorkload workload_for(ScenarioId id, const UseCaseSpec& use_case, double eta) {
  if (!(eta >= 0.0)) throw DomainError(fmt::format("eta must be >= 0, got {}", eta));
  const WorkloadMultiplicity m{RatePerSecond(eta), use_case.reads_per_event,
                               use_case.writes_per_event};
  return ScenarioWorkload{id, use_case.name, m.eta, lambda_read(m), lambda_write(m)};
}

Catalog load_scenarios(std::string_view document) {
  const auto doc = kv::parse(document);
  kv::require_schema_version(doc, 1);
  kv::check_keys(doc.root, {"schema_version"}, "document root");

  Catalog catalog = builtin_scenarios();
  std::set<std::string> seen_sections;
  std::map<std::string, int> new_use_case_lines;

  for (const auto& section : doc.sections) {
    if (!section.name.starts_with(kScenarioPrefix)) {
      throw ParseError(section.line, section.name, "section must start with 'scenario.'");
    }
    if (!seen_sections.insert(section.name).second) {
      throw ConflictError(fmt::format("line {}: section [{}] appears more than once",
                                      section.line, section.name));
    }
    const auto rest = std::string_view(section.name).substr(kScenarioPrefix.size());
    const auto infix = rest.find(kUseCaseInfix);
    const auto id_text = rest.substr(0, infix);
    const auto id = parse_scenario_id(id_text);
    if (!id) {
      throw ParseError(section.line, std::string(id_text),
                       fmt::format("unknown scenario id (did you mean '{}'?)",
                                   nearest_scenario_id(id_text)));
    }
    auto& spec = *std::find_if(catalog.begin(), catalog.end(),
                               [&](const ScenarioSpec& s) { return s.id == *id; });

    if (infix == std::string_view::npos) {
      kv::check_keys(section.entries, {"eta", "title", "notes"}, "[" + section.name + "]");
      for (const auto& e : section.entries) {
        if (e.key == "eta") {
          const double v = kv::as_double(e);
          if (v < 0.0) throw ParseError(e.line, e.key, fmt::format("must be >= 0, got {}", v));
          spec.eta = RatePerSecond(v);
        } else if (e.key == "title") {
          spec.title = e.value;
        } else {
          spec.notes = e.value;
        }
      }
      continue;
    }

    const std::string name(rest.substr(infix + kUseCaseInfix.size()));
    if (name.empty() || name.find('.') != std::string::npos) {
      throw ParseError(section.line, section.name, "invalid use case name");
    }
    kv::check_keys(section.entries,
                   {"reads_per_event", "writes_per_event", "write_payload_bytes", "trigger",
                    "recorded"},
                   "[" + section.name + "]");

    auto it = std::find_if(spec.use_cases.begin(), spec.use_cases.end(),
                           [&](const UseCaseSpec& u) { return u.name == name; });
    if (it == spec.use_cases.end()) {
      spec.use_cases.push_back(UseCaseSpec{name, 0, 0, kDefaultWritePayloadBytes, {}, {}});
      it = std::prev(spec.use_cases.end());
    }
    for (const auto& e : section.entries) {
      if (e.key == "reads_per_event") {
        it->reads_per_event = as_u32(e);
      } else if (e.key == "writes_per_event") {
        it->writes_per_event = as_u32(e);
      } else if (e.key == "write_payload_bytes") {
        it->write_payload_bytes = as_u32(e);
      } else if (e.key == "trigger") {
        it->trigger = e.value;
      } else {
        it->recorded = e.value;
      }
    }
    if (it->reads_per_event + it->writes_per_event == 0) {
      throw ParseError(section.line, "reads_per_event",
                       fmt::format("use case '{}' needs reads_per_event + writes_per_event >= 1",
                                   name));
    }
  }
  return catalog;
}

std::string serialize_scenarios(const Catalog& catalog) {
  std::string out = "schema_version = 1\n";
  for (const auto& s : catalog) {
    out += fmt::format("\n[scenario.{}]\n", to_string(s.id));
    out += fmt::format("title = {}\n", kv::quote(s.title));
    if (s.eta) out += fmt::format("eta = {}\n", s.eta->value());
    out += fmt::format("notes = {}\n", kv::quote(s.notes));
    for (const auto& u : s.use_cases) {
      out += fmt::format("\n[scenario.{}.use_case.{}]\n", to_string(s.id), u.name);
      out += fmt::format("reads_per_event = {}\n", u.reads_per_event);
      out += fmt::format("writes_per_event = {}\n", u.writes_per_event);
      out += fmt::format("write_payload_bytes = {}\n", u.write_payload_bytes);
      out += fmt::format("trigger = {}\n", kv::quote(u.trigger));
      out += fmt::format("recorded = {}\n", kv::quote(u.recorded));
    }
  }
  return out;
}

}  // namespace chaincap
