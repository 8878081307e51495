#include <doctest.h>

#include <cmath>

#include "chaincap/assess.hpp"
#include "chaincap/errors.hpp"
#include "chaincap/report.hpp"

using namespace chaincap;

namespace {

CapacityProfile published() {
  const auto text =
      read_file(std::filesystem::path(CHAINCAP_SOURCE_DIR) / "profiles" / "paper.json");
  return capacity_from_json(nlohmann::json::parse(text));
}

CapacityProfile cap(double read, double write) {
  CapacityProfile p;
  p.max_lambda_read = RatePerSecond(read);
  p.max_lambda_write = RatePerSecond(write);
  return p;
}

ScenarioWorkload demand(double read, double write) {
  ScenarioWorkload w;
  w.lambda_read = RatePerSecond(read);
  w.lambda_write = RatePerSecond(write);
  return w;
}

}  // namespace

TEST_CASE("checked-in capacity file carries the published endpoints") {
  const auto p = published();
  CHECK(p.node_count == 4);
  CHECK(p.max_lambda_read->value() == 20500.0);
  CHECK(p.max_lambda_write->value() == 1400.0);
  CHECK(p.source == "published-measurement");
}

TEST_CASE("public key management fits with vast headroom") {
  const auto cat = builtin_scenarios();
  const auto report = methodology_report(find_scenario(cat, ScenarioId::PublicKeyMgmt),
                                         std::nullopt, published());
  CHECK(report.suitable());
  for (const auto& v : report.verdicts) {
    CHECK(v.suitable());
    CHECK(v.remediation.empty());
    CHECK(std::isinf(v.headroom_read));
    CHECK(v.headroom_write == doctest::Approx(1400 / 0.0115));
  }
}

TEST_CASE("AAA access control fails on both axes") {
  const auto cat = builtin_scenarios();
  const auto report =
      methodology_report(find_scenario(cat, ScenarioId::AAA), std::nullopt, published());
  CHECK_FALSE(report.suitable());
  const auto it = std::find_if(report.verdicts.begin(), report.verdicts.end(),
                               [](const Verdict& v) { return v.use_case == "access_control"; });
  REQUIRE(it != report.verdicts.end());
  CHECK(it->lambda_read.value() == 41665.0);
  CHECK(it->lambda_write.value() == 8333.0);
  CHECK_FALSE(it->read_ok);
  CHECK_FALSE(it->write_ok);
  CHECK(it->remediation ==
        std::vector<Remediation>{Remediation::BatchTransactions, Remediation::ScaleBlockchain});
}

TEST_CASE("zero demand is always suitable") {
  const auto v = assess(demand(0, 0), cap(1, 1));
  CHECK(v.suitable());
  CHECK(std::isinf(v.headroom_read));
  CHECK(std::isinf(v.headroom_write));
}

TEST_CASE("demand equal to capacity is suitable, one ulp above is not") {
  CHECK(assess(demand(20500, 1400), cap(20500, 1400)).suitable());
  const auto over = assess(demand(20500, std::nextafter(1400.0, 1e9)), cap(20500, 1400));
  CHECK(over.read_ok);
  CHECK_FALSE(over.write_ok);
  CHECK(over.remediation.front() == Remediation::BatchTransactions);
  const auto read_over = assess(demand(std::nextafter(20500.0, 1e9), 1), cap(20500, 1400));
  CHECK_FALSE(read_over.read_ok);
  CHECK(read_over.remediation == std::vector<Remediation>{Remediation::ScaleBlockchain});
}

TEST_CASE("raising capacity never turns a verdict unsuitable") {
  CounterRng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const auto d = demand(rng.next_open01() * 5e4, rng.next_open01() * 3e3);
    const double r = 1 + rng.next_open01() * 4e4, w = 1 + rng.next_open01() * 2e3;
    const auto base = assess(d, cap(r, w));
    const auto more = assess(d, cap(r * 1.5, w * 1.5));
    REQUIRE((!base.read_ok || more.read_ok));
    REQUIRE((!base.write_ok || more.write_ok));
    REQUIRE(base.remediation.empty() == base.suitable());
  }
}

TEST_CASE("assessment rejects incomplete capacity") {
  CapacityProfile half;
  half.max_lambda_write = RatePerSecond(1400);
  CHECK_THROWS_AS(assess(demand(1, 1), half), InputError);
  CHECK_THROWS_AS(assess(demand(1, 1), cap(0, 1400)), InputError);
}

TEST_CASE("scenario without eta needs one supplied") {
  const auto cat = builtin_scenarios();
  const auto& rs = find_scenario(cat, ScenarioId::ResourceSharing);
  CHECK_THROWS_WITH_AS(methodology_report(rs, std::nullopt, published()),
                       doctest::Contains("eta required"), InputError);
  const auto report = methodology_report(rs, 10.0, published());
  CHECK(report.suitable());
  CHECK(report.workloads.size() == rs.use_cases.size());
}

TEST_CASE("report JSON walks every stage in order") {
  const auto cat = builtin_scenarios();
  const auto j = methodology_report(find_scenario(cat, ScenarioId::AAA), std::nullopt, published())
                     .to_json();
  std::vector<std::string> stages;
  for (const auto& s : j["stages"]) stages.push_back(s["stage"]);
  CHECK(stages ==
        std::vector<std::string>{"why", "what", "when", "arrival_model", "evaluation", "comparison"});
  CHECK(j["stages"][5]["suitable"] == false);
}

TEST_CASE("capacity JSON round-trip and validation") {
  auto p = cap(123.5, 45.25);
  p.node_count = 6;
  p.source = "simulated";
  p.search_tolerance = 0.01;
  CHECK(capacity_from_json(to_json(p)) == p);

  CapacityProfile partial;
  partial.max_lambda_write = RatePerSecond(10);
  const auto j = to_json(partial);
  CHECK(j["max_lambda_read"].is_null());
  CHECK(capacity_from_json(j) == partial);

  using nlohmann::json;
  CHECK_THROWS_AS(capacity_from_json(json::array()), InputError);
  CHECK_THROWS_AS(capacity_from_json(json{{"max_lambda_read", 1}}), InputError);
  CHECK_THROWS_AS(capacity_from_json(json{{"schema_version", 2}}), InputError);
  CHECK_THROWS_AS(capacity_from_json(json{{"schema_version", 1}, {"speed", 3}}), InputError);
  CHECK_THROWS_AS(capacity_from_json(json{{"schema_version", 1}, {"max_lambda_read", "fast"}}),
                  InputError);
  CHECK_THROWS_AS(capacity_from_json(json{{"schema_version", 1}, {"max_lambda_read", -5}}),
                  InputError);
}
