#include <doctest.h>

#include <numeric>

#include "chaincap/chainsim.hpp"
#include "chaincap/errors.hpp"
#include "chaincap/report.hpp"

using namespace chaincap;

namespace {

std::vector<TxEvent> stream(ArrivalKind kind, TxKind tx, double rate, double horizon,
                            std::uint64_t seed = 1, std::uint32_t payload = 256) {
  return generate_events({kind, RatePerSecond(rate), seed}, tx, horizon, payload, "test");
}

double mean_after(const std::vector<double>& v, std::size_t skip) {
  return std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(skip), v.end(), 0.0) /
         static_cast<double>(v.size() - skip);
}

ClusterConfig zero_cost(std::uint32_t nodes) {
  ClusterConfig c;
  c.node_count = nodes;
  c.write_exec_us = 0;
  c.read_service_us = 0;
  c.msg_proc_us = 0;
  c.pool_scan_cost_us_per_tx = 0;
  return c;
}

}  // namespace

TEST_CASE("fault tolerance and quorum sizes") {
  CHECK(ConsensusParams::for_nodes(4).f == 1);
  CHECK(ConsensusParams::for_nodes(4).quorum == 3);
  CHECK(ConsensusParams::for_nodes(7).f == 2);
  CHECK(ConsensusParams::for_nodes(7).quorum == 5);
  CHECK(ConsensusParams::for_nodes(6).f == 1);
  CHECK(consensus_messages_per_round(4) == 27);
  CHECK(consensus_messages_per_round(7) == 90);
}

TEST_CASE("round latency is three network hops when costs are zero") {
  const auto c = zero_cost(4);
  CHECK(consensus_round_latency(c, ConsensusParams::for_nodes(4), 0, 0) == doctest::Approx(45.0));
  CHECK(consensus_round_latency(c, ConsensusParams::for_nodes(4), 500, 10000) ==
        doctest::Approx(45.0));
}

TEST_CASE("quorum delay uses the worst node's quorum-th fastest peer") {
  auto c = zero_cost(4);
  c.rtt_matrix_ms = {{0, 10, 20, 200}, {10, 0, 40, 200}, {20, 40, 0, 200}, {200, 200, 200, 0}};
  // Node 3 hears itself at 0 and everyone else at 100 ms one-way.
  CHECK(quorum_one_way_ms(c, ConsensusParams::for_nodes(4)) == doctest::Approx(100.0));
}

TEST_CASE("round latency grows with node count") {
  double prev = 0.0;
  for (std::uint32_t n = 4; n <= 10; ++n) {
    ClusterConfig c;
    c.node_count = n;
    const double l = consensus_round_latency(c, ConsensusParams::for_nodes(n), 500, 500);
    CHECK(l > prev);
    prev = l;
  }
}

TEST_CASE("cpu utilization examples") {
  CHECK(cpu_utilization(0, 1e6, 1.0) == 0.0);
  CHECK(cpu_utilization(1e6, 1e6, 1.0) == 1.0);
  CHECK(cpu_utilization(5e5, 1e6, 1.0) == 0.5);
  CHECK(cpu_utilization(3e6, 1e6, 1.0) == 1.0);
}

TEST_CASE("empty stream leaves every metric at zero") {
  const auto r = run(default_cluster(), {}, 10.0, 1);
  REQUIRE(r.timeline.windows() == 10);
  for (std::size_t w = 0; w < 10; ++w) {
    CHECK(r.timeline.committed_write_tps[w] == 0.0);
    CHECK(r.timeline.served_read_tps[w] == 0.0);
    CHECK(r.timeline.pool_depth[w] == 0);
  }
  CHECK(r.totals.arrived_writes == 0);
  CHECK(r.blocks.size() == 39);
}

TEST_CASE("single write commits at the hand-traced time") {
  const std::vector<TxEvent> one{TxEvent{0.0, TxKind::Write, 256, "x", 0}};
  const auto r = run(default_cluster(), one, 2.0, 1);
  REQUIRE(r.totals.committed_writes == 1);
  // Proposal at 250 ms, then 45 ms network, 27 ms messages, 0.579 ms exec, 0.001 ms scan.
  CHECK(r.timeline.mean_write_latency_ms[0] == doctest::Approx(322.58).epsilon(1e-9));
  CHECK(r.timeline.mean_write_latency_ms[0] >= 125.0);
  CHECK(r.blocks.front().fill == 1);
  CHECK(r.blocks.front().proposer == 0);
  CHECK(r.blocks[1].proposer == 1);
  CHECK(r.blocks[1].fill == 0);
}

TEST_CASE("below capacity committed throughput tracks the offered rate") {
  const auto ev = stream(ArrivalKind::Deterministic, TxKind::Write, 1000, 60);
  const auto r = run(default_cluster(), ev, 60, 1);
  CHECK(mean_after(r.timeline.committed_write_tps, 6) == doctest::Approx(1000).epsilon(0.01));
}

TEST_CASE("single-node read server saturates at 1 / service time") {
  auto c = default_cluster();
  c.read_service_us = 200.0;
  c.read_mode = ReadMode::SingleNode;
  const auto below = run(c, stream(ArrivalKind::Deterministic, TxKind::Read, 4000, 20), 20, 1);
  CHECK(mean_after(below.timeline.served_read_tps, 2) == doctest::Approx(4000).epsilon(0.01));
  const auto above = run(c, stream(ArrivalKind::Deterministic, TxKind::Read, 8000, 20), 20, 1);
  CHECK(mean_after(above.timeline.served_read_tps, 2) == doctest::Approx(5000).epsilon(0.01));

  c.read_mode = ReadMode::MultiNode;
  const auto multi = run(c, stream(ArrivalKind::Deterministic, TxKind::Read, 40000, 20), 20, 1);
  CHECK(mean_after(multi.timeline.served_read_tps, 2) == doctest::Approx(20000).epsilon(0.01));
}

TEST_CASE("read completions do not depend on block production") {
  const auto reads = stream(ArrivalKind::Poisson, TxKind::Read, 15000, 10, 3, 0);
  const auto writes = stream(ArrivalKind::Poisson, TxKind::Write, 1200, 10, 4);
  const auto mixed = merge_streams(reads, writes);
  for (auto mode : {ReadMode::SingleNode, ReadMode::MultiNode, ReadMode::Random}) {
    auto on = default_cluster();
    on.read_mode = mode;
    auto off = on;
    off.block_production = false;
    const RunOptions opt{true};
    const auto a = run(on, mixed, 10, 9, opt);
    const auto b = run(off, mixed, 10, 9, opt);
    REQUIRE(a.read_completions.size() == reads.size());
    CHECK(a.read_completions == b.read_completions);
    CHECK(a.timeline.served_read_tps == b.timeline.served_read_tps);
    CHECK(b.totals.committed_writes == 0);
  }
}

TEST_CASE("pool conservation and ledger identity hold in every window") {
  for (double rate : {300.0, 1400.0, 3000.0}) {
    const auto ev = stream(ArrivalKind::Poisson, TxKind::Write, rate, 30, 5, 100);
    const auto r = run(default_cluster(), ev, 30, 5);
    std::uint64_t committed_bytes = 0;
    for (std::size_t w = 0; w < r.timeline.windows(); ++w) {
      CHECK(r.timeline.pool_depth[w] ==
            r.cumulative_arrived_writes[w] - r.cumulative_committed_writes[w]);
    }
    CHECK(r.totals.arrived_writes == ev.size());
    CHECK(r.totals.arrived_writes == r.totals.committed_writes + r.totals.pending_writes);
    CHECK(r.timeline.pool_depth.back() == r.totals.pending_writes);
    for (const auto& b : r.blocks) committed_bytes += 100ULL * b.fill;
    CHECK(r.ledger.bytes() == 1024ULL * r.blocks.size() + committed_bytes);
    CHECK(r.timeline.ledger_bytes.back() == r.ledger.bytes());
    CHECK(std::is_sorted(r.timeline.ledger_bytes.begin(), r.timeline.ledger_bytes.end()));
    for (const auto& row : r.timeline.cpu_utilization)
      for (double u : row) CHECK((u >= 0.0 && u <= 1.0));
  }
}

TEST_CASE("blocks respect capacity, interval and sequential commits") {
  const auto ev = stream(ArrivalKind::Poisson, TxKind::Write, 2500, 20, 8);
  const auto r = run(default_cluster(), ev, 20, 8);
  REQUIRE(r.blocks.size() > 2);
  for (std::size_t i = 0; i < r.blocks.size(); ++i) {
    CHECK(r.blocks[i].fill <= 500);
    CHECK(r.blocks[i].proposer == i % 4);
    if (i > 0) {
      CHECK(r.blocks[i].proposed_at >= r.blocks[i - 1].committed_at);
      CHECK(r.blocks[i].proposed_at >= r.blocks[i - 1].proposed_at + 0.25 - 1e-12);
    }
  }
}

TEST_CASE("identical inputs give identical timelines") {
  auto c = default_cluster();
  c.read_mode = ReadMode::Random;
  const auto ev = merge_streams(stream(ArrivalKind::Poisson, TxKind::Read, 9000, 15, 2),
                                stream(ArrivalKind::Poisson, TxKind::Write, 900, 15, 3));
  const auto a = run(c, ev, 15, 77);
  const auto b = run(c, ev, 15, 77);
  CHECK(timeline_csv(a.timeline) == timeline_csv(b.timeline));
  const auto d = run(c, ev, 15, 78);
  CHECK(timeline_csv(a.timeline) != timeline_csv(d.timeline));
}

TEST_CASE("throughput declines past saturation") {
  const auto at = run(default_cluster(),
                      stream(ArrivalKind::Deterministic, TxKind::Write, 1400, 60), 60, 1);
  const auto over = run(default_cluster(),
                        stream(ArrivalKind::Deterministic, TxKind::Write, 2800, 60), 60, 1);
  CHECK(mean_after(over.timeline.committed_write_tps, 6) <
        mean_after(at.timeline.committed_write_tps, 6));
  CHECK(over.timeline.pool_depth.back() > at.timeline.pool_depth.back());
}

TEST_CASE("more validators commit less under the same overload") {
  double prev = 1e18;
  for (std::uint32_t n = 4; n <= 7; ++n) {
    auto c = default_cluster();
    c.node_count = n;
    const auto r = run(c, stream(ArrivalKind::Deterministic, TxKind::Write, 2000, 30), 30, 1);
    const double tps = mean_after(r.timeline.committed_write_tps, 3);
    CHECK(tps < prev);
    prev = tps;
  }
}

TEST_CASE("run rejects broken event streams") {
  std::vector<TxEvent> ev{TxEvent{1.0, TxKind::Write, 0, "", 0},
                          TxEvent{0.5, TxKind::Write, 0, "", 1}};
  CHECK_THROWS_AS(run(default_cluster(), ev, 10, 1), ContractViolation);
  std::vector<TxEvent> late{TxEvent{11.0, TxKind::Write, 0, "", 0}};
  CHECK_THROWS_AS(run(default_cluster(), late, 10, 1), ContractViolation);
  CHECK_THROWS_AS(run(default_cluster(), {}, 0.0, 1), ContractViolation);
}

TEST_CASE("cluster validation names the field") {
  auto c = default_cluster();
  c.node_count = 3;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("node_count"), ConfigError);
  c = default_cluster();
  c.write_exec_us = -1;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("write_exec_us"), ConfigError);
  c = default_cluster();
  c.rtt_matrix_ms = {{0, 1}, {1, 0}};
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("rtt_matrix"), ConfigError);
}

TEST_CASE("shipped profile matches the built-in default") {
  const auto text = read_file(std::filesystem::path(CHAINCAP_SOURCE_DIR) / "profiles" /
                              "default_cluster.ini");
  CHECK(parse_cluster_profile(text) == default_cluster());
}

TEST_CASE("cluster profile round-trip and errors") {
  auto c = default_cluster();
  c.node_count = 5;
  c.read_mode = ReadMode::Random;
  c.block_production = false;
  c.rtt_matrix_ms.assign(5, std::vector<double>(5, 12.5));
  for (int i = 0; i < 5; ++i) c.rtt_matrix_ms[i][i] = 0;
  CHECK(parse_cluster_profile(serialize_cluster_profile(c)) == c);

  CHECK_THROWS_AS(parse_cluster_profile("schema_version = 1\n[cluster]\nnode_count = 3\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_cluster_profile("schema_version = 1\n[cluster]\nwidgets = 3\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_cluster_profile("schema_version = 1\n[cluster]\nread_mode = sideways\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_cluster_profile("schema_version = 1\n[nodes]\n"), ParseError);
}
