#pragma once

// Discrete-event model of an IBFT-style consortium chain. Writes wait in a
// shared pool and are committed by three-phase consensus rounds, one block at
// a time with a round-robin proposer. Reads are answered locally by a node's
// FIFO query server and never touch consensus.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chaincap/arrival.hpp"

namespace chaincap {

enum class ReadMode {
  SingleNode,  // every read goes to node 0
  MultiNode,   // reads are spread round-robin over all nodes
  Random,      // uniformly random node, drawn from the run seed
};

std::string_view to_string(ReadMode mode);
ReadMode parse_read_mode(std::string_view text);

struct ClusterConfig {
  std::uint32_t node_count = 4;
  double rtt_ms = 30.0;
  // Optional N x N round-trip matrix (ms); overrides rtt_ms when non-empty.
  std::vector<std::vector<double>> rtt_matrix_ms;
  double block_interval_ms = 250.0;
  std::uint32_t block_tx_capacity = 500;
  double write_exec_us = 579.0;
  double read_service_us = 198.8;
  double msg_proc_us = 1000.0;
  double pool_scan_cost_us_per_tx = 1.0;
  double node_cpu_capacity = 1.0e6;  // work units (CPU microseconds) per second
  double node_mem_bytes = 16.0 * 1024 * 1024 * 1024;
  double empty_block_bytes = 1024.0;
  ReadMode read_mode = ReadMode::MultiNode;
  bool block_production = true;
  double window_s = 1.0;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
  double one_way_ms(std::uint32_t from, std::uint32_t to) const;

  friend bool operator==(const ClusterConfig&, const ClusterConfig&) = default;
};

/// The checked-in calibrated profile (profiles/default_cluster.ini).
ClusterConfig default_cluster();

ClusterConfig parse_cluster_profile(std::string_view text);
std::string serialize_cluster_profile(const ClusterConfig& cluster);

struct ConsensusParams {
  std::uint32_t f = 0;
  std::uint32_t quorum = 0;

  static ConsensusParams for_nodes(std::uint32_t node_count);
};

/// Messages delivered in one round: pre-prepare to N-1 peers, then prepare
/// and commit from every node to every other node.
std::uint64_t consensus_messages_per_round(std::uint32_t node_count);

/// Time for the slowest node to hear from a quorum of nodes (itself included).
double quorum_one_way_ms(const ClusterConfig& cluster, const ConsensusParams& params);

/// Proposal-to-commit time of one block, in milliseconds.
double consensus_round_latency(const ClusterConfig& cluster, const ConsensusParams& params,
                               std::uint32_t block_fill, std::uint64_t pool_depth);

/// min(1, work / (capacity * window)).
double cpu_utilization(double work, double capacity, double window_s);

/// Per-node FIFO read servers.
class ReadServers {
 public:
  explicit ReadServers(const ClusterConfig& cluster);

  /// Completion time (seconds) of a read arriving at `node_id`.
  /// `start` receives the time service begins.
  double serve_read(std::uint32_t node_id, const TxEvent& read, double* start = nullptr);

 private:
  std::vector<double> free_at_;
  double service_s_;
};

struct MetricsTimeline {
  double window_s = 1.0;
  std::uint32_t node_count = 0;
  std::vector<double> committed_write_tps;
  std::vector<double> served_read_tps;
  std::vector<double> mean_write_latency_ms;  // 0 for windows without commits
  std::vector<double> mean_read_latency_ms;   // 0 for windows without completions
  std::vector<std::vector<double>> cpu_utilization;  // [window][node]
  std::vector<std::uint64_t> pool_depth;            // pending writes at window end
  std::vector<std::uint64_t> ledger_bytes;          // at window end
  std::vector<double> mem_utilization;              // (ledger + pool bytes) / node_mem_bytes

  std::size_t windows() const { return committed_write_tps.size(); }
};

struct LedgerModel {
  double empty_block_bytes = 1024.0;
  std::uint64_t blocks_produced = 0;
  std::uint64_t total_tx_bytes = 0;

  std::uint64_t bytes() const;
};

struct BlockRecord {
  std::uint64_t height = 0;
  std::uint32_t proposer = 0;
  double proposed_at = 0.0;
  double committed_at = 0.0;
  std::uint32_t fill = 0;
  std::uint64_t pool_depth = 0;
};

struct RunTotals {
  std::uint64_t arrived_writes = 0;
  std::uint64_t committed_writes = 0;
  std::uint64_t pending_writes = 0;
  std::uint64_t arrived_reads = 0;
  std::uint64_t served_reads = 0;    // completed by the horizon
  std::uint64_t inflight_reads = 0;  // accepted but still in service at the horizon
};

struct RunOptions {
  bool record_read_completions = false;
};

struct RunResult {
  MetricsTimeline timeline;
  RunTotals totals;
  LedgerModel ledger;
  std::vector<BlockRecord> blocks;
  std::vector<double> read_completions;  // per read, in arrival order, when requested
  // Cumulative counters at each window end, for conservation checks.
  std::vector<std::uint64_t> cumulative_arrived_writes;
  std::vector<std::uint64_t> cumulative_committed_writes;
};

/// Simulates [0, horizon]. Throws ConfigError for an invalid cluster and
/// ContractViolation for unsorted events or events past the horizon.
RunResult run(const ClusterConfig& cluster, std::span<const TxEvent> events, double horizon,
              std::uint64_t seed, const RunOptions& options = {});

}  // namespace chaincap
