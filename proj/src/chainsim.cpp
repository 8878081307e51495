#include "chaincap/chainsim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

#include <fmt/format.h>

#include "chaincap/errors.hpp"

namespace chaincap {

std::string_view to_string(ReadMode mode) {
  switch (mode) {
    case ReadMode::SingleNode: return "single";
    case ReadMode::MultiNode: return "multi";
    case ReadMode::Random: return "random";
  }
  return "multi";
}

ReadMode parse_read_mode(std::string_view text) {
  if (text == "single") return ReadMode::SingleNode;
  if (text == "multi") return ReadMode::MultiNode;
  if (text == "random") return ReadMode::Random;
  throw ConfigError(fmt::format("read_mode: unknown value '{}' (single|multi|random)", text));
}

void ClusterConfig::validate() const {
  auto require = [](bool ok, std::string_view field, auto value, std::string_view rule) {
    if (!ok) throw ConfigError(fmt::format("{}: {} (got {})", field, rule, value));
  };
  auto cost = [&](double v, std::string_view field) {
    require(std::isfinite(v) && v >= 0.0, field, v, "must be finite and >= 0");
  };
  require(node_count >= 4, "node_count", node_count, "BFT needs at least 4 nodes");
  cost(rtt_ms, "rtt_ms");
  cost(block_interval_ms, "block_interval_ms");
  require(block_tx_capacity >= 1, "block_tx_capacity", block_tx_capacity, "must be >= 1");
  cost(write_exec_us, "write_exec_us");
  cost(read_service_us, "read_service_us");
  cost(msg_proc_us, "msg_proc_us");
  cost(pool_scan_cost_us_per_tx, "pool_scan_cost_us_per_tx");
  cost(empty_block_bytes, "empty_block_bytes");
  require(std::isfinite(node_cpu_capacity) && node_cpu_capacity > 0.0, "node_cpu_capacity",
          node_cpu_capacity, "must be > 0");
  require(std::isfinite(node_mem_bytes) && node_mem_bytes > 0.0, "node_mem_bytes",
          node_mem_bytes, "must be > 0");
  require(std::isfinite(window_s) && window_s > 0.0, "window_s", window_s, "must be > 0");
  if (!rtt_matrix_ms.empty()) {
    require(rtt_matrix_ms.size() == node_count, "rtt_matrix", rtt_matrix_ms.size(),
            "needs one row per node");
    for (std::size_t i = 0; i < rtt_matrix_ms.size(); ++i) {
      const auto& row = rtt_matrix_ms[i];
      require(row.size() == node_count, "rtt_matrix", row.size(), "needs one column per node");
      for (const double v : row) cost(v, "rtt_matrix");
    }
  }
}

double ClusterConfig::one_way_ms(std::uint32_t from, std::uint32_t to) const {
  if (from == to) return 0.0;
  const double rtt = rtt_matrix_ms.empty() ? rtt_ms : rtt_matrix_ms[from][to];
  return rtt / 2.0;
}

ConsensusParams ConsensusParams::for_nodes(std::uint32_t node_count) {
  const std::uint32_t f = node_count >= 1 ? (node_count - 1) / 3 : 0;
  return ConsensusParams{f, 2 * f + 1};
}

std::uint64_t consensus_messages_per_round(std::uint32_t node_count) {
  const std::uint64_t n = node_count;
  return (n - 1) + 2 * n * (n - 1);
}

double quorum_one_way_ms(const ClusterConfig& cluster, const ConsensusParams& params) {
  double worst = 0.0;
  std::vector<double> row(cluster.node_count);
  for (std::uint32_t i = 0; i < cluster.node_count; ++i) {
    for (std::uint32_t j = 0; j < cluster.node_count; ++j) row[j] = cluster.one_way_ms(j, i);
    const auto k = std::min<std::size_t>(params.quorum, row.size()) - 1;
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
    worst = std::max(worst, row[k]);
  }
  return worst;
}

double consensus_round_latency(const ClusterConfig& cluster, const ConsensusParams& params,
                               std::uint32_t block_fill, std::uint64_t pool_depth) {
  const double network_ms = 3.0 * quorum_one_way_ms(cluster, params);
  const double work_us =
      cluster.msg_proc_us * static_cast<double>(consensus_messages_per_round(cluster.node_count)) +
      cluster.write_exec_us * block_fill +
      cluster.pool_scan_cost_us_per_tx * static_cast<double>(pool_depth);
  return network_ms + work_us / 1000.0;
}

double cpu_utilization(double work, double capacity, double window_s) {
  if (work <= 0.0) return 0.0;
  return std::min(1.0, work / (capacity * window_s));
}

ReadServers::ReadServers(const ClusterConfig& cluster)
    : free_at_(cluster.node_count, 0.0), service_s_(cluster.read_service_us / 1.0e6) {}

double ReadServers::serve_read(std::uint32_t node_id, const TxEvent& read, double* start) {
  auto& free = free_at_.at(node_id);
  const double begin = std::max(read.timestamp, free);
  free = begin + service_s_;
  if (start != nullptr) *start = begin;
  return free;
}

std::uint64_t LedgerModel::bytes() const {
  return static_cast<std::uint64_t>(empty_block_bytes) * blocks_produced + total_tx_bytes;
}

namespace {

enum class EventType : std::uint8_t { Arrival, Proposal, Commit };

struct SimEvent {
  double time;
  std::uint64_t seq;
  EventType type;
  std::uint64_t index;

  bool operator>(const SimEvent& o) const {
    return time != o.time ? time > o.time : seq > o.seq;
  }
};

class Windows {
 public:
  Windows(double horizon, double window_s, std::uint32_t nodes)
      : window_s_(window_s),
        count_(std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(horizon / window_s - 1e-9)))),
        nodes_(nodes),
        busy_(count_ * nodes, 0.0) {}

  std::size_t count() const { return count_; }

  std::size_t index(double t) const {
    const auto w = static_cast<std::size_t>(std::max(0.0, std::floor(t / window_s_)));
    return std::min(w, count_ - 1);
  }

  // Spreads `work` uniformly over [start, end] on one node.
  void add_work(std::uint32_t node, double start, double end, double work) {
    if (work <= 0.0) return;
    if (end <= start) {
      busy_[index(start) * nodes_ + node] += work;
      return;
    }
    const auto first = index(start);
    const auto last_raw = static_cast<std::size_t>(std::floor(end / window_s_));
    const auto last = std::min(last_raw, count_ - 1);
    const double rate = work / (end - start);
    for (auto w = first; w <= last; ++w) {
      const double lo = std::max(start, static_cast<double>(w) * window_s_);
      const double hi = std::min(end, static_cast<double>(w + 1) * window_s_);
      if (hi > lo) busy_[w * nodes_ + node] += rate * (hi - lo);
    }
  }

  double busy(std::size_t window, std::uint32_t node) const { return busy_[window * nodes_ + node]; }

 private:
  double window_s_;
  std::size_t count_;
  std::uint32_t nodes_;
  std::vector<double> busy_;
};

}  // namespace

RunResult run(const ClusterConfig& cluster, std::span<const TxEvent> events, double horizon,
              std::uint64_t seed, const RunOptions& options) {
  cluster.validate();
  if (!std::isfinite(horizon) || horizon <= 0.0) {
    throw ContractViolation(fmt::format("horizon must be finite and > 0, got {}", horizon));
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!(events[i].timestamp >= 0.0)) {
      throw ContractViolation(fmt::format("event {} has negative timestamp", i));
    }
    if (i > 0 && events[i].timestamp < events[i - 1].timestamp) {
      throw ContractViolation(fmt::format("events not sorted by timestamp at index {}", i));
    }
  }
  if (!events.empty() && events.back().timestamp > horizon) {
    throw ContractViolation(fmt::format("last event at {} s is past the horizon {} s",
                                        events.back().timestamp, horizon));
  }

  const std::uint32_t nodes = cluster.node_count;
  const auto params = ConsensusParams::for_nodes(nodes);
  const double interval_s = cluster.block_interval_ms / 1000.0;
  Windows win(horizon, cluster.window_s, nodes);
  const std::size_t nwin = win.count();

  std::vector<std::uint64_t> arrived_w(nwin, 0), committed_w(nwin, 0), served_r(nwin, 0);
  std::vector<std::uint64_t> arrived_bytes_w(nwin, 0), committed_bytes_w(nwin, 0),
      blocks_w(nwin, 0);
  std::vector<double> write_lat_sum(nwin, 0.0), read_lat_sum(nwin, 0.0);

  RunResult result;
  result.ledger.empty_block_bytes = cluster.empty_block_bytes;
  if (options.record_read_completions) result.read_completions.reserve(events.size());

  std::priority_queue<SimEvent, std::vector<SimEvent>, std::greater<>> queue;
  std::uint64_t seq = 0;
  auto schedule = [&](double t, EventType type, std::uint64_t index) {
    queue.push(SimEvent{t, seq++, type, index});
  };

  if (!events.empty()) schedule(events.front().timestamp, EventType::Arrival, 0);
  if (cluster.block_production) schedule(interval_s, EventType::Proposal, 0);

  ReadServers servers(cluster);
  CounterRng dispatch_rng(seed, 0x7265616473ULL);
  std::uint64_t read_counter = 0;
  std::deque<std::size_t> pool;  // write indices, FIFO; the open block is the front `fill`
  BlockRecord open_block;

  while (!queue.empty()) {
    const SimEvent ev = queue.top();
    queue.pop();
    if (ev.time > horizon) break;

    switch (ev.type) {
      case EventType::Arrival: {
        const auto& tx = events[ev.index];
        const auto w = win.index(tx.timestamp);
        if (tx.kind == TxKind::Write) {
          pool.push_back(ev.index);
          ++arrived_w[w];
          arrived_bytes_w[w] += tx.payload_bytes;
          ++result.totals.arrived_writes;
        } else {
          std::uint32_t node = 0;
          if (cluster.read_mode == ReadMode::MultiNode) {
            node = static_cast<std::uint32_t>(read_counter % nodes);
          } else if (cluster.read_mode == ReadMode::Random) {
            node = static_cast<std::uint32_t>(dispatch_rng.next_u64() % nodes);
          }
          ++read_counter;
          double start = 0.0;
          const double done = servers.serve_read(node, tx, &start);
          win.add_work(node, start, done, cluster.read_service_us);
          ++result.totals.arrived_reads;
          if (options.record_read_completions) result.read_completions.push_back(done);
          if (done <= horizon) {
            const auto wd = win.index(done);
            ++served_r[wd];
            read_lat_sum[wd] += (done - tx.timestamp) * 1000.0;
            ++result.totals.served_reads;
          } else {
            ++result.totals.inflight_reads;
          }
        }
        if (ev.index + 1 < events.size()) {
          schedule(events[ev.index + 1].timestamp, EventType::Arrival, ev.index + 1);
        }
        break;
      }
      case EventType::Proposal: {
        const auto fill =
            static_cast<std::uint32_t>(std::min<std::size_t>(cluster.block_tx_capacity, pool.size()));
        const std::uint64_t depth = pool.size();
        const double latency_ms = consensus_round_latency(cluster, params, fill, depth);
        const double commit_at = ev.time + latency_ms / 1000.0;
        open_block = BlockRecord{result.blocks.size() + 1,
                                 static_cast<std::uint32_t>(result.blocks.size() % nodes),
                                 ev.time, commit_at, fill, depth};
        const double shared_us = cluster.write_exec_us * fill +
                                 cluster.pool_scan_cost_us_per_tx * static_cast<double>(depth);
        for (std::uint32_t n = 0; n < nodes; ++n) {
          // Every node receives N-1 prepares and N-1 commits; followers also get the pre-prepare.
          const double msgs = 2.0 * (nodes - 1) + (n == open_block.proposer ? 0.0 : 1.0);
          win.add_work(n, ev.time, commit_at, shared_us + cluster.msg_proc_us * msgs);
        }
        schedule(commit_at, EventType::Commit, 0);
        break;
      }
      case EventType::Commit: {
        const auto w = win.index(ev.time);
        std::uint64_t bytes = 0;
        for (std::uint32_t i = 0; i < open_block.fill; ++i) {
          const auto& tx = events[pool.front()];
          pool.pop_front();
          write_lat_sum[w] += (ev.time - tx.timestamp) * 1000.0;
          bytes += tx.payload_bytes;
        }
        committed_w[w] += open_block.fill;
        committed_bytes_w[w] += bytes;
        ++blocks_w[w];
        result.totals.committed_writes += open_block.fill;
        result.ledger.blocks_produced += 1;
        result.ledger.total_tx_bytes += bytes;
        result.blocks.push_back(open_block);
        schedule(std::max(ev.time, open_block.proposed_at + interval_s), EventType::Proposal, 0);
        break;
      }
    }
  }

  result.totals.pending_writes = result.totals.arrived_writes - result.totals.committed_writes;

  auto& tl = result.timeline;
  tl.window_s = cluster.window_s;
  tl.node_count = nodes;
  tl.committed_write_tps.resize(nwin);
  tl.served_read_tps.resize(nwin);
  tl.mean_write_latency_ms.resize(nwin);
  tl.mean_read_latency_ms.resize(nwin);
  tl.cpu_utilization.assign(nwin, std::vector<double>(nodes, 0.0));
  tl.pool_depth.resize(nwin);
  tl.ledger_bytes.resize(nwin);
  tl.mem_utilization.resize(nwin);
  result.cumulative_arrived_writes.resize(nwin);
  result.cumulative_committed_writes.resize(nwin);

  std::uint64_t cum_arrived = 0, cum_committed = 0, cum_arrived_bytes = 0,
                cum_committed_bytes = 0, cum_blocks = 0;
  const auto empty_block = static_cast<std::uint64_t>(cluster.empty_block_bytes);
  for (std::size_t w = 0; w < nwin; ++w) {
    cum_arrived += arrived_w[w];
    cum_committed += committed_w[w];
    cum_arrived_bytes += arrived_bytes_w[w];
    cum_committed_bytes += committed_bytes_w[w];
    cum_blocks += blocks_w[w];
    result.cumulative_arrived_writes[w] = cum_arrived;
    result.cumulative_committed_writes[w] = cum_committed;

    tl.committed_write_tps[w] = static_cast<double>(committed_w[w]) / cluster.window_s;
    tl.served_read_tps[w] = static_cast<double>(served_r[w]) / cluster.window_s;
    tl.mean_write_latency_ms[w] =
        committed_w[w] ? write_lat_sum[w] / static_cast<double>(committed_w[w]) : 0.0;
    tl.mean_read_latency_ms[w] =
        served_r[w] ? read_lat_sum[w] / static_cast<double>(served_r[w]) : 0.0;
    for (std::uint32_t n = 0; n < nodes; ++n) {
      tl.cpu_utilization[w][n] =
          cpu_utilization(win.busy(w, n), cluster.node_cpu_capacity, cluster.window_s);
    }
    tl.pool_depth[w] = cum_arrived - cum_committed;
    tl.ledger_bytes[w] = cum_blocks * empty_block + cum_committed_bytes;
    const double pool_bytes = static_cast<double>(cum_arrived_bytes - cum_committed_bytes);
    tl.mem_utilization[w] =
        std::min(1.0, (static_cast<double>(tl.ledger_bytes[w]) + pool_bytes) / cluster.node_mem_bytes);
  }
  return result;
}

}  // namespace chaincap
