#include <fmt/format.h>
#include <fmt/ranges.h>

#include "chaincap/chainsim.hpp"
#include "chaincap/errors.hpp"
#include "chaincap/kvconfig.hpp"

namespace chaincap {

ClusterConfig default_cluster() { return ClusterConfig{}; }

ClusterConfig parse_cluster_profile(std::string_view text) {
  const auto doc = kv::parse(text);
  kv::require_schema_version(doc, 1);
  kv::check_keys(doc.root, {"schema_version"}, "document root");

  ClusterConfig c;
  bool have_cluster = false;
  for (const auto& section : doc.sections) {
    if (section.name == "cluster") {
      if (have_cluster) throw ConflictError(fmt::format("line {}: duplicate [cluster]", section.line));
      have_cluster = true;
      kv::check_keys(section.entries,
                     {"node_count", "rtt_ms", "block_interval_ms", "block_tx_capacity",
                      "write_exec_us", "read_service_us", "msg_proc_us",
                      "pool_scan_cost_us_per_tx", "node_cpu_capacity", "node_mem_bytes",
                      "empty_block_bytes", "read_mode", "block_production", "window_s"},
                     "[cluster]");
      for (const auto& e : section.entries) {
        if (e.key == "node_count") c.node_count = static_cast<std::uint32_t>(kv::as_uint(e));
        else if (e.key == "rtt_ms") c.rtt_ms = kv::as_double(e);
        else if (e.key == "block_interval_ms") c.block_interval_ms = kv::as_double(e);
        else if (e.key == "block_tx_capacity") c.block_tx_capacity = static_cast<std::uint32_t>(kv::as_uint(e));
        else if (e.key == "write_exec_us") c.write_exec_us = kv::as_double(e);
        else if (e.key == "read_service_us") c.read_service_us = kv::as_double(e);
        else if (e.key == "msg_proc_us") c.msg_proc_us = kv::as_double(e);
        else if (e.key == "pool_scan_cost_us_per_tx") c.pool_scan_cost_us_per_tx = kv::as_double(e);
        else if (e.key == "node_cpu_capacity") c.node_cpu_capacity = kv::as_double(e);
        else if (e.key == "node_mem_bytes") c.node_mem_bytes = kv::as_double(e);
        else if (e.key == "empty_block_bytes") c.empty_block_bytes = kv::as_double(e);
        else if (e.key == "block_production") c.block_production = kv::as_bool(e);
        else if (e.key == "window_s") c.window_s = kv::as_double(e);
        else {
          try {
            c.read_mode = parse_read_mode(e.value);
          } catch (const ConfigError& err) {
            throw ParseError(e.line, e.key, err.what());
          }
        }
      }
    } else if (section.name == "rtt_matrix") {
      c.rtt_matrix_ms.clear();
      for (std::size_t i = 0; i < section.entries.size(); ++i) {
        const auto& e = section.entries[i];
        if (e.key != fmt::format("row{}", i)) {
          throw ParseError(e.line, e.key, fmt::format("expected row{}", i));
        }
        c.rtt_matrix_ms.push_back(kv::as_double_list(e));
      }
    } else {
      throw ParseError(section.line, section.name, "unknown section (expected [cluster] or [rtt_matrix])");
    }
  }
  c.validate();
  return c;
}

std::string serialize_cluster_profile(const ClusterConfig& c) {
  std::string out = "schema_version = 1\n\n[cluster]\n";
  out += fmt::format("node_count = {}\n", c.node_count);
  out += fmt::format("rtt_ms = {}\n", c.rtt_ms);
  out += fmt::format("block_interval_ms = {}\n", c.block_interval_ms);
  out += fmt::format("block_tx_capacity = {}\n", c.block_tx_capacity);
  out += fmt::format("write_exec_us = {}\n", c.write_exec_us);
  out += fmt::format("read_service_us = {}\n", c.read_service_us);
  out += fmt::format("msg_proc_us = {}\n", c.msg_proc_us);
  out += fmt::format("pool_scan_cost_us_per_tx = {}\n", c.pool_scan_cost_us_per_tx);
  out += fmt::format("node_cpu_capacity = {}\n", c.node_cpu_capacity);
  out += fmt::format("node_mem_bytes = {}\n", c.node_mem_bytes);
  out += fmt::format("empty_block_bytes = {}\n", c.empty_block_bytes);
  out += fmt::format("read_mode = {}\n", to_string(c.read_mode));
  out += fmt::format("block_production = {}\n", c.block_production);
  out += fmt::format("window_s = {}\n", c.window_s);
  if (!c.rtt_matrix_ms.empty()) {
    out += "\n[rtt_matrix]\n";
    for (std::size_t i = 0; i < c.rtt_matrix_ms.size(); ++i) {
      out += fmt::format("row{} = {}\n", i, fmt::join(c.rtt_matrix_ms[i], ", "));
    }
  }
  return out;
}

}  // namespace chaincap
