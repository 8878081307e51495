#include "chaincap/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "chaincap/errors.hpp"

namespace chaincap {

std::string timeline_csv(const MetricsTimeline& tl) {
  std::string out = "window_start_s,committed_write_tps,served_read_tps,mean_write_latency_ms,"
                    "mean_read_latency_ms";
  for (std::uint32_t n = 0; n < tl.node_count; ++n) out += fmt::format(",cpu_utilization_node{}", n);
  out += ",pool_depth,ledger_bytes,mem_utilization\n";
  for (std::size_t w = 0; w < tl.windows(); ++w) {
    out += fmt::format("{},{},{},{},{}", static_cast<double>(w) * tl.window_s,
                       tl.committed_write_tps[w], tl.served_read_tps[w],
                       tl.mean_write_latency_ms[w], tl.mean_read_latency_ms[w]);
    for (const double c : tl.cpu_utilization[w]) out += fmt::format(",{}", c);
    out += fmt::format(",{},{},{}\n", tl.pool_depth[w], tl.ledger_bytes[w], tl.mem_utilization[w]);
  }
  return out;
}

std::string trials_csv(const std::vector<TrialSummary>& trials) {
  std::string out =
      "lambda_offered,trial,seed,mean_tps,mean_latency_ms,mean_cpu,mean_pool_depth,steady\n";
  for (const auto& t : trials) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", t.lambda_offered, t.trial, t.seed, t.mean_tps,
                       t.mean_latency_ms, t.mean_cpu, t.mean_pool_depth, t.steady);
  }
  return out;
}

std::string capacity_csv(const std::vector<CapacityProfile>& profiles) {
  auto axis = [](const std::optional<RatePerSecond>& a) {
    return a ? fmt::format("{}", a->value()) : std::string();
  };
  std::string out = "node_count,max_lambda_read,max_lambda_write,search_tolerance,source\n";
  for (const auto& p : profiles) {
    out += fmt::format("{},{},{},{},{}\n", p.node_count, axis(p.max_lambda_read),
                       axis(p.max_lambda_write), p.search_tolerance, p.source);
  }
  return out;
}

std::string verdict_summary_csv(const std::vector<Verdict>& verdicts) {
  std::string out =
      "scenario,use_case,lambda_read,lambda_write,read_ok,write_ok,headroom_read,headroom_write\n";
  for (const auto& v : verdicts) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", to_string(v.scenario_id), v.use_case,
                       v.lambda_read.value(), v.lambda_write.value(), v.read_ok, v.write_ok,
                       v.headroom_read, v.headroom_write);
  }
  return out;
}

std::string figure_csv(const std::vector<RateAggregate>& aggregates) {
  std::string out = "arrival_rate,tps,tps_sd,cpu_utilization,avg_latency_ms\n";
  for (const auto& a : aggregates) {
    out += fmt::format("{},{},{},{},{}\n", a.lambda_offered, a.mean_tps, a.sd_tps, a.mean_cpu,
                       a.mean_latency_ms);
  }
  return out;
}

nlohmann::json campaign_json(const CampaignSpec& spec, const CampaignResult& result) {
  using nlohmann::json;
  json aggregates = json::array();
  for (const auto& a : result.aggregates) {
    aggregates.push_back({{"lambda_offered", a.lambda_offered},
                          {"trials", a.trials},
                          {"steady_trials", a.steady_trials},
                          {"mean_tps", a.mean_tps},
                          {"sd_tps", a.sd_tps},
                          {"mean_latency_ms", a.mean_latency_ms},
                          {"sd_latency_ms", a.sd_latency_ms},
                          {"mean_cpu", a.mean_cpu},
                          {"sd_cpu", a.sd_cpu}});
  }
  return json{{"schema_version", kOutputSchemaVersion},
              {"kind", std::string(to_string(spec.kind))},
              {"arrival", std::string(to_string(spec.arrival))},
              {"node_count", spec.cluster.node_count},
              {"read_mode", std::string(to_string(spec.cluster.read_mode))},
              {"trials", spec.trials},
              {"duration_s", spec.duration_s},
              {"base_seed", spec.base_seed},
              {"steady_tolerance", spec.steady_tolerance},
              {"warmup_fraction", spec.warmup_fraction},
              {"aggregates", aggregates},
              {"warnings", result.warnings}};
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json RunManifest::to_json() const {
  auto digests = [](const std::vector<FileDigest>& files) {
    auto arr = nlohmann::json::array();
    for (const auto& f : files) arr.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return arr;
  };
  return nlohmann::json{{"schema_version", kOutputSchemaVersion},
                        {"tool_version", tool_version},
                        {"command_line", command_line},
                        {"inputs", digests(inputs)},
                        {"seeds", seeds},
                        {"started_at", started_at},
                        {"ended_at", ended_at},
                        {"outputs", digests(outputs)}};
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw InputError(fmt::format("cannot create output directory '{}': {}", root_.string(), ec.message()));
}

void OutputDir::write(const std::string& name, std::string_view content) {
  const auto path = root_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  written_.push_back(FileDigest{name, sha256_hex(content)});
}

void OutputDir::write_json(const std::string& name, const nlohmann::json& doc) {
  write(name, doc.dump(2) + "\n");
}

void OutputDir::finish(RunManifest manifest) {
  manifest.outputs = written_;
  const auto text = manifest.to_json().dump(2) + "\n";
  std::ofstream out(root_ / std::string(kManifestName), std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write manifest");
  out << text;
}

std::string utc_now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

}  // namespace chaincap
