#pragma once

// CSV / JSON renderings of simulation and assessment results, plus the run
// manifest written next to every CLI output set. All CSVs are UTF-8,
// comma-separated, '.' decimals, with a mandatory header row.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "chaincap/assess.hpp"
#include "chaincap/bench.hpp"
#include "chaincap/chainsim.hpp"

namespace chaincap {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kOutputSchemaVersion = 1;

std::string timeline_csv(const MetricsTimeline& timeline);
std::string trials_csv(const std::vector<TrialSummary>& trials);
std::string capacity_csv(const std::vector<CapacityProfile>& profiles);
std::string verdict_summary_csv(const std::vector<Verdict>& verdicts);
/// Plot data: arrival_rate, tps, tps_sd, cpu_utilization, avg_latency_ms.
std::string figure_csv(const std::vector<RateAggregate>& aggregates);

nlohmann::json campaign_json(const CampaignSpec& spec, const CampaignResult& result);

std::string sha256_hex(std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

struct FileDigest {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::vector<std::string> command_line;
  std::vector<FileDigest> inputs;
  std::vector<std::uint64_t> seeds;
  std::string tool_version{kToolVersion};
  std::string started_at;
  std::string ended_at;
  std::vector<FileDigest> outputs;

  nlohmann::json to_json() const;
};

inline constexpr std::string_view kManifestName = "manifest.json";

/// Output directory that remembers what was written so the manifest can list it.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  void write(const std::string& name, std::string_view content);
  void write_json(const std::string& name, const nlohmann::json& doc);
  /// Fills manifest.outputs and writes manifest.json.
  void finish(RunManifest manifest);

 private:
  std::filesystem::path root_;
  std::vector<FileDigest> written_;
};

std::string utc_now_iso8601();

}  // namespace chaincap
