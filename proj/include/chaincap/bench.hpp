#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chaincap/arrival.hpp"
#include "chaincap/chainsim.hpp"

namespace chaincap {

inline constexpr double kDefaultSteadyTolerance = 0.02;
inline constexpr double kDefaultWarmupFraction = 0.1;

/// |mean_tps - lambda_offered| <= tolerance * lambda_offered.
/// Requires lambda_offered > 0 and tolerance in (0, 0.1]; throws DomainError otherwise.
bool detect_steady_state(double lambda_offered, double mean_tps, double tolerance);

/// Settings for one simulated measurement run.
struct ProbeSettings {
  double duration_s = 60.0;
  std::uint64_t seed = 1;
  double steady_tolerance = kDefaultSteadyTolerance;
  double warmup_fraction = kDefaultWarmupFraction;  // leading share of windows ignored
  std::uint32_t payload_bytes = 256;
};

struct TrialSummary {
  double lambda_offered = 0.0;
  double mean_tps = 0.0;
  double mean_latency_ms = 0.0;
  double mean_cpu = 0.0;
  double mean_pool_depth = 0.0;
  bool steady = false;
  std::uint64_t seed = 0;
  std::uint32_t trial = 0;
};

/// Reduces a timeline to the post-warm-up means of the given transaction kind.
TrialSummary summarize(const MetricsTimeline& timeline, TxKind kind, double lambda_offered,
                       double steady_tolerance, double warmup_fraction);

/// Generates arrivals, simulates and summarizes one run.
TrialSummary run_trial(const ClusterConfig& cluster, TxKind kind, ArrivalKind arrival,
                       double lambda, const ProbeSettings& settings);

struct SearchOptions {
  double tolerance = 0.01;       // relative bracket width, in (0, 0.05]
  double initial_rate = 1000.0;  // first probe
  double min_rate = 1.0;         // give up below this
  double max_rate = 1.0e7;       // give up above this
  ProbeSettings probe;
};

/// Largest rate that is steady while rate * (1 + tolerance) is not, by
/// exponential bracketing then bisection. Every probe uses probe.seed.
/// Throws CalibrationError when no bracket can be established.
RatePerSecond find_max_lambda(const ClusterConfig& cluster, TxKind kind, ArrivalKind arrival,
                              const SearchOptions& options);

struct CapacityProfile {
  std::uint32_t node_count = 4;
  // An axis that was not measured stays empty.
  std::optional<RatePerSecond> max_lambda_read;
  std::optional<RatePerSecond> max_lambda_write;
  double search_tolerance = 0.0;
  std::string source;  // "simulated" or a free-form provenance label

  friend bool operator==(const CapacityProfile&, const CapacityProfile&) = default;
};

/// Measures both axes for the cluster as configured.
CapacityProfile find_capacity(const ClusterConfig& cluster, ArrivalKind arrival,
                              const SearchOptions& options);

/// One profile per node count (each must be >= 4), in input order, with only
/// the `kind` axis filled in.
std::vector<CapacityProfile> sweep_nodes(const ClusterConfig& base,
                                         const std::vector<std::uint32_t>& node_counts,
                                         TxKind kind, ArrivalKind arrival,
                                         const SearchOptions& options);

struct CampaignSpec {
  ClusterConfig cluster;
  TxKind kind = TxKind::Write;
  ArrivalKind arrival = ArrivalKind::Poisson;
  std::vector<double> rates;
  std::uint32_t trials = 5;
  double duration_s = 600.0;
  std::uint64_t base_seed = 1;
  double steady_tolerance = kDefaultSteadyTolerance;
  double warmup_fraction = kDefaultWarmupFraction;
  std::uint32_t payload_bytes = 256;

  void validate() const;
};

struct RateAggregate {
  double lambda_offered = 0.0;
  std::uint32_t trials = 0;
  std::uint32_t steady_trials = 0;
  double mean_tps = 0.0;
  double sd_tps = 0.0;
  double mean_latency_ms = 0.0;
  double sd_latency_ms = 0.0;
  double mean_cpu = 0.0;
  double sd_cpu = 0.0;
};

struct CampaignResult {
  std::vector<TrialSummary> trials;  // ordered by (rate, trial)
  std::vector<RateAggregate> aggregates;
  std::vector<std::string> warnings;
};

/// Runs rates x trials simulations, trial i seeded with base_seed + i.
/// `threads` == 0 picks the hardware concurrency. Output order does not
/// depend on scheduling.
CampaignResult run_campaign(const CampaignSpec& spec, unsigned threads = 0);

/// Mean and sample standard deviation (0 for fewer than two values).
std::pair<double, double> mean_and_sd(const std::vector<double>& values);

}  // namespace chaincap
