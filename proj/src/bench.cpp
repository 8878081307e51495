#include "chaincap/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "chaincap/errors.hpp"

namespace chaincap {

bool detect_steady_state(double lambda_offered, double mean_tps, double tolerance) {
  if (!(lambda_offered > 0.0) || !std::isfinite(lambda_offered)) {
    throw DomainError(fmt::format("lambda_offered must be > 0, got {}", lambda_offered));
  }
  if (!(tolerance > 0.0 && tolerance <= 0.1)) {
    throw DomainError(fmt::format("steady tolerance must be in (0, 0.1], got {}", tolerance));
  }
  return std::abs(mean_tps - lambda_offered) <= tolerance * lambda_offered;
}

TrialSummary summarize(const MetricsTimeline& timeline, TxKind kind, double lambda_offered,
                       double steady_tolerance, double warmup_fraction) {
  TrialSummary s;
  s.lambda_offered = lambda_offered;
  const std::size_t n = timeline.windows();
  if (n == 0) return s;
  auto first = static_cast<std::size_t>(std::ceil(warmup_fraction * static_cast<double>(n) - 1e-9));
  first = std::min(first, n - 1);

  const auto& tps = kind == TxKind::Write ? timeline.committed_write_tps : timeline.served_read_tps;
  const auto& lat =
      kind == TxKind::Write ? timeline.mean_write_latency_ms : timeline.mean_read_latency_ms;

  double tps_sum = 0.0, lat_weighted = 0.0, cpu_sum = 0.0, depth_sum = 0.0;
  for (std::size_t w = first; w < n; ++w) {
    tps_sum += tps[w];
    lat_weighted += lat[w] * tps[w];
    cpu_sum += std::accumulate(timeline.cpu_utilization[w].begin(),
                               timeline.cpu_utilization[w].end(), 0.0) /
               static_cast<double>(timeline.cpu_utilization[w].size());
    depth_sum += static_cast<double>(timeline.pool_depth[w]);
  }
  const auto measured = static_cast<double>(n - first);
  s.mean_tps = tps_sum / measured;
  s.mean_latency_ms = tps_sum > 0.0 ? lat_weighted / tps_sum : 0.0;
  s.mean_cpu = cpu_sum / measured;
  s.mean_pool_depth = depth_sum / measured;
  s.steady = lambda_offered > 0.0
                 ? detect_steady_state(lambda_offered, s.mean_tps, steady_tolerance)
                 : s.mean_tps == 0.0;
  return s;
}

TrialSummary run_trial(const ClusterConfig& cluster, TxKind kind, ArrivalKind arrival,
                       double lambda, const ProbeSettings& settings) {
  const ArrivalProcess process{arrival, RatePerSecond(lambda), settings.seed};
  const auto events =
      generate_events(process, kind, settings.duration_s, settings.payload_bytes, "probe");
  const auto result = run(cluster, events, settings.duration_s, settings.seed);
  auto s = summarize(result.timeline, kind, lambda, settings.steady_tolerance,
                     settings.warmup_fraction);
  s.seed = settings.seed;
  return s;
}

RatePerSecond find_max_lambda(const ClusterConfig& cluster, TxKind kind, ArrivalKind arrival,
                              const SearchOptions& options) {
  if (!(options.tolerance > 0.0 && options.tolerance <= 0.05)) {
    throw DomainError(fmt::format("search tolerance must be in (0, 0.05], got {}", options.tolerance));
  }
  cluster.validate();
  auto steady = [&](double rate) {
    return run_trial(cluster, kind, arrival, rate, options.probe).steady;
  };

  double lo = 0.0;
  double hi = 0.0;
  double rate = options.initial_rate;
  if (steady(rate)) {
    lo = rate;
    for (;;) {
      rate *= 2.0;
      if (rate > options.max_rate) {
        throw CalibrationError(fmt::format("still steady at {} tps; no saturation below max_rate",
                                           lo));
      }
      if (!steady(rate)) {
        hi = rate;
        break;
      }
      lo = rate;
    }
  } else {
    hi = rate;
    for (;;) {
      rate /= 2.0;
      if (rate < options.min_rate) {
        throw CalibrationError(fmt::format(
            "no steady point found down to the smallest probe ({} tps)", options.min_rate));
      }
      if (steady(rate)) {
        lo = rate;
        break;
      }
      hi = rate;
    }
  }

  while (hi > lo * (1.0 + options.tolerance)) {
    const double mid = 0.5 * (lo + hi);
    if (steady(mid)) lo = mid;
    else hi = mid;
  }
  // The predicate is not guaranteed monotone under random arrivals; walk up
  // until the next step out is genuinely unsteady.
  for (int guard = 0; guard < 1000 && steady(lo * (1.0 + options.tolerance)); ++guard) {
    lo *= 1.0 + options.tolerance;
  }
  return RatePerSecond(lo);
}

CapacityProfile find_capacity(const ClusterConfig& cluster, ArrivalKind arrival,
                              const SearchOptions& options) {
  CapacityProfile p;
  p.node_count = cluster.node_count;
  p.max_lambda_write = find_max_lambda(cluster, TxKind::Write, arrival, options);
  p.max_lambda_read = find_max_lambda(cluster, TxKind::Read, arrival, options);
  p.search_tolerance = options.tolerance;
  p.source = "simulated";
  return p;
}

std::vector<CapacityProfile> sweep_nodes(const ClusterConfig& base,
                                         const std::vector<std::uint32_t>& node_counts,
                                         TxKind kind, ArrivalKind arrival,
                                         const SearchOptions& options) {
  for (const auto n : node_counts) {
    if (n < 4) throw ConfigError(fmt::format("node_count: BFT needs at least 4 nodes (got {})", n));
  }
  std::vector<CapacityProfile> out;
  out.reserve(node_counts.size());
  for (const auto n : node_counts) {
    ClusterConfig cluster = base;
    cluster.node_count = n;
    cluster.rtt_matrix_ms.clear();
    CapacityProfile p;
    p.node_count = n;
    p.search_tolerance = options.tolerance;
    p.source = "simulated";
    const auto rate = find_max_lambda(cluster, kind, arrival, options);
    if (kind == TxKind::Write) p.max_lambda_write = rate;
    else p.max_lambda_read = rate;
    out.push_back(std::move(p));
  }
  return out;
}

void CampaignSpec::validate() const {
  cluster.validate();
  if (trials < 1) throw ConfigError("trials: must be >= 1");
  if (!(duration_s >= 10.0 * cluster.window_s)) {
    throw ConfigError(fmt::format("duration_s: must be >= 10 windows ({} s), got {}",
                                  10.0 * cluster.window_s, duration_s));
  }
  for (const double r : rates) {
    if (!std::isfinite(r) || r < 0.0) throw ConfigError(fmt::format("rates: invalid rate {}", r));
  }
}

std::pair<double, double> mean_and_sd(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

CampaignResult run_campaign(const CampaignSpec& spec, unsigned threads) {
  spec.validate();
  CampaignResult result;
  if (spec.rates.empty()) {
    result.warnings.emplace_back("campaign has no rates; nothing was simulated");
    return result;
  }

  const std::size_t total = spec.rates.size() * spec.trials;
  std::vector<TrialSummary> summaries(total);
  std::vector<std::string> errors(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t r = k / spec.trials;
      const auto trial = static_cast<std::uint32_t>(k % spec.trials);
      ProbeSettings settings{spec.duration_s, spec.base_seed + trial, spec.steady_tolerance,
                             spec.warmup_fraction, spec.payload_bytes};
      try {
        summaries[k] = run_trial(spec.cluster, spec.kind, spec.arrival, spec.rates[r], settings);
        summaries[k].trial = trial;
      } catch (const std::exception& e) {
        errors[k] = e.what();
        if (errors[k].empty()) errors[k] = "unknown error";
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t k = 0; k < total; ++k) {
    if (!errors[k].empty()) {
      throw CampaignError(fmt::format("rate {} trial {}: {}", spec.rates[k / spec.trials],
                                      k % spec.trials, errors[k]));
    }
  }

  result.trials = std::move(summaries);
  for (std::size_t r = 0; r < spec.rates.size(); ++r) {
    std::vector<double> tps, lat, cpu;
    RateAggregate agg;
    agg.lambda_offered = spec.rates[r];
    agg.trials = spec.trials;
    for (std::uint32_t i = 0; i < spec.trials; ++i) {
      const auto& t = result.trials[r * spec.trials + i];
      tps.push_back(t.mean_tps);
      lat.push_back(t.mean_latency_ms);
      cpu.push_back(t.mean_cpu);
      agg.steady_trials += t.steady ? 1 : 0;
    }
    std::tie(agg.mean_tps, agg.sd_tps) = mean_and_sd(tps);
    std::tie(agg.mean_latency_ms, agg.sd_latency_ms) = mean_and_sd(lat);
    std::tie(agg.mean_cpu, agg.sd_cpu) = mean_and_sd(cpu);
    result.aggregates.push_back(agg);
  }
  return result;
}

}  // namespace chaincap
