#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace chaincap {

/// Transactions (or events) per second. Always finite and non-negative.
class RatePerSecond {
 public:
  constexpr RatePerSecond() = default;
  /// Throws DomainError for negative or non-finite values.
  explicit RatePerSecond(double value);

  constexpr double value() const noexcept { return value_; }

  friend constexpr auto operator<=>(RatePerSecond, RatePerSecond) = default;

 private:
  double value_ = 0.0;
};

/// Concurrent events per second (eta) together with the number of read
/// (alpha) and write (beta) transactions one event needs.
struct WorkloadMultiplicity {
  RatePerSecond eta;
  std::uint32_t alpha = 0;
  std::uint32_t beta = 0;
};

RatePerSecond lambda_write(const WorkloadMultiplicity& m);
RatePerSecond lambda_read(const WorkloadMultiplicity& m);

enum class ArrivalKind { Poisson, Deterministic };
enum class TxKind { Read, Write };

std::string_view to_string(ArrivalKind kind);
std::string_view to_string(TxKind kind);
ArrivalKind parse_arrival_kind(std::string_view text);
TxKind parse_tx_kind(std::string_view text);

/// Counter-based generator: the k-th output is the SplitMix64 finalizer
/// applied to key + (k+1)*golden_gamma, so any position of the stream can be
/// recomputed from (key, k) alone.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double next_open01();

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  static std::uint64_t mix(std::uint64_t z);
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// One exponential interarrival time (seconds) by inverse transform.
/// Throws DomainError when rate is not a positive finite number.
double sample_interarrival(double rate, CounterRng& rng);

struct ArrivalProcess {
  ArrivalKind kind = ArrivalKind::Poisson;
  RatePerSecond rate;
  std::uint64_t seed = 0;
};

struct TxEvent {
  double timestamp = 0.0;  // seconds since stream start
  TxKind kind = TxKind::Write;
  std::uint32_t payload_bytes = 0;
  std::string scenario_tag;
  std::uint64_t seq = 0;  // tie-breaker, monotone within a stream

  friend bool operator==(const TxEvent&, const TxEvent&) = default;
};

/// Arrivals in [0, horizon]. A zero-rate process yields an empty stream.
std::vector<TxEvent> generate_events(const ArrivalProcess& process, TxKind kind,
                                     double horizon, std::uint32_t payload_bytes,
                                     std::string_view scenario_tag);

/// Stable merge by (timestamp, position); sequence numbers are reassigned.
std::vector<TxEvent> merge_streams(const std::vector<TxEvent>& a,
                                   const std::vector<TxEvent>& b);

}  // namespace chaincap
