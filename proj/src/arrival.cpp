#include "chaincap/arrival.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "chaincap/errors.hpp"

namespace chaincap {

RatePerSecond::RatePerSecond(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw DomainError(fmt::format("rate must be finite and >= 0, got {}", value));
  }
}

RatePerSecond lambda_write(const WorkloadMultiplicity& m) {
  return RatePerSecond(m.eta.value() * static_cast<double>(m.beta));
}

RatePerSecond lambda_read(const WorkloadMultiplicity& m) {
  return RatePerSecond(m.eta.value() * static_cast<double>(m.alpha));
}

std::string_view to_string(ArrivalKind kind) {
  return kind == ArrivalKind::Poisson ? "poisson" : "deterministic";
}

std::string_view to_string(TxKind kind) {
  return kind == TxKind::Read ? "read" : "write";
}

ArrivalKind parse_arrival_kind(std::string_view text) {
  if (text == "poisson") return ArrivalKind::Poisson;
  if (text == "deterministic") return ArrivalKind::Deterministic;
  throw DomainError(fmt::format("unknown arrival kind '{}' (poisson|deterministic)", text));
}

TxKind parse_tx_kind(std::string_view text) {
  if (text == "read") return TxKind::Read;
  if (text == "write") return TxKind::Write;
  throw DomainError(fmt::format("unknown transaction kind '{}' (read|write)", text));
}

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(stream == 0 ? seed : mix(seed ^ mix(stream * kGamma))) {}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix(key_ + counter_ * kGamma);
}

double CounterRng::next_open01() {
  // 53 random bits, centred in their bucket so neither 0 nor 1 is reachable.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double sample_interarrival(double rate, CounterRng& rng) {
  if (!std::isfinite(rate) || rate <= 0.0) {
    throw DomainError(fmt::format("interarrival rate must be finite and > 0, got {}", rate));
  }
  return -std::log(rng.next_open01()) / rate;
}

std::vector<TxEvent> generate_events(const ArrivalProcess& process, TxKind kind,
                                     double horizon, std::uint32_t payload_bytes,
                                     std::string_view scenario_tag) {
  if (!std::isfinite(horizon)) {
    throw DomainError(fmt::format("horizon must be finite, got {}", horizon));
  }
  if (horizon <= 0.0) {
    throw DomainError(fmt::format("horizon must be > 0, got {}", horizon));
  }
  std::vector<TxEvent> out;
  const double rate = process.rate.value();
  if (rate == 0.0) return out;

  const std::string tag(scenario_tag);
  auto push = [&](double t) {
    out.push_back(TxEvent{t, kind, payload_bytes, tag, out.size()});
  };

  if (process.kind == ArrivalKind::Deterministic) {
    out.reserve(static_cast<std::size_t>(rate * horizon) + 1);
    // k / rate rather than a running sum keeps the grid exact.
    for (std::uint64_t k = 1;; ++k) {
      const double t = static_cast<double>(k) / rate;
      if (t > horizon) break;
      push(t);
    }
    return out;
  }

  out.reserve(static_cast<std::size_t>(rate * horizon * 1.05) + 16);
  CounterRng rng(process.seed);
  double t = 0.0;
  for (;;) {
    t += sample_interarrival(rate, rng);
    if (t > horizon) break;
    push(t);
  }
  return out;
}

std::vector<TxEvent> merge_streams(const std::vector<TxEvent>& a,
                                   const std::vector<TxEvent>& b) {
  std::vector<TxEvent> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
             [](const TxEvent& x, const TxEvent& y) { return x.timestamp < y.timestamp; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].seq = i;
  return out;
}

}  // namespace chaincap
