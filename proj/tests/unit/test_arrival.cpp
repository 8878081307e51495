#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaincap/arrival.hpp"
#include "chaincap/errors.hpp"

using namespace chaincap;

namespace {

double sample_mean(double rate, std::uint64_t seed, int n) {
  CounterRng rng(seed);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_interarrival(rate, rng);
  return sum / n;
}

}  // namespace

TEST_CASE("RatePerSecond rejects negative and non-finite values") {
  CHECK_THROWS_AS(RatePerSecond(-1.0), DomainError);
  CHECK_THROWS_AS(RatePerSecond(std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(RatePerSecond(std::nan("")), DomainError);
  CHECK(RatePerSecond(0.0).value() == 0.0);
}

TEST_CASE("interarrival sample mean matches 1/lambda") {
  CHECK(sample_mean(1.0, 11, 1'000'000) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(sample_mean(2.0, 12, 1'000'000) - 0.5) <= 0.005);
}

TEST_CASE("first draw equals the inverse-CDF oracle on the same uniform") {
  // Frozen from an independent SplitMix64 + -ln(u)/lambda computation.
  CounterRng rng(42);
  CHECK(sample_interarrival(100.0, rng) == 0.0029899262457387227);
  CHECK(sample_interarrival(100.0, rng) == 0.018331416651510682);
  CHECK(rng.counter() == 2);

  CounterRng a(7), b(7);
  const double u = a.next_open01();
  CHECK(sample_interarrival(100.0, b) == -std::log(u) / 100.0);
}

TEST_CASE("interarrival rejects bad rates with the offending value") {
  CounterRng rng(1);
  CHECK_THROWS_WITH_AS(sample_interarrival(0.0, rng), doctest::Contains("0"), DomainError);
  CHECK_THROWS_WITH_AS(sample_interarrival(-3.5, rng), doctest::Contains("-3.5"), DomainError);
  CHECK_THROWS_AS(sample_interarrival(std::numeric_limits<double>::infinity(), rng), DomainError);
  CHECK(rng.counter() == 0);
}

TEST_CASE("samples are strictly positive") {
  CounterRng rng(3);
  for (int i = 0; i < 100000; ++i) REQUIRE(sample_interarrival(1e6, rng) > 0.0);
}

TEST_CASE("lambda arithmetic reproduces the published case studies") {
  CHECK(lambda_write({RatePerSecond(0.0115), 0, 1}).value() == 0.0115);
  CHECK(lambda_write({RatePerSecond(8333), 5, 1}).value() == 8333.0);
  CHECK(lambda_read({RatePerSecond(8333), 5, 1}).value() == 41665.0);
  CHECK(lambda_write({RatePerSecond(0), 0, 7}).value() == 0.0);
  CHECK(lambda_read({RatePerSecond(5), 0, 1}).value() == 0.0);
  CHECK(lambda_read({RatePerSecond(1000), 3, 0}).value() == 3000.0);
}

TEST_CASE("lambda is linear in eta") {
  CounterRng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const double eta = rng.next_open01() * 1e4;
    const double c = 1.0 + std::floor(rng.next_open01() * 50.0) / 7.0;
    const auto beta = static_cast<std::uint32_t>(1 + rng.next_u64() % 9);
    const double scaled = lambda_write({RatePerSecond(c * eta), 0, beta}).value();
    const double expected = c * lambda_write({RatePerSecond(eta), 0, beta}).value();
    REQUIRE(std::abs(scaled - expected) <= 4 * std::numeric_limits<double>::epsilon() * expected);
    const double rscaled = lambda_read({RatePerSecond(c * eta), beta, 0}).value();
    const double rexpected = c * lambda_read({RatePerSecond(eta), beta, 0}).value();
    REQUIRE(std::abs(rscaled - rexpected) <= 4 * std::numeric_limits<double>::epsilon() * rexpected);
  }
}

TEST_CASE("Poisson event count stays inside the 10-sigma band") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto ev = generate_events({ArrivalKind::Poisson, RatePerSecond(100), seed},
                                    TxKind::Write, 10.0, 256, "t");
    REQUIRE(ev.size() >= 700);
    REQUIRE(ev.size() <= 1300);
  }
}

TEST_CASE("deterministic stream has exact spacing") {
  const auto ev = generate_events({ArrivalKind::Deterministic, RatePerSecond(10), 0},
                                  TxKind::Read, 1.0, 0, "det");
  REQUIRE(ev.size() == 10);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    CHECK(ev[i].timestamp == doctest::Approx(0.1 * static_cast<double>(i + 1)));
    CHECK(ev[i].seq == i);
    CHECK(ev[i].kind == TxKind::Read);
  }
}

TEST_CASE("stream is empty when the first arrival falls past the horizon") {
  CounterRng probe(5);
  const double first = sample_interarrival(1.0, probe);
  const auto ev = generate_events({ArrivalKind::Poisson, RatePerSecond(1.0), 5}, TxKind::Write,
                                  first * 0.5, 0, "x");
  CHECK(ev.empty());
  const auto det = generate_events({ArrivalKind::Deterministic, RatePerSecond(1.0), 0},
                                   TxKind::Write, 0.5, 0, "x");
  CHECK(det.empty());
  CHECK(generate_events({ArrivalKind::Poisson, RatePerSecond(0.0), 1}, TxKind::Write, 10, 0, "x")
            .empty());
}

TEST_CASE("generate_events rejects a non-finite horizon") {
  const ArrivalProcess p{ArrivalKind::Poisson, RatePerSecond(1), 1};
  CHECK_THROWS_AS(generate_events(p, TxKind::Write, std::numeric_limits<double>::infinity(), 0, "x"),
                  DomainError);
  CHECK_THROWS_AS(generate_events(p, TxKind::Write, std::nan(""), 0, "x"), DomainError);
}

TEST_CASE("identical process parameters give identical streams") {
  const ArrivalProcess p{ArrivalKind::Poisson, RatePerSecond(250), 1234};
  const auto a = generate_events(p, TxKind::Write, 20.0, 64, "s");
  const auto b = generate_events(p, TxKind::Write, 20.0, 64, "s");
  CHECK(a == b);
  auto q = p;
  q.seed = 1235;
  CHECK(a != generate_events(q, TxKind::Write, 20.0, 64, "s"));
}

TEST_CASE("timestamps are non-decreasing and bounded by the horizon") {
  const auto ev = generate_events({ArrivalKind::Poisson, RatePerSecond(5000), 8}, TxKind::Write,
                                  3.0, 0, "s");
  CHECK(std::is_sorted(ev.begin(), ev.end(),
                       [](const TxEvent& a, const TxEvent& b) { return a.timestamp < b.timestamp; }));
  CHECK(ev.back().timestamp <= 3.0);
}

TEST_CASE("memorylessness: P(T > a+b | T > a) matches P(T > b)") {
  const double rate = 50.0;
  const double a = 0.5 / rate, b = 0.5 / rate;
  CounterRng rng(2024);
  int beyond_a = 0, beyond_ab = 0, beyond_b = 0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const double t = sample_interarrival(rate, rng);
    if (t > a) ++beyond_a;
    if (t > a + b) ++beyond_ab;
    if (t > b) ++beyond_b;
  }
  const double conditional = static_cast<double>(beyond_ab) / beyond_a;
  const double marginal = static_cast<double>(beyond_b) / n;
  CHECK(std::abs(conditional - marginal) <= 0.01);
}

TEST_CASE("merge_streams interleaves by timestamp and renumbers") {
  const auto r = generate_events({ArrivalKind::Deterministic, RatePerSecond(3), 0}, TxKind::Read,
                                 1.0, 0, "r");
  const auto w = generate_events({ArrivalKind::Deterministic, RatePerSecond(2), 0}, TxKind::Write,
                                 1.0, 0, "w");
  const auto m = merge_streams(r, w);
  REQUIRE(m.size() == 5);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(m[i].seq == i);
  CHECK(std::is_sorted(m.begin(), m.end(),
                       [](const TxEvent& a, const TxEvent& b) { return a.timestamp < b.timestamp; }));
  // Tie at t = 1.0: the first stream's event comes first.
  CHECK(m[3].kind == TxKind::Read);
  CHECK(m[4].kind == TxKind::Write);
}

TEST_CASE("distinct streams from one seed are decorrelated") {
  CounterRng a(77, 1), b(77, 2);
  int same = 0;
  for (int i = 0; i < 1000; ++i) same += a.next_u64() == b.next_u64();
  CHECK(same == 0);
}
