#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hestonld/asymptotics.hpp"
#include "test_oracles.hpp"

using namespace hestonld;

namespace {
const HestonParams kReference{2.0, 0.1, 1.0, 0.0, 0.1, 0.0};
constexpr double kPutAtMinusHalf = -0.46018016555872588;   // -rate(-0.5), frozen
constexpr double kMidAtZero = -0.012310562561766055;       // -rate(0), frozen
}  // namespace

TEST_CASE("growth rates under the two measures") {
  CHECK(pricing_growth_rate(kReference) == -0.05);
  CHECK(share_growth_rate(kReference) == Catch::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("put tail limit inside and outside its range") {
  CHECK(limit_put_tail(kReference, -0.05) == Catch::Approx(0.0).margin(1e-14));
  CHECK(limit_put_tail(kReference, -0.5) == Catch::Approx(kPutAtMinusHalf).epsilon(1e-12));
  CHECK(limit_put_tail(kReference, -0.5) ==
        Catch::Approx(-oracle::grid_conjugate(kReference, -0.5, 200000)).margin(2e-6));
  CHECK_THROWS_AS(limit_put_tail(kReference, 0.0), OutOfTheoremRange);
}

TEST_CASE("call tail limit inside and outside its range") {
  CHECK(limit_call_tail(kReference, 0.05) == Catch::Approx(0.0).margin(1e-14));
  // two solver routes: x - rate(x) and -tilted_rate(x)
  CHECK(limit_call_tail(kReference, 0.5) ==
        Catch::Approx(-tilted_rate(kReference, 0.5)).margin(1e-10));
  CHECK_THROWS_AS(limit_call_tail(kReference, 0.0), OutOfTheoremRange);
}

TEST_CASE("mid tail limit inside and outside its range") {
  CHECK(limit_mid_tail(kReference, -0.05) == Catch::Approx(-0.05).epsilon(1e-12));
  CHECK(limit_mid_tail(kReference, 0.05) == Catch::Approx(0.0).margin(1e-14));
  CHECK(limit_mid_tail(kReference, 0.0) == Catch::Approx(kMidAtZero).epsilon(1e-12));
  CHECK_THROWS_AS(limit_mid_tail(kReference, 0.2), OutOfTheoremRange);
  CHECK_THROWS_AS(limit_mid_tail(kReference, -0.2), OutOfTheoremRange);
}

TEST_CASE("mid and call tails agree where their ranges meet") {
  const double hi = share_growth_rate(kReference);
  CHECK(limit_mid_tail(kReference, hi) ==
        Catch::Approx(limit_call_tail(kReference, hi)).margin(1e-10));
}

TEST_CASE("put and mid tails describe different events at the shared boundary") {
  // Both accept x = -theta/2, but the put limit is -rate = 0 there while the
  // mid limit is x - rate = -theta/2: the events live under different
  // measures, so the two formulas differ by exactly -x at the meeting point.
  const double lo = pricing_growth_rate(kReference);
  const double put_v = limit_put_tail(kReference, lo);
  const double mid_v = limit_mid_tail(kReference, lo);
  CHECK(put_v == Catch::Approx(0.0).margin(1e-14));
  CHECK(mid_v == Catch::Approx(lo).margin(1e-14));
  CHECK(put_v - mid_v == Catch::Approx(-lo).margin(1e-12));
}

TEST_CASE("sign and boundary behaviour of the tail limits") {
  for (double x : {-0.05, -0.1, -0.3, -0.8}) {
    CHECK(limit_put_tail(kReference, x) <= 0.0);
    if (x < -0.05) CHECK(limit_put_tail(kReference, x) < 0.0);
  }
  for (double x : {0.05, 0.1, 0.3, 0.8}) {
    CHECK(limit_call_tail(kReference, x) <= 0.0);
    if (x > 0.05) CHECK(limit_call_tail(kReference, x) < 0.0);
  }
}

TEST_CASE("monotonicity of the tail limits on their ranges") {
  double prev = limit_put_tail(kReference, -1.0);
  for (double x = -0.95; x <= -0.05 + 1e-12; x += 0.05) {
    const double v = limit_put_tail(kReference, x);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  prev = limit_call_tail(kReference, 0.05);
  for (double x = 0.1; x <= 1.0 + 1e-12; x += 0.05) {
    const double v = limit_call_tail(kReference, x);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("limit ranges hold across random parameter sets") {
  std::mt19937_64 gen(7301);
  for (int i = 0; i < 50; ++i) {
    const HestonParams p = oracle::random_params(gen);
    const double lo = pricing_growth_rate(p);
    const double hi = share_growth_rate(p);
    CHECK(lo < 0.0);
    CHECK(hi > 0.0);
    CHECK(limit_put_tail(p, lo) == Catch::Approx(0.0).margin(1e-10));
    CHECK(limit_call_tail(p, hi) == Catch::Approx(0.0).margin(1e-10));
    CHECK(limit_mid_tail(p, hi) == Catch::Approx(limit_call_tail(p, hi)).margin(1e-10));
    CHECK_THROWS_AS(limit_put_tail(p, lo + 0.01), OutOfTheoremRange);
    CHECK_THROWS_AS(limit_call_tail(p, hi - 0.01), OutOfTheoremRange);
  }
}

TEST_CASE("ldp gate admits the valid families and names the failing endpoint") {
  const CgfSpec base_spec = CgfSpec::base(kReference);
  const auto [um, up] = domain_endpoints(kReference);

  CHECK(ldp_gate(base_spec).admissible);
  CHECK(ldp_gate(tilt(base_spec, 1.0)).admissible);
  CHECK(ldp_gate(perturb(base_spec, up + 1.0, TruncationSide::Upper)).admissible);

  const LdpGateResult cut = ldp_gate(perturb(base_spec, 1.0, TruncationSide::Upper));
  CHECK_FALSE(cut.admissible);
  CHECK(cut.failing_endpoint == 1.0);
  CHECK(cut.reason.find("not steep") != std::string::npos);

  // cut exactly on the analytic endpoint: steep but not lower semicontinuous
  const LdpGateResult edge = ldp_gate(perturb(base_spec, up, TruncationSide::Upper));
  CHECK_FALSE(edge.admissible);
  CHECK(edge.reason.find("semicontinuous") != std::string::npos);

  const LdpGateResult share_cut =
      ldp_gate(perturb(tilt(base_spec, 1.0), 1.0, TruncationSide::Lower));
  CHECK_FALSE(share_cut.admissible);
  CHECK(share_cut.failing_endpoint == -1.0);
}
