#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hestonld/legendre.hpp"
#include "test_oracles.hpp"

using namespace hestonld;

namespace {
const HestonParams kReference{2.0, 0.1, 1.0, 0.0, 0.1, 0.0};
// Frozen with a 30-digit bisection on the closed form.
constexpr double kRateAtMinusHalf = 0.46018016555872588;
constexpr double kRateAtHalf = 0.96018016555872588;
constexpr double kRateAtZero = 0.012310562561766055;
}  // namespace

TEST_CASE("conjugate at the documented points") {
  const CgfSpec spec = CgfSpec::base(kReference);

  const RatePoint at_min = conjugate(spec, -0.05);
  CHECK(at_min.value == Catch::Approx(0.0).margin(1e-14));
  CHECK(at_min.maximizer == Catch::Approx(0.0).margin(1e-10));
  CHECK(at_min.attained);

  // cgf(1) = 0 forces rate(cgf'(1)) = cgf'(1)
  const RatePoint at_share = conjugate(spec, 0.05);
  CHECK(at_share.value == Catch::Approx(0.05).epsilon(1e-12));
  CHECK(at_share.maximizer == Catch::Approx(1.0).margin(1e-10));

  CHECK(conjugate(spec, -0.5).value == Catch::Approx(kRateAtMinusHalf).epsilon(1e-12));
  CHECK(conjugate(spec, 0.5).value == Catch::Approx(kRateAtHalf).epsilon(1e-12));
  CHECK(conjugate(spec, 0.0).value == Catch::Approx(kRateAtZero).epsilon(1e-12));
}

TEST_CASE("conjugate agrees with the grid-supremum oracle") {
  const CgfSpec spec = CgfSpec::base(kReference);
  for (int i = 0; i <= 20; ++i) {
    const double x = -1.0 + 0.1 * i;
    const double want = oracle::grid_conjugate(kReference, x, 200000);
    CHECK(conjugate(spec, x).value == Catch::Approx(want).margin(2e-6));
  }
}

TEST_CASE("conjugate stationarity holds at the reported maximizer") {
  std::mt19937_64 gen(7201);
  std::uniform_real_distribution<double> xs(-2.0, 2.0);
  const CgfSpec spec = CgfSpec::base(kReference);
  for (int i = 0; i < 100; ++i) {
    const double x = xs(gen);
    const RatePoint rp = conjugate(spec, x);
    REQUIRE(rp.attained);
    CHECK(rp.value >= 0.0);
    CHECK(std::fabs(cgf_derivative(spec, rp.maximizer) - x) <=
          1e-8 * std::max(1.0, std::fabs(x)));
  }
}

TEST_CASE("fenchel-young inequality") {
  std::mt19937_64 gen(7202);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const CgfSpec spec = CgfSpec::base(kReference);
  const auto [um, up] = domain_endpoints(kReference);
  for (int i = 0; i < 1000; ++i) {
    const double u = um + (up - um) * u01(gen);
    const double x = -1.0 + 2.0 * u01(gen);
    CHECK(u * x <= cgf_eval(spec, u).value() + conjugate(spec, x).value + 1e-9);
  }
}

TEST_CASE("biconjugation recovers the cgf on interior points") {
  const CgfSpec spec = CgfSpec::base(kReference);
  const auto [um, up] = domain_endpoints(kReference);
  // Precompute the rate on an x grid wide enough to cover the slopes of the
  // probe points.
  double max_slope = 0.0;
  std::vector<double> probes;
  for (int k = 1; k <= 10; ++k) {
    const double u = um + (up - um) * k / 11.0;
    probes.push_back(u);
    max_slope = std::max(max_slope, std::fabs(cgf_derivative(spec, u)));
  }
  const double span = 1.1 * max_slope + 0.1;
  const int n = 400000;
  std::vector<double> rate(n + 1);
  std::vector<double> grid(n + 1);
  for (int i = 0; i <= n; ++i) {
    grid[i] = -span + 2.0 * span * i / n;
    rate[i] = conjugate(spec, grid[i]).value;
  }
  for (double u : probes) {
    double best = -1e300;
    for (int i = 0; i <= n; ++i) best = std::max(best, u * grid[i] - rate[i]);
    CHECK(best == Catch::Approx(cgf_eval(spec, u).value()).margin(1e-5));
  }
}

TEST_CASE("rate function is strictly convex") {
  std::mt19937_64 gen(7203);
  std::uniform_real_distribution<double> xs(-1.0, 1.0);
  const CgfSpec spec = CgfSpec::base(kReference);
  for (int i = 0; i < 200; ++i) {
    double a = xs(gen), b = xs(gen);
    if (std::fabs(a - b) < 0.01) continue;
    const double mid = 0.5 * (a + b);
    const double lhs = conjugate(spec, mid).value;
    const double rhs = 0.5 * conjugate(spec, a).value + 0.5 * conjugate(spec, b).value;
    CHECK(lhs < rhs);
  }
}

TEST_CASE("tilted rate equals the base rate minus x") {
  for (int i = 0; i <= 100; ++i) {
    const double x = -1.0 + 0.02 * i;
    const double lhs = tilted_rate(kReference, x);
    const double rhs = conjugate(CgfSpec::base(kReference), x).value - x;
    CHECK(lhs == Catch::Approx(rhs).margin(1e-9));
  }
  CHECK(tilted_rate(kReference, 0.05) == Catch::Approx(0.0).margin(1e-12));
  CHECK(tilted_rate(kReference, -0.05) == Catch::Approx(0.05).epsilon(1e-10));
  CHECK(tilted_rate(kReference, 0.5) ==
        Catch::Approx(conjugate(CgfSpec::base(kReference), 0.5).value - 0.5).margin(1e-12));
}

TEST_CASE("non-steep conjugate beyond the cut is affine and not attained") {
  const CgfSpec cut = perturb(CgfSpec::base(kReference), 1.0, TruncationSide::Upper);
  // derivative limit at the cut is cgf'(1) = 0.05
  const RatePoint beyond = conjugate(cut, 0.3);
  CHECK_FALSE(beyond.attained);
  CHECK(beyond.maximizer == 1.0);
  // value = 1 * x - cgf(1) = x
  CHECK(beyond.value == Catch::Approx(0.3).epsilon(1e-12));

  const RatePoint at_limit = conjugate(cut, 0.05);
  CHECK_FALSE(at_limit.attained);  // deterministic tie-break at the derivative limit
  CHECK(at_limit.maximizer == 1.0);
  CHECK(at_limit.value == Catch::Approx(0.05).epsilon(1e-12));

  const RatePoint inside = conjugate(cut, 0.04);
  CHECK(inside.attained);
  CHECK(inside.maximizer < 1.0);
  CHECK(inside.value ==
        Catch::Approx(conjugate(CgfSpec::base(kReference), 0.04).value).margin(1e-12));

  // mirrored lower cut
  const CgfSpec low = perturb(CgfSpec::base(kReference), 1.0, TruncationSide::Lower);
  const double limit_lo = cgf_derivative(CgfSpec::base(kReference), -1.0);
  const RatePoint below = conjugate(low, limit_lo - 0.2);
  CHECK_FALSE(below.attained);
  CHECK(below.maximizer == -1.0);
}

TEST_CASE("truncation leaves the conjugate unchanged when it does not bite") {
  const auto [um, up] = domain_endpoints(kReference);
  const CgfSpec base_spec = CgfSpec::base(kReference);
  const CgfSpec wide = perturb(base_spec, up + 0.5, TruncationSide::Upper);
  for (int i = 0; i <= 20; ++i) {
    const double x = -1.0 + 0.1 * i;
    CHECK(conjugate(wide, x).value == Catch::Approx(conjugate(base_spec, x).value).margin(1e-12));
  }
}

TEST_CASE("left of the minimum every upper truncation gives the base conjugate") {
  // The quantitative fact behind the sandwich proof: for x <= cgf'(0) the
  // maximizer is <= 0, inside every upper truncation window.
  const CgfSpec base_spec = CgfSpec::base(kReference);
  for (double lambda : {0.2, 0.7, 1.0, 2.0, 5.0}) {
    const CgfSpec cut = perturb(base_spec, lambda, TruncationSide::Upper);
    for (double x : {-0.05, -0.1, -0.3, -0.7, -1.0}) {
      const RatePoint a = conjugate(cut, x);
      const RatePoint b = conjugate(base_spec, x);
      CHECK(a.value == Catch::Approx(b.value).margin(1e-12));
      CHECK(a.attained);
      CHECK(a.maximizer <= 1e-10);
    }
  }
}

TEST_CASE("rate infimum over intervals uses convexity") {
  const CgfSpec spec = CgfSpec::base(kReference);
  const double inf = std::numeric_limits<double>::infinity();

  // contains the minimizer -theta/2
  CHECK(rate_infimum(spec, Interval::make(-inf, -0.05, true, false)) == 0.0);
  // left tail: infimum at the right endpoint
  CHECK(rate_infimum(spec, Interval::make(-inf, -0.5, true, false)) ==
        Catch::Approx(kRateAtMinusHalf).epsilon(1e-12));
  // interval right of the minimizer: infimum at the left endpoint
  CHECK(rate_infimum(spec, Interval::closed(0.0, 1.0)) ==
        Catch::Approx(kRateAtZero).epsilon(1e-12));
  // open endpoint gives the same infimum by continuity
  CHECK(rate_infimum(spec, Interval::make(0.0, 1.0, true, true)) ==
        Catch::Approx(kRateAtZero).epsilon(1e-12));
  // degenerate singleton away from the minimizer
  CHECK(rate_infimum(spec, Interval::closed(-0.5, -0.5)) ==
        Catch::Approx(kRateAtMinusHalf).epsilon(1e-12));
  CHECK_THROWS_AS(rate_infimum(spec, Interval::make(1.0, 0.0, false, false)), EmptyInterval);
}

TEST_CASE("conjugate handles random parameter sets against the oracle") {
  std::mt19937_64 gen(7204);
  std::uniform_real_distribution<double> xs(-0.8, 0.8);
  for (int i = 0; i < 25; ++i) {
    const HestonParams p = oracle::random_params(gen);
    const CgfSpec spec = CgfSpec::base(p);
    const double x = xs(gen);
    const double want = oracle::grid_conjugate(p, x, 400000);
    CHECK(conjugate(spec, x).value == Catch::Approx(want).margin(1e-5));
  }
}
