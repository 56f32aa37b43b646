#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "hestonld/extended_real.hpp"
#include "hestonld/interval.hpp"
#include "hestonld/params.hpp"

using namespace hestonld;

namespace {
const HestonParams kReference{2.0, 0.1, 1.0, 0.0, 0.1, 0.0};
}

TEST_CASE("validate accepts the documented parameter sets") {
  CHECK_NOTHROW(validate(HestonParams{2.0, 0.1, 1.0, 0.0, 0.1, 0.0}));
  CHECK_NOTHROW(validate(HestonParams{2.0, 0.1, 1.0, -0.5, 0.04, 0.0}));
}

TEST_CASE("validate rejects each violated constraint by name") {
  HestonParams p = kReference;
  p.kappa = 0.0;
  CHECK_THROWS_AS(validate(p), NonPositiveParameter);
  p = kReference;
  p.theta = -0.1;
  CHECK_THROWS_AS(validate(p), NonPositiveParameter);
  p = kReference;
  p.sigma = 0.0;
  CHECK_THROWS_AS(validate(p), NonPositiveParameter);
  p = kReference;
  p.y0 = 0.0;
  CHECK_THROWS_AS(validate(p), NonPositiveParameter);
  p = kReference;
  p.rho = 1.0;
  CHECK_THROWS_AS(validate(p), CorrelationOutOfRange);
  p.rho = -1.0;
  CHECK_THROWS_AS(validate(p), CorrelationOutOfRange);
  // rho*sigma - kappa = 1.8 - 1 >= 0
  p = HestonParams{1.0, 0.1, 2.0, 0.9, 0.1, 0.0};
  CHECK_THROWS_AS(validate(p), StandingAssumptionViolated);
}

TEST_CASE("validate is idempotent and preserves the value") {
  const HestonParams v = validate(kReference);
  CHECK(v == kReference);
  CHECK(validate(v) == v);
}

TEST_CASE("extended real rejects NaN and negative infinity") {
  CHECK_THROWS_AS(ExtendedReal(std::nan("")), Error);
  CHECK_THROWS_AS(ExtendedReal(-std::numeric_limits<double>::infinity()), Error);
  const ExtendedReal inf = ExtendedReal::infinity();
  CHECK(inf.is_infinite());
  CHECK((ExtendedReal(1.0) + inf).is_infinite());
  CHECK((ExtendedReal(1.0) + ExtendedReal(2.0)).value() == 3.0);
  CHECK(ExtendedReal(1.0) < inf);
}

TEST_CASE("interval endpoint openness is exact") {
  const Interval half = Interval::make(0.0, 1.0, false, true);
  CHECK(half.contains(0.0));
  CHECK_FALSE(half.contains(1.0));  // open endpoint
  CHECK(Interval::closed(0.0, 1.0).contains(1.0));
  const double inf = std::numeric_limits<double>::infinity();
  const Interval left = Interval::make(-inf, 2.0, true, true);
  CHECK(left.contains(-1e6));
  CHECK_FALSE(left.contains(2.0));
}

TEST_CASE("interval normalizes infinite endpoints to open and flags empties") {
  const double inf = std::numeric_limits<double>::infinity();
  const Interval whole = Interval::make(-inf, inf, false, false);
  CHECK(whole.lo_open);
  CHECK(whole.hi_open);
  CHECK(Interval::make(1.0, 0.0, false, false).empty());
  CHECK(Interval::make(1.0, 1.0, true, false).empty());
  CHECK_FALSE(Interval::closed(1.0, 1.0).empty());
}

TEST_CASE("interval intersection keeps the stricter openness") {
  const Interval a = Interval::closed(0.0, 2.0);
  const Interval b = Interval::make(0.0, 1.0, true, true);
  const Interval c = a.intersect(b);
  CHECK(c.lo == 0.0);
  CHECK(c.lo_open);
  CHECK(c.hi == 1.0);
  CHECK(c.hi_open);
}

TEST_CASE("params load from JSON with unknown keys rejected") {
  const auto good = nlohmann::json::parse(
      R"({"kappa":2,"theta":0.1,"sigma":1,"rho":0,"y0":0.1,"x0":0})");
  const HestonParams p = params_from_json(good);
  CHECK(p == kReference);

  auto unknown = good;
  unknown["drift"] = 0.0;
  CHECK_THROWS_AS(params_from_json(unknown), ConfigError);

  auto missing = good;
  missing.erase("rho");
  CHECK_THROWS_AS(params_from_json(missing), ConfigError);

  auto wrong_type = good;
  wrong_type["kappa"] = "2";
  CHECK_THROWS_AS(params_from_json(wrong_type), ConfigError);

  auto invalid = good;
  invalid["rho"] = 0.9;
  invalid["sigma"] = 3.0;  // standing assumption violated at parse time
  CHECK_THROWS_AS(params_from_json(invalid), StandingAssumptionViolated);
}
