#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "oracle_beam.hpp"
#include "shellheat/beam.hpp"
#include "shellheat/rng.hpp"

using namespace shellheat;

namespace {

BeamSpec five_equal() { return BeamSpec::uniform(5, 8.0, 1.2e-5, 2.0); }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

TEST_CASE("element slope/deflection: unloaded and rigid-rotation cases") {
  const BeamSpec spec = five_equal();
  for (double x : {0.0, 0.4, 1.6}) {
    auto sd = element_slope_deflection(0.0, 0.0, 0.0, x, 1.6, spec);
    CHECK(sd.theta == 0.0);
    CHECK(sd.y == 0.0);
  }
  // dT = 0 keeps the element a straight line through (y0, theta0).
  auto sd = element_slope_deflection(0.01, 0.002, 0.0, 1.0, 1.6, spec);
  CHECK(sd.theta == Approx(0.01));
  CHECK(sd.y == Approx(0.002 + 0.01 * 1.0));
}

TEST_CASE("element slope/deflection: position outside element is rejected") {
  const BeamSpec spec = five_equal();
  CHECK_THROWS_AS(element_slope_deflection(0, 0, 10.0, -0.1, 1.6, spec), param_error);
  CHECK_THROWS_AS(element_slope_deflection(0, 0, 10.0, 1.7, 1.6, spec), param_error);
}

TEST_CASE("single element with far support: closed form and oracle agree") {
  BeamSpec spec = BeamSpec::uniform(1, 8.0, 1.2e-5, 2.0);
  const double d_t = 25.0;
  const double L = 8.0;
  const double g_over_d = spec.expansion_coeff / spec.depth;

  const std::vector<double> dts{d_t};
  auto prof = solve_beam(dts, spec);

  const double theta0_expected = -0.5 * g_over_d * d_t * L;
  const double mid_expected = -g_over_d * d_t * L * L / 8.0;
  CHECK(prof.theta[0] == Approx(theta0_expected).epsilon(1e-12));
  CHECK(prof.y_mid == Approx(mid_expected).epsilon(1e-12));

  CHECK(oracle::deflection_at(dts, spec, 0.5 * L) == Approx(mid_expected).epsilon(1e-9));
}

TEST_CASE("solve_beam: zero load gives identically zero profile") {
  const std::vector<double> dts(5, 0.0);
  auto prof = solve_beam(dts, five_equal());
  for (double y : prof.y) CHECK(y == 0.0);
  for (double th : prof.theta) CHECK(th == 0.0);
  CHECK(prof.y_mid == 0.0);
}

TEST_CASE("solve_beam: uniform differential collapses to the one-element form") {
  const BeamSpec spec = five_equal();
  const double d_t = 40.0;
  const std::vector<double> dts(5, d_t);
  auto prof = solve_beam(dts, spec);
  const double L = spec.total_length();
  const double mid_expected = -spec.expansion_coeff / spec.depth * d_t * L * L / 8.0;
  CHECK(prof.y_mid == Approx(mid_expected).epsilon(1e-12));
}

TEST_CASE("solve_beam: matches quadrature+shooting oracle on random instances") {
  SplitMix64 rng(20240811ULL);
  for (int trial = 0; trial < 100; ++trial) {
    BeamSpec spec;
    spec.expansion_coeff = 1.2e-5;
    spec.depth = rng.uniform(1.0, 3.0);
    double total = 0.0;
    for (int j = 0; j < 5; ++j) {
      spec.lengths.push_back(rng.uniform(0.8, 2.4));
      total += spec.lengths.back();
    }
    std::vector<double> dts;
    for (int j = 0; j < 5; ++j) dts.push_back(rng.uniform(-80.0, 80.0));

    auto prof = solve_beam(dts, spec);

    const double scale = std::max(max_abs(prof.y), 1e-12);
    double xpos = 0.0;
    for (int j = 0; j <= 5; ++j) {
      CHECK(std::fabs(prof.y[static_cast<std::size_t>(j)] -
                      oracle::deflection_at(dts, spec, xpos)) <= 1e-9 * scale);
      if (j < 5) xpos += spec.lengths[static_cast<std::size_t>(j)];
    }
    CHECK(std::fabs(prof.y_mid - oracle::deflection_at(dts, spec, 0.5 * total)) <= 1e-9 * scale);
  }
}

TEST_CASE("solve_beam: linearity in the differential vector") {
  const BeamSpec spec = five_equal();
  SplitMix64 rng(77ULL);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> d1, d2, dc;
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);
    for (int j = 0; j < 5; ++j) {
      d1.push_back(rng.uniform(-50.0, 50.0));
      d2.push_back(rng.uniform(-50.0, 50.0));
      dc.push_back(a * d1.back() + b * d2.back());
    }
    auto p1 = solve_beam(d1, spec);
    auto p2 = solve_beam(d2, spec);
    auto pc = solve_beam(dc, spec);
    const double scale = std::max({max_abs(pc.y), max_abs(p1.y), max_abs(p2.y), 1e-12});
    for (int i = 0; i <= 5; ++i) {
      const auto k = static_cast<std::size_t>(i);
      CHECK(std::fabs(pc.y[k] - (a * p1.y[k] + b * p2.y[k])) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("solve_beam: uniform top-hot load is single-signed, negation mirrors it") {
  const BeamSpec spec = five_equal();
  const std::vector<double> dts(5, 30.0);
  auto pos = solve_beam(dts, spec);
  // Zero only at the supports, one sign everywhere inside.
  for (int i = 1; i < 5; ++i) CHECK(pos.y[static_cast<std::size_t>(i)] < 0.0);
  CHECK(pos.y.front() == 0.0);
  CHECK(pos.y.back() == 0.0);

  std::vector<double> neg_in(5, -30.0);
  auto neg = solve_beam(neg_in, spec);
  for (int i = 0; i <= 5; ++i)
    CHECK(neg.y[static_cast<std::size_t>(i)] == Approx(-pos.y[static_cast<std::size_t>(i)]).margin(0.0));
}

TEST_CASE("solve_beam: reversing differentials and lengths mirrors the profile") {
  BeamSpec spec;
  spec.expansion_coeff = 1.2e-5;
  spec.depth = 2.0;
  spec.lengths = {1.0, 1.5, 2.0, 1.2, 2.3};
  const std::vector<double> dts{12.0, -30.0, 44.0, 5.0, -18.0};

  BeamSpec rev = spec;
  std::vector<double> rdts(dts.rbegin(), dts.rend());
  std::vector<double> rlen(spec.lengths.rbegin(), spec.lengths.rend());
  rev.lengths = rlen;

  auto p = solve_beam(dts, spec);
  auto q = solve_beam(rdts, rev);
  const double scale = std::max(max_abs(p.y), 1e-12);
  for (int i = 0; i <= 5; ++i)
    CHECK(std::fabs(p.y[static_cast<std::size_t>(i)] - q.y[static_cast<std::size_t>(5 - i)]) <=
          1e-12 * scale);
}

TEST_CASE("solve_beam: slope and deflection continuous at interior joints") {
  BeamSpec spec;
  spec.expansion_coeff = 1.2e-5;
  spec.depth = 1.7;
  spec.lengths = {1.1, 2.2, 0.9, 1.8, 2.0};
  const std::vector<double> dts{25.0, -60.0, 10.0, 70.0, -15.0};
  auto prof = solve_beam(dts, spec);
  const double scale = std::max(max_abs(prof.y), 1e-12);
  // Re-evaluate each joint from the left element's closed form.
  for (int j = 0; j < 5; ++j) {
    const auto k = static_cast<std::size_t>(j);
    auto sd = element_slope_deflection(prof.theta[k], prof.y[k], dts[k], spec.lengths[k],
                                       spec.lengths[k], spec);
    CHECK(std::fabs(sd.y - prof.y[k + 1]) <= 1e-9 * scale);
    CHECK(std::fabs(sd.theta - prof.theta[k + 1]) <= 1e-9 * std::max(max_abs(prof.theta), 1e-12));
  }
}

TEST_CASE("zone_to_element_dt: constant and ramp fields") {
  std::vector<double> upper(10, 400.0), lower(10, 400.0);
  auto z = zone_to_element_dt(upper, lower);
  for (double v : z) CHECK(v == 0.0);

  for (int i = 0; i < 10; ++i) lower[static_cast<std::size_t>(i)] = 390.0;
  z = zone_to_element_dt(upper, lower);
  for (double v : z) CHECK(v == Approx(10.0));

  // upper - lower = 2,4,...,20 pairs to means 3,7,11,15,19.
  for (int i = 0; i < 10; ++i) {
    upper[static_cast<std::size_t>(i)] = 400.0 + 2.0 * (i + 1);
    lower[static_cast<std::size_t>(i)] = 400.0;
  }
  z = zone_to_element_dt(upper, lower);
  const std::vector<double> expected{3.0, 7.0, 11.0, 15.0, 19.0};
  for (int j = 0; j < 5; ++j)
    CHECK(z[static_cast<std::size_t>(j)] == Approx(expected[static_cast<std::size_t>(j)]));
}

TEST_CASE("zone_to_element_dt: shape mismatch is rejected") {
  std::vector<double> ten(10, 0.0), nine(9, 0.0);
  CHECK_THROWS_AS(zone_to_element_dt(nine, ten), param_error);
  CHECK_THROWS_AS(zone_to_element_dt(ten, nine), param_error);
}
