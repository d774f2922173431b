#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "sod/cost_model.hpp"

using namespace sod;

namespace {

Corridor cta126_corridor() { return {10.9, 30.0, 10.0 / 60.0, {2.25 / 60.0, 0.13}}; }
Corridor cta84_corridor() { return {13.4, 30.0, 10.0 / 60.0, {6.75 / 60.0, 0.53}}; }
CostParams base_costs() { return {16.5, 2.0, 1.5, 0.5, 12.0}; }
constexpr double kHeadway = 0.25;

}  // namespace

TEST_CASE("detour time scales with headway and flexible demand") {
  const auto corridor = cta126_corridor();
  const auto demand = DemandDistribution::uniform(80.0, corridor.length_km);
  CHECK(detour_time(corridor, demand, kHeadway, 0.0) == 0.0);
  CHECK(detour_time(corridor, demand, kHeadway, corridor.length_km) ==
        doctest::Approx(0.0866667).epsilon(1e-5));
  CHECK(detour_time(corridor, demand, 2.0 * kHeadway, 6.3) ==
        doctest::Approx(2.0 * detour_time(corridor, demand, kHeadway, 6.3)).epsilon(1e-12));
  CHECK_THROWS_AS(detour_time(corridor, demand, kHeadway, -0.1), std::domain_error);
}

TEST_CASE("fleet size from cycle time over headway") {
  const auto c126 = cta126_corridor();
  const auto d126 = DemandDistribution::uniform(80.0, c126.length_km);
  CHECK(fleet_size(c126, d126, kHeadway, 0.0) == doctest::Approx(4.24).epsilon(1e-9));

  const auto c84 = cta84_corridor();
  const auto d84 = DemandDistribution::uniform(80.0, c84.length_km);
  CHECK(fleet_size(c84, d84, kHeadway, 0.0) == doctest::Approx(4.906667).epsilon(1e-5));

  double previous = 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double x = c126.length_km * i / 50.0;
    const double s = fleet_size(c126, d126, kHeadway, x);
    CHECK(s >= previous - 1e-12);
    previous = s;
  }
  CHECK_THROWS_AS(fleet_size(c126, d126, 0.0, 1.0), std::domain_error);
}

TEST_CASE("cost breakdown components at the boundary") {
  const auto corridor = cta126_corridor();
  const auto demand = DemandDistribution::uniform(80.0, corridor.length_km);
  const auto params = base_costs();

  const CostBreakdown fixed = cost_breakdown(corridor, demand, params, kHeadway, 0.0);
  CHECK(fixed.access == doctest::Approx(99.0).epsilon(1e-9));
  CHECK(fixed.riding_y == 0.0);
  CHECK(fixed.operating_y == 0.0);
  CHECK(fixed.vehicle == doctest::Approx(12.0 * 4.24).epsilon(1e-9));
  CHECK(fixed.total == doctest::Approx(fixed.access + fixed.waiting + fixed.riding_x +
                                       fixed.operating_x + fixed.vehicle)
                           .epsilon(1e-12));

  for (double x : {0.0, 3.1, 7.9, corridor.length_km}) {
    const CostBreakdown b = cost_breakdown(corridor, demand, params, kHeadway, x);
    CHECK(b.waiting == doctest::Approx(247.5).epsilon(1e-12));
    CHECK(b.total ==
          doctest::Approx(b.access + b.waiting + b.riding_x + b.riding_y + b.operating_x +
                          b.operating_y + b.vehicle)
              .epsilon(1e-12));
  }
}

TEST_CASE("waiting cost at the eight-seat joint-design headway") {
  // Variable-headway cross-check: at h = 4.27 min the waiting cost of the
  // 80 pax/h profile is 70.48 $/h.
  const auto corridor = cta126_corridor();
  const auto demand = DemandDistribution::uniform(80.0, corridor.length_km);
  CostParams params = base_costs();
  params.operating_cost_km = 0.6370;
  params.vehicle_cost_h = 3.63;
  const CostBreakdown b = cost_breakdown(corridor, demand, params, 4.27 / 60.0, 10.9);
  CHECK(b.waiting == doctest::Approx(70.48).epsilon(0.002));
}

TEST_CASE("total cost minimum and closed-form agreement (uniform profile)") {
  const auto corridor = cta126_corridor();
  const auto demand = DemandDistribution::uniform(80.0, corridor.length_km);
  const auto params = base_costs();

  const auto grid = oracle::grid_min_total_cost(corridor, demand, params, kHeadway, 20001);
  CHECK(grid.value == doctest::Approx(627.0).epsilon(0.01));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const double x = oracle::uniform_in(rng, 0.0, corridor.length_km);
    CHECK(total_cost(corridor, demand, params, kHeadway, x) ==
          doctest::Approx(oracle::uniform_closed_form_cost(corridor, 80.0, params, kHeadway, x))
              .epsilon(1e-9));
  }
}

TEST_CASE("cost derivative: sign, stationarity, finite differences") {
  const auto corridor = cta126_corridor();
  const auto demand = DemandDistribution::uniform(80.0, corridor.length_km);
  const auto params = base_costs();

  CHECK(cost_derivative(corridor, demand, params, kHeadway, 0.0) < 0.0);

  const double threshold = optimal_flexible_demand(corridor, params, kHeadway);
  const double x_star = demand.inverse_cumulative(threshold);
  const double scale = total_cost(corridor, demand, params, kHeadway, x_star) / corridor.length_km;
  CHECK(std::abs(cost_derivative(corridor, demand, params, kHeadway, x_star)) <= 1e-8 * scale);

  std::mt19937_64 rng(5);
  for (const bool triangular : {false, true}) {
    const auto profile = triangular
                             ? DemandDistribution::triangular(80.0, corridor.length_km)
                             : demand;
    for (int i = 0; i < 20; ++i) {
      const double x = oracle::uniform_in(rng, 0.05 * corridor.length_km,
                                          0.95 * corridor.length_km);
      const double step = 1e-5 * corridor.length_km;
      const double fd = oracle::central_difference(
          [&](double v) { return total_cost(corridor, profile, params, kHeadway, v); }, x, step);
      const double analytic = cost_derivative(corridor, profile, params, kHeadway, x);
      const double floor = total_cost(corridor, profile, params, kHeadway, x) /
                           corridor.length_km;
      CHECK(std::abs(fd - analytic) <= 1e-6 * std::max(std::abs(analytic), floor));
    }
  }
}

TEST_CASE("route form classification") {
  const auto corridor = cta126_corridor();
  const auto demand = DemandDistribution::uniform(80.0, corridor.length_km);
  const auto params = base_costs();

  CHECK(classify_route_form(corridor, demand, params, kHeadway).form == RouteForm::Hybrid);
  CHECK(classify_route_form(cta84_corridor(),
                            DemandDistribution::uniform(80.0, 13.4), params, kHeadway)
            .form == RouteForm::Hybrid);

  CostParams pricey = params;
  pricey.operating_cost_km = 100.0;
  CHECK(classify_route_form(corridor, demand, pricey, kHeadway).form == RouteForm::Fixed);

  const auto trickle = DemandDistribution::uniform(1e-3, corridor.length_km);
  CHECK(classify_route_form(corridor, trickle, params, kHeadway).form == RouteForm::Flexible);

  // Threshold equalities resolve to the non-hybrid form.
  const double value_of_access = params.value_of_time * params.access_factor;
  const double fixed_threshold =
      params.operating_cost_km / value_of_access +
      2.0 * params.vehicle_cost_h / (value_of_access * corridor.speed_kmh);
  Corridor at_fixed = corridor;
  at_fixed.cross.access_time_h = fixed_threshold * at_fixed.cross.detour_km;
  CHECK(classify_route_form(at_fixed, demand, params, kHeadway).form == RouteForm::Fixed);
  Corridor at_flexible = corridor;
  at_flexible.cross.access_time_h =
      (kHeadway * 80.0 / (params.access_factor * corridor.speed_kmh) + fixed_threshold) *
      at_flexible.cross.detour_km;
  CHECK(classify_route_form(at_flexible, demand, params, kHeadway).form == RouteForm::Flexible);

  Corridor no_detour = corridor;
  no_detour.cross.detour_km = 0.0;
  const auto degenerate = classify_route_form(no_detour, demand, params, kHeadway);
  CHECK(degenerate.form == RouteForm::Flexible);
  CHECK(degenerate.degenerate_detour);

  CHECK_THROWS_AS(
      classify_route_form(corridor, DemandDistribution::uniform(0.0, 10.9), params, kHeadway),
      std::domain_error);
}

TEST_CASE("optimal flexible demand threshold") {
  // Catchment parameters of the wide-area case: 2 km width, 4 km/h walk.
  const Corridor wide{10.0, 30.0, 1.0 / 6.0, {0.125, 2.0 / 3.0}};
  const auto params = base_costs();
  CHECK(optimal_flexible_demand(wide, params, kHeadway) == doctest::Approx(35.5).epsilon(0.005));

  CHECK(optimal_flexible_demand(cta84_corridor(), params, kHeadway) ==
        doctest::Approx(41.5).epsilon(0.005));

  Corridor no_detour = wide;
  no_detour.cross.detour_km = 0.0;
  CHECK_THROWS_AS(optimal_flexible_demand(no_detour, params, kHeadway), std::domain_error);
}

TEST_CASE("optimal flexible portion and its grid oracle") {
  const auto params = base_costs();
  const auto c84 = cta84_corridor();
  const auto d84 = DemandDistribution::uniform(80.0, c84.length_km);
  const FlexiblePortion uni = optimal_flexible_portion(c84, d84, params, kHeadway);
  CHECK(uni.form == RouteForm::Hybrid);
  CHECK(uni.x_f_km == doctest::Approx(6.95).epsilon(0.002));
  CHECK(uni.x_f_km == doctest::Approx(6.90).epsilon(0.02));

  // Same flex demand under both profiles; the portion follows the profile.
  const auto t84 = DemandDistribution::triangular(80.0, c84.length_km);
  const FlexiblePortion tri = optimal_flexible_portion(c84, t84, params, kHeadway);
  CHECK(d84.cumulative(uni.x_f_km) == doctest::Approx(t84.cumulative(tri.x_f_km)).epsilon(1e-9));
  CHECK(tri.x_f_km ==
        doctest::Approx(std::sqrt(c84.length_km * uni.x_f_km)).epsilon(1e-9));

  for (const auto& profile : {d84, t84}) {
    const auto grid = oracle::grid_min_total_cost(c84, profile, params, kHeadway, 100000);
    const FlexiblePortion p = optimal_flexible_portion(c84, profile, params, kHeadway);
    CHECK(std::abs(p.x_f_km - grid.x) <= grid.step);
  }
}

TEST_CASE("optimal fleet size") {
  const auto params = base_costs();
  CHECK(optimal_fleet_size(cta126_corridor(), params, kHeadway) ==
        doctest::Approx(4.76).epsilon(0.005));
  CHECK(optimal_fleet_size(cta84_corridor(), params, kHeadway) ==
        doctest::Approx(6.37).epsilon(0.005));

  // Equals the headway-based fleet at the optimal portion for any profile.
  const auto corridor = cta126_corridor();
  for (const auto& profile : {DemandDistribution::uniform(80.0, corridor.length_km),
                              DemandDistribution::triangular(80.0, corridor.length_km)}) {
    const FlexiblePortion p = optimal_flexible_portion(corridor, profile, params, kHeadway);
    REQUIRE(p.form == RouteForm::Hybrid);
    CHECK(optimal_fleet_size(corridor, params, kHeadway) ==
          doctest::Approx(fleet_size(corridor, profile, kHeadway, p.x_f_km)).epsilon(1e-9));
  }

  CostParams absurd = params;
  absurd.operating_cost_km = 1e4;
  CHECK_THROWS_AS(optimal_fleet_size(cta84_corridor(), absurd, kHeadway), std::domain_error);
}

TEST_CASE("local convexity at the interior optimum") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const auto draw = oracle::draw_hybrid_model(rng);
    const auto demand = DemandDistribution::uniform(draw.total_pax_h, draw.corridor.length_km);
    const FlexiblePortion p =
        optimal_flexible_portion(draw.corridor, demand, draw.params, draw.headway_h);
    const double step = 1e-4 * draw.corridor.length_km;
    if (p.x_f_km < 2.0 * step || p.x_f_km > draw.corridor.length_km - 2.0 * step) continue;
    auto cost = [&](double x) {
      return total_cost(draw.corridor, demand, draw.params, draw.headway_h, x);
    };
    const double second = cost(p.x_f_km + step) - 2.0 * cost(p.x_f_km) + cost(p.x_f_km - step);
    CHECK(second >= -1e-9 * cost(p.x_f_km));
  }
}

TEST_CASE("classifier agrees with the grid argmin on random draws") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 500; ++i) {
    const auto draw = oracle::draw_model(rng);
    const auto demand = DemandDistribution::uniform(draw.total_pax_h, draw.corridor.length_km);
    const auto cls = classify_route_form(draw.corridor, demand, draw.params, draw.headway_h);
    const auto grid =
        oracle::grid_min_total_cost(draw.corridor, demand, draw.params, draw.headway_h, 10000);
    double expected = 0.0;
    if (cls.form == RouteForm::Flexible) {
      expected = draw.corridor.length_km;
    } else if (cls.form == RouteForm::Hybrid) {
      expected = demand.inverse_cumulative(
          std::clamp(optimal_flexible_demand(draw.corridor, draw.params, draw.headway_h), 0.0,
                     draw.total_pax_h));
    }
    CHECK(std::abs(grid.x - expected) <= grid.step * 1.000001);
  }
}

TEST_CASE("cost components are monotone in the flexible portion") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    const auto draw = oracle::draw_model(rng);
    const auto demand = DemandDistribution::triangular(draw.total_pax_h, draw.corridor.length_km);
    double prev_access = std::numeric_limits<double>::infinity();
    double prev_riding_y = -1.0, prev_operating_y = -1.0;
    for (int k = 0; k <= 40; ++k) {
      const double x = draw.corridor.length_km * k / 40.0;
      const CostBreakdown b = cost_breakdown(draw.corridor, demand, draw.params, draw.headway_h, x);
      CHECK(b.access <= prev_access + 1e-9);
      CHECK(b.riding_y >= prev_riding_y - 1e-9);
      CHECK(b.operating_y >= prev_operating_y - 1e-9);
      prev_access = b.access;
      prev_riding_y = b.riding_y;
      prev_operating_y = b.operating_y;
    }
  }
}

TEST_CASE("flexible terms shut off on a fully fixed route") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 20; ++i) {
    const auto draw = oracle::draw_model(rng);
    const auto demand = DemandDistribution::uniform(draw.total_pax_h, draw.corridor.length_km);
    const CostBreakdown b = cost_breakdown(draw.corridor, demand, draw.params, draw.headway_h, 0.0);
    CHECK(b.riding_y == 0.0);
    CHECK(b.operating_y == 0.0);
    CHECK(fleet_size(draw.corridor, demand, draw.headway_h, 0.0) ==
          doctest::Approx(2.0 / draw.headway_h *
                          (draw.corridor.length_km / draw.corridor.speed_kmh +
                           draw.corridor.layover_h))
              .epsilon(1e-12));
  }
}

TEST_CASE("threshold comparative statics") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 200; ++i) {
    const auto draw = oracle::draw_hybrid_model(rng);
    const double base = optimal_flexible_demand(draw.corridor, draw.params, draw.headway_h);
    const double bump = 1.1;

    auto with_corridor = [&](auto mutate) {
      Corridor c = draw.corridor;
      mutate(c);
      return optimal_flexible_demand(c, draw.params, draw.headway_h);
    };
    auto with_params = [&](auto mutate) {
      CostParams p = draw.params;
      mutate(p);
      return optimal_flexible_demand(draw.corridor, p, draw.headway_h);
    };

    // Never increases: operating cost, vehicle cost, headway, detour.
    CHECK(with_params([&](CostParams& p) { p.operating_cost_km *= bump; }) <= base + 1e-9);
    CHECK(with_params([&](CostParams& p) { p.vehicle_cost_h *= bump; }) <= base + 1e-9);
    CHECK(optimal_flexible_demand(draw.corridor, draw.params, draw.headway_h * bump) <=
          base + 1e-9);
    CHECK(with_corridor([&](Corridor& c) { c.cross.detour_km *= bump; }) <= base + 1e-9);

    // Never decreases: access time, access weight, vehicle speed.
    CHECK(with_corridor([&](Corridor& c) { c.cross.access_time_h *= bump; }) >= base - 1e-9);
    CHECK(with_params([&](CostParams& p) { p.access_factor *= bump; }) >= base - 1e-9);
    CHECK(with_corridor([&](Corridor& c) { c.speed_kmh *= bump; }) >= base - 1e-9);
  }
}
