#pragma once

// Test-side oracles and random model generators. Everything here recomputes
// expectations through an independent route (dense grids, finite differences,
// Monte Carlo, inline formulas) so library results have something honest to
// be checked against.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "sod/cost_model.hpp"
#include "sod/joint_optimizer.hpp"

namespace oracle {

struct GridMin {
  double x = 0.0;
  double value = std::numeric_limits<double>::infinity();
  double step = 0.0;
};

// Dense scan of the fixed-headway total cost over the flexible portion.
inline GridMin grid_min_total_cost(const sod::Corridor& corridor,
                                   const sod::DemandDistribution& demand,
                                   const sod::CostParams& params, double headway_h, int points) {
  GridMin best;
  best.step = corridor.length_km / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double x = corridor.length_km * i / (points - 1);
    const double v = sod::total_cost(corridor, demand, params, headway_h, x);
    if (v < best.value) {
      best.value = v;
      best.x = x;
    }
  }
  return best;
}

// Exhaustive scan of the variable-headway cost over the feasible
// (x_f, fleet) box used by the optimizer.
inline GridMin grid_min_variable(const sod::Corridor& corridor,
                                 const sod::DemandDistribution& demand,
                                 const sod::CostParams& user_costs, const sod::VehicleType& vehicle,
                                 const sod::CapacityPolicy& policy, int points,
                                 double fleet_upper_factor = 4.0) {
  GridMin best;
  const double fleet_cap =
      fleet_upper_factor *
      sod::fleet_lower_bound(corridor, demand, policy, vehicle, corridor.length_km);
  for (int i = 0; i < points; ++i) {
    const double x = corridor.length_km * i / (points - 1);
    const double lo = sod::fleet_lower_bound(corridor, demand, policy, vehicle, x);
    const double hi = std::max(lo, fleet_cap);
    for (int j = 0; j < points; ++j) {
      const double fleet = lo + (hi - lo) * j / (points - 1);
      const double v =
          sod::total_cost_variable(corridor, demand, user_costs, vehicle, x, fleet).total;
      if (v < best.value) {
        best.value = v;
        best.x = x;
      }
    }
  }
  return best;
}

inline double central_difference(const std::function<double(double)>& f, double x, double step) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

struct ModelDraw {
  sod::Corridor corridor;
  sod::CostParams params;
  double headway_h = 0.0;
  double total_pax_h = 0.0;
};

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline ModelDraw draw_model(std::mt19937_64& rng) {
  ModelDraw d;
  d.corridor.length_km = uniform_in(rng, 5.0, 25.0);
  d.corridor.speed_kmh = uniform_in(rng, 15.0, 60.0);
  d.corridor.layover_h = uniform_in(rng, 0.0, 0.3);
  d.corridor.cross.access_time_h = uniform_in(rng, 0.01, 0.3);
  d.corridor.cross.detour_km = uniform_in(rng, 0.05, 1.5);
  d.params = {uniform_in(rng, 5.0, 40.0), uniform_in(rng, 0.5, 3.0), uniform_in(rng, 0.5, 3.0),
              uniform_in(rng, 0.1, 3.0), uniform_in(rng, 1.0, 30.0)};
  d.headway_h = uniform_in(rng, 0.05, 0.5);
  d.total_pax_h = uniform_in(rng, 20.0, 200.0);
  return d;
}

inline ModelDraw draw_hybrid_model(std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    ModelDraw d = draw_model(rng);
    const auto demand = sod::DemandDistribution::uniform(d.total_pax_h, d.corridor.length_km);
    if (sod::classify_route_form(d.corridor, demand, d.params, d.headway_h).form ==
        sod::RouteForm::Hybrid)
      return d;
  }
  throw std::runtime_error("draw_hybrid_model: no hybrid draw found");
}

// Fixed-headway total cost for a uniform profile, written out termwise from
// the closed-form expression (density * length = total demand).
inline double uniform_closed_form_cost(const sod::Corridor& c, double total_pax_h,
                                       const sod::CostParams& p, double H, double x_f) {
  const double lambda = total_pax_h / c.length_km;
  const double detour = c.cross.detour_km;
  const double v = c.speed_kmh;
  return p.value_of_time * p.access_factor * c.cross.access_time_h * lambda *
             (c.length_km - x_f) +
         p.value_of_time * p.waiting_factor * lambda * c.length_km * H / 2.0 +
         p.value_of_time * lambda * c.length_km * c.length_km / (2.0 * v) +
         p.value_of_time * lambda * lambda / 2.0 * H * detour / v * x_f * x_f +
         p.operating_cost_km * c.length_km / H + p.operating_cost_km * lambda * detour * x_f +
         p.vehicle_cost_h * 2.0 / H *
             (c.length_km / v + H * detour / v * lambda * x_f + c.layover_h);
}

}  // namespace oracle
