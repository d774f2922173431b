#pragma once

#include <string>
#include <vector>

namespace sod {

enum class DemandKind { Uniform, Triangular, Empirical };

struct WeightedPosition {
  double x_km = 0.0;
  double trips_per_h = 0.0;
};

// Hourly boarding demand along a corridor. The axis runs from the far
// (candidate flexible) end of the route at x = 0 to the station at x = L,
// so low-x passengers are the ones furthest from the station.
//
// Uniform and triangular profiles are closed-form. Empirical profiles are
// piecewise-constant densities over equal-width bins, which keeps the
// cumulative continuous, non-decreasing and invertible.
class DemandDistribution {
 public:
  static constexpr int kDefaultBins = 50;

  static DemandDistribution uniform(double total_pax_h, double length_km);
  // Density rises linearly from zero at x = 0 to its peak at the station.
  static DemandDistribution triangular(double total_pax_h, double length_km);
  static DemandDistribution empirical(const std::vector<WeightedPosition>& samples,
                                      double length_km, int bins = kDefaultBins);
  // Reads header "x_km,trips_per_h"; rows with x outside [0, length_km] or
  // negative trips are rejected with their row number.
  static DemandDistribution empirical_from_csv(const std::string& path, double length_km,
                                               int bins = kDefaultBins);

  DemandKind kind() const { return kind_; }
  double total_pax_h() const { return total_; }
  double length_km() const { return length_; }

  double density(double x_km) const;              // pax/km-h
  double cumulative(double x_km) const;           // pax/h boarding in [0, x]
  // Smallest x with cumulative(x) >= pax_h; on a zero-density plateau this is
  // the plateau's left edge.
  double inverse_cumulative(double pax_h) const;
  double riding_integral() const;                 // integral of cumulative over [0, L]

  // Boundaries of the piecewise-smooth density segments (bin edges for
  // empirical profiles), handy for quadrature.
  std::vector<double> segment_edges() const;

 private:
  DemandDistribution() = default;

  DemandKind kind_ = DemandKind::Uniform;
  double total_ = 0.0;
  double length_ = 0.0;
  // Empirical representation.
  std::vector<double> bin_rate_;  // density per bin
  std::vector<double> bin_cum_;   // cumulative at bin edges, bins + 1 entries
  double bin_width_ = 0.0;
};

struct CrossSection {
  double access_time_h = 0.0;  // mean walk time to a fixed-route stop
  double detour_km = 0.0;      // mean lateral distance between consecutive pickups
};

// Cross-section statistics for demand spread uniformly over a catchment of
// the given full width (half on each side of the running axis): mean walk
// |y| / speed with |y| ~ U[0, W/2], and mean |y1 - y2| = W/3 for the detour.
CrossSection cross_section_from_uniform_width(double width_km, double walk_speed_kmh);

struct Corridor {
  double length_km = 0.0;  // one-way route length
  double speed_kmh = 0.0;  // cruising speed, dwell included
  double layover_h = 0.0;  // terminal recovery per round trip
  CrossSection cross;

  void validate() const;  // throws std::invalid_argument on a bad field
};

}  // namespace sod
