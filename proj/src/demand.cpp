#include "sod/demand.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sod/csv.hpp"
#include "sod/errors.hpp"

namespace sod {

namespace {

void check_basics(double total, double length) {
  if (!(length > 0.0)) throw std::invalid_argument("demand: route length must be > 0 km");
  if (!(total >= 0.0)) throw std::invalid_argument("demand: total demand must be >= 0 pax/h");
  if (!std::isfinite(total) || !std::isfinite(length))
    throw std::invalid_argument("demand: non-finite parameter");
}

}  // namespace

DemandDistribution DemandDistribution::uniform(double total_pax_h, double length_km) {
  check_basics(total_pax_h, length_km);
  DemandDistribution d;
  d.kind_ = DemandKind::Uniform;
  d.total_ = total_pax_h;
  d.length_ = length_km;
  return d;
}

DemandDistribution DemandDistribution::triangular(double total_pax_h, double length_km) {
  check_basics(total_pax_h, length_km);
  DemandDistribution d;
  d.kind_ = DemandKind::Triangular;
  d.total_ = total_pax_h;
  d.length_ = length_km;
  return d;
}

DemandDistribution DemandDistribution::empirical(const std::vector<WeightedPosition>& samples,
                                                 double length_km, int bins) {
  check_basics(0.0, length_km);
  if (bins < 1) throw std::invalid_argument("demand: bin count must be >= 1");
  DemandDistribution d;
  d.kind_ = DemandKind::Empirical;
  d.length_ = length_km;
  d.bin_width_ = length_km / bins;
  d.bin_rate_.assign(bins, 0.0);

  double total = 0.0;
  for (const auto& s : samples) {
    if (!(s.x_km >= 0.0 && s.x_km <= length_km))
      throw std::domain_error("demand: sample position outside [0, route length]");
    if (!(s.trips_per_h >= 0.0))
      throw std::domain_error("demand: sample trips must be >= 0");
    int k = std::min(bins - 1, static_cast<int>(s.x_km / d.bin_width_));
    d.bin_rate_[k] += s.trips_per_h / d.bin_width_;
    total += s.trips_per_h;
  }
  d.total_ = total;
  d.bin_cum_.assign(bins + 1, 0.0);
  for (int k = 0; k < bins; ++k)
    d.bin_cum_[k + 1] = d.bin_cum_[k] + d.bin_rate_[k] * d.bin_width_;
  // Pin the accumulated end value to the exact total.
  d.bin_cum_.back() = total;
  return d;
}

DemandDistribution DemandDistribution::empirical_from_csv(const std::string& path,
                                                          double length_km, int bins) {
  const CsvTable table = read_csv_file(path);
  const std::size_t xc = table.column("x_km", path);
  const std::size_t tc = table.column("trips_per_h", path);
  std::vector<WeightedPosition> samples;
  samples.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string where = path + " row " + std::to_string(r + 2);
    WeightedPosition p;
    p.x_km = parse_double_field(table.rows[r][xc], where + ", x_km");
    p.trips_per_h = parse_double_field(table.rows[r][tc], where + ", trips_per_h");
    if (!(p.x_km >= 0.0 && p.x_km <= length_km))
      throw IoError(where + ": x_km " + table.rows[r][xc] + " outside [0, " +
                    format_double(length_km) + "]");
    if (!(p.trips_per_h >= 0.0)) throw IoError(where + ": trips_per_h must be >= 0");
    samples.push_back(p);
  }
  return empirical(samples, length_km, bins);
}

namespace {

// Positions are often produced by grid arithmetic (L * i / n), which can land
// one ulp outside the route; absorb that, reject anything real.
double clamp_position(double x_km, double length_km, const char* where) {
  const double slack = 1e-12 * length_km;
  if (!(x_km >= -slack && x_km <= length_km + slack))
    throw std::domain_error(std::string(where) + ": x outside [0, route length]");
  return std::clamp(x_km, 0.0, length_km);
}

}  // namespace

double DemandDistribution::density(double x_km) const {
  x_km = clamp_position(x_km, length_, "density");
  switch (kind_) {
    case DemandKind::Uniform:
      return total_ / length_;
    case DemandKind::Triangular:
      return 2.0 * total_ / (length_ * length_) * x_km;
    case DemandKind::Empirical: {
      const int bins = static_cast<int>(bin_rate_.size());
      const int k = std::min(bins - 1, static_cast<int>(x_km / bin_width_));
      return bin_rate_[k];
    }
  }
  return 0.0;
}

double DemandDistribution::cumulative(double x_km) const {
  x_km = clamp_position(x_km, length_, "cumulative");
  switch (kind_) {
    case DemandKind::Uniform:
      return total_ * x_km / length_;
    case DemandKind::Triangular: {
      const double r = x_km / length_;
      return total_ * r * r;
    }
    case DemandKind::Empirical: {
      const int bins = static_cast<int>(bin_rate_.size());
      const int k = std::min(bins - 1, static_cast<int>(x_km / bin_width_));
      return std::min(total_, bin_cum_[k] + bin_rate_[k] * (x_km - k * bin_width_));
    }
  }
  return 0.0;
}

double DemandDistribution::inverse_cumulative(double pax_h) const {
  const double slack = 1e-9 * std::max(total_, 1.0);
  if (!(pax_h >= -slack && pax_h <= total_ + slack))
    throw std::domain_error("inverse_cumulative: demand outside [0, total]");
  const double q = std::clamp(pax_h, 0.0, total_);
  if (q <= 0.0) return 0.0;
  switch (kind_) {
    case DemandKind::Uniform:
      return q * length_ / total_;
    case DemandKind::Triangular:
      return length_ * std::sqrt(q / total_);
    case DemandKind::Empirical: {
      // First bin whose right-edge cumulative reaches q; the left edge of any
      // zero-density plateau at level q sits at that bin's interior solution.
      const auto it = std::lower_bound(bin_cum_.begin() + 1, bin_cum_.end(), q);
      const int k = static_cast<int>(it - bin_cum_.begin()) - 1;
      return std::min(length_, k * bin_width_ + (q - bin_cum_[k]) / bin_rate_[k]);
    }
  }
  return 0.0;
}

double DemandDistribution::riding_integral() const {
  switch (kind_) {
    case DemandKind::Uniform:
      return total_ * length_ / 2.0;
    case DemandKind::Triangular:
      return total_ * length_ / 3.0;
    case DemandKind::Empirical: {
      double acc = 0.0;
      for (std::size_t k = 0; k < bin_rate_.size(); ++k)
        acc += bin_cum_[k] * bin_width_ + 0.5 * bin_rate_[k] * bin_width_ * bin_width_;
      return acc;
    }
  }
  return 0.0;
}

std::vector<double> DemandDistribution::segment_edges() const {
  if (kind_ != DemandKind::Empirical) return {0.0, length_};
  std::vector<double> edges;
  edges.reserve(bin_rate_.size() + 1);
  for (std::size_t k = 0; k <= bin_rate_.size(); ++k) edges.push_back(k * bin_width_);
  edges.back() = length_;
  return edges;
}

CrossSection cross_section_from_uniform_width(double width_km, double walk_speed_kmh) {
  if (!(walk_speed_kmh > 0.0))
    throw std::domain_error("cross section: walk speed must be > 0 km/h");
  if (!(width_km >= 0.0)) throw std::domain_error("cross section: width must be >= 0 km");
  return {width_km / (4.0 * walk_speed_kmh), width_km / 3.0};
}

void Corridor::validate() const {
  if (!(length_km > 0.0)) throw std::invalid_argument("corridor: length_km must be > 0");
  if (!(speed_kmh > 0.0)) throw std::invalid_argument("corridor: speed_kmh must be > 0");
  if (!(layover_h >= 0.0)) throw std::invalid_argument("corridor: layover_h must be >= 0");
  if (!(cross.access_time_h >= 0.0))
    throw std::invalid_argument("corridor: access_time_h must be >= 0");
  if (!(cross.detour_km >= 0.0)) throw std::invalid_argument("corridor: detour_km must be >= 0");
}

}  // namespace sod
