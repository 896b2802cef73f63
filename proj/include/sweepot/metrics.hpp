#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sweepot/height_map.hpp"

namespace sweepot {

/// Occupancy overlap |A n B| / |A u B| with A, B the cells strictly above
/// `occupancy_threshold`. Returns 1 when both occupied sets are empty.
double iou(const HeightMap& current, const HeightMap& target, double occupancy_threshold);

/// Default binarization level: 10% of the target's maximum height.
double default_iou_threshold(const HeightMap& target);

struct MetricRecord {
  int iteration = 0;  // 0 = initial state, before any action
  double emd_m = 0.0;
  double iou = 0.0;
};

struct MetricSeries {
  std::string episode_id;
  std::vector<MetricRecord> records;
};

/// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double level);

struct QuantileRow {
  int iteration = 0;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
};

struct QuantileTable {
  std::vector<QuantileRow> emd;
  std::vector<QuantileRow> iou;
};

/// Per-iteration 5/50/95% quantiles across episodes. All series must cover
/// the same iteration range (callers pad early-stopped episodes by repeating
/// the final record). Throws EmptyInput / DimensionMismatch.
QuantileTable quantiles(const std::vector<MetricSeries>& series);

// CSV schemas: metrics rows are `episode,iteration,emd_m,iou`; quantile rows
// are `iteration,metric,q05,q50,q95` with metric in {emd_m, iou}. Stored
// values are raw meters; any x10^3 display scaling happens at presentation.
void write_metrics_csv(const std::vector<MetricSeries>& series, std::ostream& out);
void write_quantiles_csv(const QuantileTable& table, std::ostream& out);

}  // namespace sweepot
