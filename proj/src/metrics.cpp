#include "sweepot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sweepot/error.hpp"
#include "sweepot/text.hpp"

namespace sweepot {

double iou(const HeightMap& current, const HeightMap& target, double occupancy_threshold) {
  if (!(current.geometry == target.geometry))
    fail(ErrorCode::DimensionMismatch, "iou requires shared geometry");
  int intersection = 0, occupied_union = 0;
  for (std::size_t i = 0; i < current.heights.size(); ++i) {
    const bool a = current.heights[i] > occupancy_threshold;
    const bool b = target.heights[i] > occupancy_threshold;
    intersection += (a && b) ? 1 : 0;
    occupied_union += (a || b) ? 1 : 0;
  }
  if (occupied_union == 0) return 1.0;
  return static_cast<double>(intersection) / static_cast<double>(occupied_union);
}

double default_iou_threshold(const HeightMap& target) { return 0.1 * target.max_height(); }

double quantile(std::vector<double> values, double level) {
  if (values.empty()) fail(ErrorCode::EmptyInput, "quantile of empty sample");
  if (level < 0.0 || level > 1.0) fail(ErrorCode::InvalidArgument, "quantile level outside [0,1]");
  std::sort(values.begin(), values.end());
  const double position = level * static_cast<double>(values.size() - 1);
  const std::size_t lower = static_cast<std::size_t>(std::floor(position));
  if (lower + 1 >= values.size()) return values.back();
  const double frac = position - static_cast<double>(lower);
  return values[lower] + frac * (values[lower + 1] - values[lower]);
}

QuantileTable quantiles(const std::vector<MetricSeries>& series) {
  if (series.empty()) fail(ErrorCode::EmptyInput, "no metric series to aggregate");
  const std::size_t length = series.front().records.size();
  if (length == 0) fail(ErrorCode::EmptyInput, "metric series with no records");
  for (const MetricSeries& s : series)
    if (s.records.size() != length)
      fail(ErrorCode::DimensionMismatch,
           "series '" + s.episode_id + "' does not cover the common iteration range");

  QuantileTable table;
  std::vector<double> emd_values(series.size()), iou_values(series.size());
  for (std::size_t it = 0; it < length; ++it) {
    for (std::size_t s = 0; s < series.size(); ++s) {
      emd_values[s] = series[s].records[it].emd_m;
      iou_values[s] = series[s].records[it].iou;
    }
    const int iteration = series.front().records[it].iteration;
    table.emd.push_back({iteration, quantile(emd_values, 0.05), quantile(emd_values, 0.5),
                         quantile(emd_values, 0.95)});
    table.iou.push_back({iteration, quantile(iou_values, 0.05), quantile(iou_values, 0.5),
                         quantile(iou_values, 0.95)});
  }
  return table;
}

void write_metrics_csv(const std::vector<MetricSeries>& series, std::ostream& out) {
  out << "episode,iteration,emd_m,iou\n";
  for (const MetricSeries& s : series)
    for (const MetricRecord& r : s.records)
      out << s.episode_id << ',' << r.iteration << ',' << format_double(r.emd_m) << ','
          << format_double(r.iou) << '\n';
}

void write_quantiles_csv(const QuantileTable& table, std::ostream& out) {
  out << "iteration,metric,q05,q50,q95\n";
  for (const QuantileRow& r : table.emd)
    out << r.iteration << ",emd_m," << format_double(r.q05) << ',' << format_double(r.q50) << ','
        << format_double(r.q95) << '\n';
  for (const QuantileRow& r : table.iou)
    out << r.iteration << ",iou," << format_double(r.q05) << ',' << format_double(r.q50) << ','
        << format_double(r.q95) << '\n';
}

}  // namespace sweepot
