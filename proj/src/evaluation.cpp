#include "hybridloc/evaluation.hpp"

#include "hybridloc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hybridloc {

double trajectory_error(const Point2& point, const ReferencePath& path) {
  const auto& w = path.waypoints();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const Point2 seg = w[i + 1] - w[i];
    const double t = std::clamp((point - w[i]).dot(seg) / seg.squaredNorm(), 0.0, 1.0);
    best = std::min(best, (point - (w[i] + t * seg)).norm());
  }
  return best;
}

std::vector<double> TrajectoryRecord::errors() const {
  std::vector<double> out;
  out.reserve(estimates.size());
  for (const TimedPoint& p : estimates) out.push_back(trajectory_error(p.position, reference));
  return out;
}

Ecdf::Ecdf(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw EmptySamples("ECDF needs at least one sample");
  for (double s : samples_) {
    if (!std::isfinite(s) || s < 0.0)
      throw InvalidArgument("ECDF samples must be finite and non-negative");
  }
  std::sort(samples_.begin(), samples_.end());
}

double Ecdf::operator()(double t) const {
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), t);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double Ecdf::quantile(double p) const {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("quantile level must lie in (0, 1]");
  const double n = static_cast<double>(samples_.size());
  // Guard against p * n landing a hair above an integer.
  auto rank = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, samples_.size());
  return samples_[rank - 1];
}

std::vector<std::pair<double, double>> Ecdf::points() const {
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (i + 1 < samples_.size() && samples_[i + 1] == samples_[i]) continue;
    out.emplace_back(samples_[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

RunSummary summarize(std::string label, const Ecdf& ecdf,
                     const std::vector<double>& thresholds) {
  RunSummary row;
  row.label = std::move(label);
  row.samples = ecdf.size();
  row.median = ecdf.median();
  row.p90 = ecdf.quantile(0.9);
  row.exceedance.reserve(thresholds.size());
  for (double t : thresholds) row.exceedance.push_back(ecdf.exceedance(t));
  return row;
}

ComparisonTable compare_runs(const TrajectoryRecord& a, const TrajectoryRecord& b,
                             const std::vector<double>& thresholds) {
  ComparisonTable table;
  table.thresholds = thresholds;
  table.rows.push_back(summarize(a.label, Ecdf(a.errors()), thresholds));
  table.rows.push_back(summarize(b.label, Ecdf(b.errors()), thresholds));
  return table;
}

}  // namespace hybridloc
