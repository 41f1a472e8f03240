#pragma once

#include "hybridloc/path.hpp"
#include "hybridloc/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hybridloc {

// Shortest distance from `point` to the polyline.
double trajectory_error(const Point2& point, const ReferencePath& path);

struct TimedPoint {
  double t = 0.0;
  Point2 position = Point2::Zero();
};

struct TrajectoryRecord {
  std::vector<TimedPoint> estimates;
  ReferencePath reference;
  std::string label;

  std::vector<double> errors() const;
};

// Right-continuous empirical CDF, F(t) = #{samples <= t} / N.
class Ecdf {
 public:
  // Throws EmptySamples on no samples, InvalidArgument on negative or
  // non-finite ones.
  explicit Ecdf(std::vector<double> samples);

  double operator()(double t) const;
  double exceedance(double t) const { return 1.0 - (*this)(t); }
  // Smallest sample s with F(s) >= p, p in (0, 1].
  double quantile(double p) const;
  double median() const { return quantile(0.5); }

  std::size_t size() const { return samples_.size(); }
  const std::vector<double>& samples() const { return samples_; }
  // (sample, F(sample)) for each distinct sample.
  std::vector<std::pair<double, double>> points() const;

 private:
  std::vector<double> samples_;
};

struct RunSummary {
  std::string label;
  std::size_t samples = 0;
  double median = 0.0;
  double p90 = 0.0;
  std::vector<double> exceedance;  // one per threshold

  bool operator==(const RunSummary&) const = default;
};

struct ComparisonTable {
  std::vector<double> thresholds;
  std::vector<RunSummary> rows;
};

RunSummary summarize(std::string label, const Ecdf& ecdf,
                     const std::vector<double>& thresholds);

ComparisonTable compare_runs(const TrajectoryRecord& a,
                             const TrajectoryRecord& b,
                             const std::vector<double>& thresholds);

}  // namespace hybridloc
