#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "infosample/grid.hpp"

namespace infosample {

/// Uniform-width binning of one variable over [min_value, max_value].
/// Values equal to max_value fall into the last bin; a degenerate axis
/// (min == max) maps everything to bin 0.
struct AxisBinning {
  std::string variable;
  double min_value = 0.0;
  double max_value = 0.0;
  std::uint32_t bins = 1;

  double width() const noexcept { return (max_value - min_value) / bins; }
  std::uint32_t bin_of(double v) const noexcept;
  double center(std::uint32_t bin) const noexcept;
};

struct HistogramOptions {
  std::uint32_t bins = 128;
  std::size_t max_dims = 4;
  std::uint64_t memory_budget_bytes = 2ULL << 30;
};

/// d-dimensional frequency table. Flat bin index is row-major over the axes
/// (first axis most significant). Small tables (d <= 3, B <= 128) are stored
/// densely, larger ones as a sorted list of occupied bins.
class JointHistogram {
 public:
  JointHistogram() = default;

  /// Builds from a dense count array of size prod(bins); used by tests and tools.
  static JointHistogram from_dense(std::vector<AxisBinning> axes,
                                   std::span<const std::uint64_t> counts);
  /// Builds from per-point flat bin indices.
  static JointHistogram from_assignment(std::vector<AxisBinning> axes,
                                        std::span<const std::uint64_t> flat_bins,
                                        bool force_sparse = false);

  const std::vector<AxisBinning>& axes() const noexcept { return axes_; }
  std::size_t dims() const noexcept { return axes_.size(); }
  std::uint64_t total_count() const noexcept { return total_; }
  std::uint64_t bin_count() const noexcept { return bin_count_; }
  bool is_dense() const noexcept { return dense_; }

  std::uint64_t count(std::uint64_t flat) const;
  /// Occupied bins in ascending flat order and their counts.
  const std::vector<std::uint64_t>& occupied_bins() const noexcept { return occupied_; }
  const std::vector<std::uint64_t>& occupied_counts() const noexcept { return occupied_counts_; }

  std::uint64_t flatten(std::span<const std::uint32_t> coords) const;
  std::vector<std::uint32_t> unflatten(std::uint64_t flat) const;
  /// Position of `flat` in occupied_bins(), or -1 when the bin is empty.
  std::int64_t slot_of(std::uint64_t flat) const;

 private:
  void finish_occupied();

  std::vector<AxisBinning> axes_;
  std::uint64_t bin_count_ = 0;
  std::uint64_t total_ = 0;
  bool dense_ = true;
  std::vector<std::uint64_t> dense_counts_;
  std::vector<std::int64_t> dense_slots_;
  std::vector<std::uint64_t> occupied_;
  std::vector<std::uint64_t> occupied_counts_;
};

/// Flat histogram bin of every grid point.
struct BinAssignment {
  std::vector<std::uint64_t> per_point;
};

struct HistogramBuild {
  JointHistogram histogram;
  BinAssignment assignment;
};

/// Tallies the joint histogram of the selected variables over all grid points.
/// Throws UnknownVariable, DimensionalityTooHigh, MemoryBudgetExceeded.
HistogramBuild build_joint(const MultiField& mf, const std::vector<std::string>& selected,
                           const HistogramOptions& options = {});

/// Counts summed over every axis except `axis`. Throws AxisOutOfRange.
std::vector<std::uint64_t> marginal(const JointHistogram& h, std::size_t axis);

struct Probabilities {
  /// p of each occupied bin, aligned with JointHistogram::occupied_bins().
  std::vector<double> joint;
  std::vector<std::vector<double>> marginals;
};

/// Throws EmptyHistogram when the histogram has no counts.
Probabilities probabilities(const JointHistogram& h);

/// CSV rows "c1,...,cd,count" for every occupied bin.
std::string histogram_csv(const JointHistogram& h);

}  // namespace infosample
