#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "infosample/grid.hpp"
#include "infosample/histogram.hpp"
#include "infosample/pointinfo.hpp"

namespace infosample {

/// Target sampling fraction; 0 < alpha < 1 (InvalidArgument otherwise).
class SamplingFraction {
 public:
  explicit SamplingFraction(double alpha);
  double value() const noexcept { return alpha_; }
  /// round-half-up(alpha * n)
  std::uint64_t target(std::uint64_t n) const noexcept;

 private:
  double alpha_;
};

/// Per-bin acceptance probabilities, aligned with the occupied bins of the
/// histogram they were built from.
struct AcceptanceTable {
  std::uint64_t bin_count = 0;
  std::vector<std::uint64_t> bins;
  std::vector<std::uint64_t> counts;
  std::vector<double> per_bin;
  double gamma = 0.0;
  std::uint64_t target_count = 0;
  /// Sum of per_bin * counts.
  double expected_yield = 0.0;
  /// True when every normalized value was 0 and uniform alpha was used.
  bool degenerate = false;
  int iterations = 0;
  std::vector<std::string> warnings;

  double at(std::uint64_t flat) const;
};

/// Solves sum_b min(1, gamma * weight_b) * count_b = target for gamma.
/// Starts at target / sum(weight * count) and rescales over the unsaturated
/// mass; falls back to bisection when that has not settled after 64 steps.
/// Throws Unachievable when target exceeds the mass of bins with weight > 0.
AcceptanceTable calibrate(std::span<const double> weights, std::span<const std::uint64_t> counts,
                          std::uint64_t target);

AcceptanceTable build_acceptance(const PointInfoTable& table, const JointHistogram& h,
                                 SamplingFraction alpha);

/// Each point kept independently with probability alpha.
SampledPointSet random_sample(const MultiField& mf, SamplingFraction alpha, std::uint64_t seed);

/// Each point kept independently with its bin's acceptance probability.
/// With exact_quota, each bin keeps exactly round(per_bin * count) points,
/// those with the smallest per-point hash keys.
SampledPointSet pmi_sample(const MultiField& mf, const BinAssignment& assign,
                           const AcceptanceTable& acc, std::uint64_t seed,
                           bool exact_quota = false);

/// Index-only forms of the samplers, used where values are not needed.
std::vector<std::uint64_t> random_sample_indices(std::uint64_t n, SamplingFraction alpha,
                                                 std::uint64_t seed);
std::vector<std::uint64_t> pmi_sample_indices(const BinAssignment& assign,
                                              const AcceptanceTable& acc, std::uint64_t seed,
                                              bool exact_quota = false);

}  // namespace infosample
