#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace infosample::detail {

// Maps flat bin indices to per-occupied-bin values. Uses a dense table when
// the bin space is small enough, binary search otherwise.
class BinLookup {
 public:
  BinLookup(std::span<const std::uint64_t> bins, std::span<const double> values,
            std::uint64_t bin_count, double fallback = 0.0)
      : bins_(bins), values_(values), fallback_(fallback) {
    if (bin_count <= (std::uint64_t{1} << 24)) {
      dense_.assign(bin_count, fallback);
      for (std::size_t s = 0; s < bins.size(); ++s) dense_[bins[s]] = values[s];
    }
  }

  double operator()(std::uint64_t flat) const {
    if (!dense_.empty()) return flat < dense_.size() ? dense_[flat] : fallback_;
    auto it = std::lower_bound(bins_.begin(), bins_.end(), flat);
    if (it == bins_.end() || *it != flat) return fallback_;
    return values_[static_cast<std::size_t>(it - bins_.begin())];
  }

 private:
  std::span<const std::uint64_t> bins_;
  std::span<const double> values_;
  double fallback_;
  std::vector<double> dense_;
};

}  // namespace infosample::detail
