#pragma once

#include <cstdint>
#include <vector>

#include "infosample/grid.hpp"
#include "infosample/histogram.hpp"

namespace infosample {

/// How raw pointwise information maps onto [0, 1].
enum class Normalization {
  MinMax,    // (raw - min) / (max - min) over occupied bins; all 1 when max == min
  ClampMax,  // max(raw, 0) / max over occupied bins; all 0 when max <= 0
};

/// Per-bin pointwise information: PMI for d = 2, specific correlation for
/// d >= 3. Values are stored for occupied bins only, aligned with `bins`;
/// every empty bin has raw = normalized = 0.
struct PointInfoTable {
  std::vector<AxisBinning> axes;
  std::uint64_t bin_count = 0;
  std::vector<std::uint64_t> bins;
  std::vector<double> raw;
  std::vector<double> normalized;
  Normalization normalization = Normalization::MinMax;

  double raw_at(std::uint64_t flat) const;
  double normalized_at(std::uint64_t flat) const;
  /// Occupied bin with the largest raw value (lowest flat index on ties).
  std::uint64_t argmax() const;
  /// Expands to arrays over every bin; only sensible for small tables.
  std::vector<double> dense_raw() const;
  std::vector<double> dense_normalized() const;
};

/// raw(b) = log(p(b) / prod_k p_k(b_k)), natural log. Throws EmptyHistogram.
PointInfoTable pmi_table(const JointHistogram& h, Normalization norm = Normalization::MinMax);

/// Expected PMI; d = 2 only (WrongDimensionality otherwise).
double mutual_information(const JointHistogram& h);

/// Sum of p(b) * log(p(b) / prod_k p_k(b_k)) over occupied bins; d >= 2.
double total_correlation(const JointHistogram& h);

enum class FieldMode { Raw, Normalized };

/// Per-grid-point lookup of the table entry of each point's bin.
/// Throws SizeMismatch when the assignment does not cover dims.
Field pmi_field(const PointInfoTable& table, const BinAssignment& assign, const GridDims& dims,
                FieldMode mode = FieldMode::Raw);

}  // namespace infosample
