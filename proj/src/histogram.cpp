#include "infosample/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "infosample/error.hpp"
#include "infosample/kernels.hpp"
#include "infosample/parallel.hpp"

namespace infosample {
namespace {

bool fits_dense(const std::vector<AxisBinning>& axes) {
  if (axes.size() > 3) return false;
  return std::all_of(axes.begin(), axes.end(), [](const AxisBinning& a) { return a.bins <= 128; });
}

std::uint64_t product_of_bins(const std::vector<AxisBinning>& axes) {
  std::uint64_t total = 1;
  for (const auto& a : axes) total *= a.bins;
  return total;
}

void check_axes(const std::vector<AxisBinning>& axes) {
  if (axes.empty()) throw Error(ErrorKind::InvalidArgument, "histogram needs at least one axis");
  for (const auto& a : axes) {
    if (a.bins == 0) throw Error(ErrorKind::InvalidArgument, "bin count must be >= 1");
    if (!(a.min_value <= a.max_value)) {
      throw Error(ErrorKind::InvalidArgument, "axis min exceeds max for " + a.variable);
    }
  }
}

}  // namespace

std::uint32_t AxisBinning::bin_of(double v) const noexcept {
  const double w = width();
  if (w == 0.0) return 0;
  double b = std::floor((v - min_value) / w);
  b = std::min(std::max(b, 0.0), static_cast<double>(bins - 1));
  return static_cast<std::uint32_t>(b);
}

double AxisBinning::center(std::uint32_t bin) const noexcept {
  return min_value + (bin + 0.5) * width();
}

JointHistogram JointHistogram::from_dense(std::vector<AxisBinning> axes,
                                          std::span<const std::uint64_t> counts) {
  check_axes(axes);
  JointHistogram h;
  h.axes_ = std::move(axes);
  h.bin_count_ = product_of_bins(h.axes_);
  if (counts.size() != h.bin_count_) {
    throw SizeMismatchError(h.bin_count_, counts.size(), "dense histogram counts");
  }
  h.dense_ = true;
  h.dense_counts_.assign(counts.begin(), counts.end());
  h.finish_occupied();
  return h;
}

JointHistogram JointHistogram::from_assignment(std::vector<AxisBinning> axes,
                                               std::span<const std::uint64_t> flat_bins,
                                               bool force_sparse) {
  check_axes(axes);
  JointHistogram h;
  h.axes_ = std::move(axes);
  h.bin_count_ = product_of_bins(h.axes_);
  h.dense_ = !force_sparse && fits_dense(h.axes_);
  if (h.dense_) {
    h.dense_counts_.assign(h.bin_count_, 0);
    for (std::uint64_t b : flat_bins) {
      if (b >= h.bin_count_) throw Error(ErrorKind::IndexOutOfRange, "flat bin out of range");
      ++h.dense_counts_[b];
    }
    h.finish_occupied();
    return h;
  }
  std::vector<std::uint64_t> sorted(flat_bins.begin(), flat_bins.end());
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.back() >= h.bin_count_) {
    throw Error(ErrorKind::IndexOutOfRange, "flat bin out of range");
  }
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    h.occupied_.push_back(sorted[i]);
    h.occupied_counts_.push_back(j - i);
    h.total_ += j - i;
    i = j;
  }
  return h;
}

void JointHistogram::finish_occupied() {
  occupied_.clear();
  occupied_counts_.clear();
  dense_slots_.assign(dense_counts_.size(), -1);
  total_ = 0;
  for (std::uint64_t b = 0; b < dense_counts_.size(); ++b) {
    if (dense_counts_[b] == 0) continue;
    dense_slots_[b] = static_cast<std::int64_t>(occupied_.size());
    occupied_.push_back(b);
    occupied_counts_.push_back(dense_counts_[b]);
    total_ += dense_counts_[b];
  }
}

std::int64_t JointHistogram::slot_of(std::uint64_t flat) const {
  if (flat >= bin_count_) throw Error(ErrorKind::IndexOutOfRange, "flat bin out of range");
  if (dense_) return dense_slots_[flat];
  auto it = std::lower_bound(occupied_.begin(), occupied_.end(), flat);
  if (it == occupied_.end() || *it != flat) return -1;
  return it - occupied_.begin();
}

std::uint64_t JointHistogram::count(std::uint64_t flat) const {
  const std::int64_t s = slot_of(flat);
  return s < 0 ? 0 : occupied_counts_[static_cast<std::size_t>(s)];
}

std::uint64_t JointHistogram::flatten(std::span<const std::uint32_t> coords) const {
  if (coords.size() != axes_.size()) {
    throw SizeMismatchError(axes_.size(), coords.size(), "bin coordinates");
  }
  std::uint64_t flat = 0;
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    if (coords[a] >= axes_[a].bins) throw Error(ErrorKind::IndexOutOfRange, "bin coordinate");
    flat = flat * axes_[a].bins + coords[a];
  }
  return flat;
}

std::vector<std::uint32_t> JointHistogram::unflatten(std::uint64_t flat) const {
  std::vector<std::uint32_t> coords(axes_.size());
  for (std::size_t a = axes_.size(); a-- > 0;) {
    coords[a] = static_cast<std::uint32_t>(flat % axes_[a].bins);
    flat /= axes_[a].bins;
  }
  return coords;
}

HistogramBuild build_joint(const MultiField& mf, const std::vector<std::string>& selected,
                           const HistogramOptions& options) {
  if (selected.empty()) throw Error(ErrorKind::InvalidArgument, "no variables selected");
  if (options.bins == 0) throw Error(ErrorKind::InvalidArgument, "bin count must be >= 1");
  std::vector<const Field*> fields;
  for (const auto& name : selected) fields.push_back(&mf.variable(name));
  const std::size_t d = selected.size();
  if (d > options.max_dims) {
    throw Error(ErrorKind::DimensionalityTooHigh,
                "d=" + std::to_string(d) + " exceeds dMax=" + std::to_string(options.max_dims));
  }
  // B^d * 8 bytes, saturating.
  std::uint64_t requested = 1;
  bool overflow = false;
  for (std::size_t a = 0; a < d; ++a) {
    if (requested > UINT64_MAX / options.bins) overflow = true;
    requested = overflow ? UINT64_MAX : requested * options.bins;
  }
  if (overflow || requested > options.memory_budget_bytes / 8) {
    throw Error(ErrorKind::MemoryBudgetExceeded,
                "requested " + (overflow ? std::string("> 2^64") : std::to_string(requested)) +
                    " bins exceeds the memory budget");
  }

  const std::size_t n = mf.dims().count();
  std::vector<AxisBinning> axes(d);
  for (std::size_t a = 0; a < d; ++a) {
    const auto& v = fields[a]->values;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    axes[a] = {selected[a], *lo, *hi, options.bins};
  }

  HistogramBuild out;
  auto& flat = out.assignment.per_point;
  flat.assign(n, 0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> bins(end - begin);
    for (std::size_t a = 0; a < d; ++a) {
      const auto& ax = axes[a];
      kernels::axis_bins(std::span(fields[a]->values).subspan(begin, end - begin), ax.min_value,
                         ax.width(), ax.bins, bins);
      for (std::size_t i = begin; i < end; ++i) flat[i] = flat[i] * ax.bins + bins[i - begin];
    }
  });
  out.histogram = JointHistogram::from_assignment(std::move(axes), flat);
  return out;
}

std::vector<std::uint64_t> marginal(const JointHistogram& h, std::size_t axis) {
  if (axis >= h.dims()) {
    throw Error(ErrorKind::AxisOutOfRange,
                "axis " + std::to_string(axis) + " of a " + std::to_string(h.dims()) + "-D histogram");
  }
  std::uint64_t stride = 1;
  for (std::size_t a = axis + 1; a < h.dims(); ++a) stride *= h.axes()[a].bins;
  const std::uint32_t bins = h.axes()[axis].bins;
  std::vector<std::uint64_t> m(bins, 0);
  const auto& occ = h.occupied_bins();
  const auto& cnt = h.occupied_counts();
  for (std::size_t s = 0; s < occ.size(); ++s) m[(occ[s] / stride) % bins] += cnt[s];
  return m;
}

Probabilities probabilities(const JointHistogram& h) {
  if (h.total_count() == 0) throw Error(ErrorKind::EmptyHistogram, "histogram has no counts");
  const double total = static_cast<double>(h.total_count());
  Probabilities p;
  p.joint.reserve(h.occupied_counts().size());
  for (std::uint64_t c : h.occupied_counts()) p.joint.push_back(static_cast<double>(c) / total);
  for (std::size_t a = 0; a < h.dims(); ++a) {
    std::vector<double> m;
    for (std::uint64_t c : marginal(h, a)) m.push_back(static_cast<double>(c) / total);
    p.marginals.push_back(std::move(m));
  }
  return p;
}

std::string histogram_csv(const JointHistogram& h) {
  std::ostringstream os;
  for (std::size_t a = 0; a < h.dims(); ++a) os << h.axes()[a].variable << ',';
  os << "count\n";
  const auto& occ = h.occupied_bins();
  for (std::size_t s = 0; s < occ.size(); ++s) {
    for (std::uint32_t c : h.unflatten(occ[s])) os << c << ',';
    os << h.occupied_counts()[s] << '\n';
  }
  return os.str();
}

}  // namespace infosample
