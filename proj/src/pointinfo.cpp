#include "infosample/pointinfo.hpp"

#include <algorithm>
#include <cmath>

#include "infosample/error.hpp"
#include "infosample/parallel.hpp"
#include "internal/bin_lookup.hpp"

namespace infosample {
namespace {

double lookup(const PointInfoTable& t, const std::vector<double>& values, std::uint64_t flat) {
  auto it = std::lower_bound(t.bins.begin(), t.bins.end(), flat);
  if (it == t.bins.end() || *it != flat) return 0.0;
  return values[static_cast<std::size_t>(it - t.bins.begin())];
}

std::vector<double> expand(const PointInfoTable& t, const std::vector<double>& values) {
  std::vector<double> out(t.bin_count, 0.0);
  for (std::size_t s = 0; s < t.bins.size(); ++s) out[t.bins[s]] = values[s];
  return out;
}

// Per-axis log marginal counts and the per-occupied-bin sum of them. The
// terms are summed in ascending order so the result does not depend on the
// order in which the variables were listed.
std::vector<double> log_marginal_sums(const JointHistogram& h) {
  std::vector<std::vector<double>> logm(h.dims());
  for (std::size_t a = 0; a < h.dims(); ++a) {
    for (std::uint64_t c : marginal(h, a)) logm[a].push_back(c ? std::log(static_cast<double>(c)) : 0.0);
  }
  std::vector<double> sums;
  sums.reserve(h.occupied_bins().size());
  std::vector<double> terms(h.dims());
  for (std::uint64_t flat : h.occupied_bins()) {
    const auto coords = h.unflatten(flat);
    for (std::size_t a = 0; a < h.dims(); ++a) terms[a] = logm[a][coords[a]];
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += t;
    sums.push_back(s);
  }
  return sums;
}

}  // namespace

double PointInfoTable::raw_at(std::uint64_t flat) const { return lookup(*this, raw, flat); }

double PointInfoTable::normalized_at(std::uint64_t flat) const {
  return lookup(*this, normalized, flat);
}

std::uint64_t PointInfoTable::argmax() const {
  if (bins.empty()) throw Error(ErrorKind::EmptyHistogram, "table has no occupied bins");
  std::size_t best = 0;
  for (std::size_t s = 1; s < raw.size(); ++s) {
    if (raw[s] > raw[best]) best = s;
  }
  return bins[best];
}

std::vector<double> PointInfoTable::dense_raw() const { return expand(*this, raw); }
std::vector<double> PointInfoTable::dense_normalized() const { return expand(*this, normalized); }

PointInfoTable pmi_table(const JointHistogram& h, Normalization norm) {
  if (h.total_count() == 0) throw Error(ErrorKind::EmptyHistogram, "histogram has no counts");
  PointInfoTable t;
  t.axes = h.axes();
  t.bin_count = h.bin_count();
  t.bins = h.occupied_bins();
  t.normalization = norm;

  // log(f/N) - sum_k log(m_k/N) = log f - sum_k log m_k + (d-1) log N
  const double offset = static_cast<double>(h.dims() - 1) * std::log(static_cast<double>(h.total_count()));
  const auto sums = log_marginal_sums(h);
  const auto& counts = h.occupied_counts();
  t.raw.resize(counts.size());
  for (std::size_t s = 0; s < counts.size(); ++s) {
    t.raw[s] = (std::log(static_cast<double>(counts[s])) + offset) - sums[s];
  }

  t.normalized.assign(t.raw.size(), 0.0);
  const auto [lo_it, hi_it] = std::minmax_element(t.raw.begin(), t.raw.end());
  const double lo = *lo_it, hi = *hi_it;
  if (norm == Normalization::MinMax) {
    if (hi == lo) {
      std::fill(t.normalized.begin(), t.normalized.end(), 1.0);
    } else {
      for (std::size_t s = 0; s < t.raw.size(); ++s) t.normalized[s] = (t.raw[s] - lo) / (hi - lo);
    }
  } else if (hi > 0.0) {
    for (std::size_t s = 0; s < t.raw.size(); ++s) t.normalized[s] = std::max(t.raw[s], 0.0) / hi;
  }
  return t;
}

double mutual_information(const JointHistogram& h) {
  if (h.dims() != 2) {
    throw Error(ErrorKind::WrongDimensionality,
                "mutual information needs d=2, got d=" + std::to_string(h.dims()));
  }
  const auto t = pmi_table(h);
  const double total = static_cast<double>(h.total_count());
  double mi = 0.0;
  for (std::size_t s = 0; s < t.raw.size(); ++s) {
    mi += static_cast<double>(h.occupied_counts()[s]) / total * t.raw[s];
  }
  return mi;
}

double total_correlation(const JointHistogram& h) {
  if (h.dims() < 2) {
    throw Error(ErrorKind::WrongDimensionality,
                "total correlation needs d>=2, got d=" + std::to_string(h.dims()));
  }
  const auto p = probabilities(h);
  double tc = 0.0;
  std::vector<double> terms(h.dims());
  for (std::size_t s = 0; s < p.joint.size(); ++s) {
    const auto coords = h.unflatten(h.occupied_bins()[s]);
    for (std::size_t a = 0; a < h.dims(); ++a) terms[a] = std::log(p.marginals[a][coords[a]]);
    std::sort(terms.begin(), terms.end());
    double sum_log_marginals = 0.0;
    for (double t : terms) sum_log_marginals += t;
    tc += p.joint[s] * (std::log(p.joint[s]) - sum_log_marginals);
  }
  return tc;
}

Field pmi_field(const PointInfoTable& table, const BinAssignment& assign, const GridDims& dims,
                FieldMode mode) {
  if (assign.per_point.size() != dims.count()) {
    throw SizeMismatchError(dims.count(), assign.per_point.size(), "bin assignment");
  }
  const auto& values = mode == FieldMode::Raw ? table.raw : table.normalized;
  const detail::BinLookup look(table.bins, values, table.bin_count);
  std::vector<double> out(assign.per_point.size());
  parallel_for(out.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = look(assign.per_point[i]);
  });
  return Field(mode == FieldMode::Raw ? "pmi" : "pmi_normalized", dims, std::move(out));
}

}  // namespace infosample
