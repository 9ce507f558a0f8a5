#include "infosample/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "infosample/error.hpp"
#include "infosample/parallel.hpp"
#include "infosample/random.hpp"
#include "internal/bin_lookup.hpp"

namespace infosample {
namespace {

constexpr int kFixedPointSteps = 64;
constexpr std::size_t kChunks = 64;

double yield_at(double gamma, std::span<const double> w, std::span<const std::uint64_t> f) {
  double y = 0.0;
  for (std::size_t b = 0; b < w.size(); ++b) {
    y += std::min(1.0, gamma * w[b]) * static_cast<double>(f[b]);
  }
  return y;
}

// Keeps point i when keep(i) holds; chunk boundaries are fixed so the
// concatenated result is ascending and independent of the thread count.
template <typename Keep>
std::vector<std::uint64_t> select(std::uint64_t n, Keep&& keep) {
  std::vector<std::vector<std::uint64_t>> parts(std::min<std::size_t>(kChunks, std::max<std::uint64_t>(n, 1)));
  parallel_chunks(n, parts.size(), default_threads(),
                  [&](std::size_t c, std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i) {
                      if (keep(i)) parts[c].push_back(i);
                    }
                  });
  std::vector<std::uint64_t> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

SamplingFraction::SamplingFraction(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "sampling fraction must satisfy 0 < alpha < 1, got " + std::to_string(alpha));
  }
}

std::uint64_t SamplingFraction::target(std::uint64_t n) const noexcept {
  return static_cast<std::uint64_t>(std::floor(alpha_ * static_cast<double>(n) + 0.5));
}

double AcceptanceTable::at(std::uint64_t flat) const {
  auto it = std::lower_bound(bins.begin(), bins.end(), flat);
  if (it == bins.end() || *it != flat) return 0.0;
  return per_bin[static_cast<std::size_t>(it - bins.begin())];
}

AcceptanceTable calibrate(std::span<const double> w, std::span<const std::uint64_t> f,
                          std::uint64_t target) {
  if (w.size() != f.size()) throw SizeMismatchError(f.size(), w.size(), "acceptance weights");
  if (target == 0) throw Error(ErrorKind::InvalidArgument, "target sample count must be >= 1");
  double weighted = 0.0, positive_mass = 0.0, min_positive = 1.0;
  for (std::size_t b = 0; b < w.size(); ++b) {
    if (!(w[b] >= 0.0 && w[b] <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "acceptance weights must lie in [0, 1]");
    }
    weighted += w[b] * static_cast<double>(f[b]);
    if (w[b] > 0.0 && f[b] > 0) {
      positive_mass += static_cast<double>(f[b]);
      min_positive = std::min(min_positive, w[b]);
    }
  }
  const double n = static_cast<double>(target);
  if (n > positive_mass) {
    throw Error(ErrorKind::Unachievable,
                "target of " + std::to_string(target) + " points exceeds the " +
                    std::to_string(static_cast<std::uint64_t>(positive_mass)) +
                    " points in bins with nonzero acceptance");
  }

  AcceptanceTable acc;
  acc.target_count = target;
  double gamma = n / weighted;
  int steps = 0;
  for (; steps < kFixedPointSteps; ++steps) {
    double saturated = 0.0, unsaturated = 0.0;
    for (std::size_t b = 0; b < w.size(); ++b) {
      if (gamma * w[b] >= 1.0) {
        saturated += static_cast<double>(f[b]);
      } else {
        unsaturated += w[b] * static_cast<double>(f[b]);
      }
    }
    if (unsaturated == 0.0) break;
    const double next = (n - saturated) / unsaturated;
    if (!(next > gamma)) break;
    gamma = next;
  }
  acc.iterations = steps;

  if (std::fabs(yield_at(gamma, w, f) - n) > 1e-9 * n) {
    double lo = gamma, hi = 1.0 / min_positive;
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (yield_at(mid, w, f) < n ? lo : hi) = mid;
      ++acc.iterations;
    }
    gamma = std::fabs(yield_at(lo, w, f) - n) <= std::fabs(yield_at(hi, w, f) - n) ? lo : hi;
  }

  acc.gamma = gamma;
  acc.per_bin.resize(w.size());
  for (std::size_t b = 0; b < w.size(); ++b) acc.per_bin[b] = std::clamp(gamma * w[b], 0.0, 1.0);
  acc.expected_yield = yield_at(gamma, w, f);
  return acc;
}

AcceptanceTable build_acceptance(const PointInfoTable& table, const JointHistogram& h,
                                 SamplingFraction alpha) {
  if (table.bins != h.occupied_bins()) {
    throw Error(ErrorKind::InvalidArgument, "PMI table does not match the histogram");
  }
  const std::uint64_t target = alpha.target(h.total_count());
  if (target == 0) {
    throw Error(ErrorKind::InvalidArgument, "alpha * N rounds to zero sample points");
  }
  AcceptanceTable acc;
  const bool all_zero = std::all_of(table.normalized.begin(), table.normalized.end(),
                                    [](double v) { return v == 0.0; });
  if (all_zero) {
    acc.per_bin.assign(table.bins.size(), alpha.value());
    acc.target_count = target;
    acc.degenerate = true;
    acc.expected_yield = alpha.value() * static_cast<double>(h.total_count());
    acc.warnings.push_back("DegenerateTable: all normalized values are 0, using uniform alpha");
  } else {
    acc = calibrate(table.normalized, h.occupied_counts(), target);
  }
  acc.bin_count = h.bin_count();
  acc.bins = h.occupied_bins();
  acc.counts = h.occupied_counts();
  return acc;
}

std::vector<std::uint64_t> random_sample_indices(std::uint64_t n, SamplingFraction alpha,
                                                 std::uint64_t seed) {
  const rng::CounterRng rng(seed, rng::Stream::RandomSample);
  const double a = alpha.value();
  return select(n, [&](std::uint64_t i) { return rng.uniform(i) < a; });
}

std::vector<std::uint64_t> pmi_sample_indices(const BinAssignment& assign,
                                              const AcceptanceTable& acc, std::uint64_t seed,
                                              bool exact_quota) {
  const auto& bins = assign.per_point;
  const std::uint64_t n = bins.size();
  if (!exact_quota) {
    const detail::BinLookup prob(acc.bins, acc.per_bin, acc.bin_count);
    const rng::CounterRng rng(seed, rng::Stream::PmiSample);
    return select(n, [&](std::uint64_t i) { return rng.uniform(i) < prob(bins[i]); });
  }

  // Rank the points of each bin by hash key and keep the first quota.
  const rng::CounterRng rng(seed, rng::Stream::ExactQuota);
  std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> keyed(n);
  for (std::uint64_t i = 0; i < n; ++i) keyed[i] = {bins[i], rng.bits(i), i};
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  for (std::size_t s = 0; s < acc.bins.size(); ++s) {
    while (pos < n && std::get<0>(keyed[pos]) < acc.bins[s]) ++pos;
    const auto quota = static_cast<std::uint64_t>(
        std::floor(acc.per_bin[s] * static_cast<double>(acc.counts[s]) + 0.5));
    for (std::uint64_t q = 0; q < quota && pos < n && std::get<0>(keyed[pos]) == acc.bins[s];
         ++q, ++pos) {
      out.push_back(std::get<2>(keyed[pos]));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SampledPointSet random_sample(const MultiField& mf, SamplingFraction alpha, std::uint64_t seed) {
  const auto idx = random_sample_indices(mf.dims().count(), alpha, seed);
  return SampledPointSet::gather(mf, idx);
}

SampledPointSet pmi_sample(const MultiField& mf, const BinAssignment& assign,
                           const AcceptanceTable& acc, std::uint64_t seed, bool exact_quota) {
  if (assign.per_point.size() != mf.dims().count()) {
    throw SizeMismatchError(mf.dims().count(), assign.per_point.size(), "bin assignment");
  }
  const auto idx = pmi_sample_indices(assign, acc, seed, exact_quota);
  return SampledPointSet::gather(mf, idx);
}

}  // namespace infosample
