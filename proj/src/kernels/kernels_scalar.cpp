// Scalar reference kernels. The SIMD variants must match these bit-for-bit.

#include <algorithm>
#include <cmath>

#include "infosample/kernels.hpp"

namespace infosample::kernels {
namespace {

inline double combine(const double (&acc)[4]) { return (acc[0] + acc[1]) + (acc[2] + acc[3]); }

void axis_bins_scalar(const double* v, std::size_t n, double lo, double width,
                      std::uint32_t bins, std::uint32_t* out) {
  if (width == 0.0) {
    std::fill(out, out + n, 0u);
    return;
  }
  const double top = static_cast<double>(bins - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double b = std::floor((v[i] - lo) / width);
    b = std::min(std::max(b, 0.0), top);
    out[i] = static_cast<std::uint32_t>(b);
  }
}

void range_mask_scalar(const double* v, std::size_t n, double lo, double hi, bool lo_incl,
                       bool hi_incl, std::uint8_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const bool above = lo_incl ? v[i] >= lo : v[i] > lo;
    const bool below = hi_incl ? v[i] <= hi : v[i] < hi;
    out[i] = static_cast<std::uint8_t>(above && below);
  }
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc[i % 4] += d * d;
  }
  return combine(acc);
}

Moments moments_scalar(const double* a, const double* b, std::size_t n) {
  double sa[4] = {}, sb[4] = {}, saa[4] = {}, sbb[4] = {}, sab[4] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = i % 4;
    sa[l] += a[i];
    sb[l] += b[i];
    saa[l] += a[i] * a[i];
    sbb[l] += b[i] * b[i];
    sab[l] += a[i] * b[i];
  }
  return {combine(sa), combine(sb), combine(saa), combine(sbb), combine(sab)};
}

void normalize_clamp_scalar(const double* v, std::size_t n, double lo, double span, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (v[i] - lo) / span;
    out[i] = std::min(std::max(t, 0.0), 1.0);
  }
}

double abs_diff_sum_scalar(const double* x, std::size_t n, double xi) {
  double acc[4] = {0, 0, 0, 0};
  for (std::size_t j = 0; j < n; ++j) acc[j % 4] += std::fabs(xi - x[j]);
  return combine(acc);
}

CrossSums dcov_row_scalar(const double* x, const double* a, double xi, double sa, const double* y,
                          const double* b, double yi, double sb, std::size_t n) {
  double ab[4] = {}, aa[4] = {}, bb[4] = {};
  for (std::size_t j = 0; j < n; ++j) {
    const double A = (std::fabs(xi - x[j]) - a[j]) + sa;
    const double B = (std::fabs(yi - y[j]) - b[j]) + sb;
    const std::size_t l = j % 4;
    ab[l] += A * B;
    aa[l] += A * A;
    bb[l] += B * B;
  }
  return {combine(ab), combine(aa), combine(bb)};
}

}  // namespace

namespace detail {
const KernelTable kScalarTable = {
    axis_bins_scalar,       range_mask_scalar,   sum_sq_diff_scalar, moments_scalar,
    normalize_clamp_scalar, abs_diff_sum_scalar, dcov_row_scalar,
};
}  // namespace detail

}  // namespace infosample::kernels
