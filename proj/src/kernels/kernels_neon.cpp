// NEON (aarch64) kernels. Two float64x2 registers hold lanes {0,1} and {2,3}
// so the reduction order matches the scalar reference.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "infosample/kernels.hpp"

namespace infosample::kernels {
namespace {

struct Acc4 {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  void spill(double (&out)[4]) const {
    vst1q_f64(out, lo);
    vst1q_f64(out + 2, hi);
  }
};

inline double combine(const double (&acc)[4]) { return (acc[0] + acc[1]) + (acc[2] + acc[3]); }

void axis_bins_neon(const double* v, std::size_t n, double lo, double width, std::uint32_t bins,
                    std::uint32_t* out) {
  if (width == 0.0) {
    std::fill(out, out + n, 0u);
    return;
  }
  const double top = static_cast<double>(bins - 1);
  const float64x2_t vlo = vdupq_n_f64(lo), vw = vdupq_n_f64(width);
  const float64x2_t vzero = vdupq_n_f64(0.0), vtop = vdupq_n_f64(top);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t b = vrndmq_f64(vdivq_f64(vsubq_f64(vld1q_f64(v + i), vlo), vw));
    b = vminq_f64(vmaxq_f64(b, vzero), vtop);
    const uint64x2_t u = vcvtq_u64_f64(b);
    out[i] = static_cast<std::uint32_t>(vgetq_lane_u64(u, 0));
    out[i + 1] = static_cast<std::uint32_t>(vgetq_lane_u64(u, 1));
  }
  for (; i < n; ++i) {
    double b = std::floor((v[i] - lo) / width);
    b = std::min(std::max(b, 0.0), top);
    out[i] = static_cast<std::uint32_t>(b);
  }
}

void range_mask_neon(const double* v, std::size_t n, double lo, double hi, bool lo_incl,
                     bool hi_incl, std::uint8_t* out) {
  const float64x2_t vlo = vdupq_n_f64(lo), vhi = vdupq_n_f64(hi);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(v + i);
    const uint64x2_t above = lo_incl ? vcgeq_f64(x, vlo) : vcgtq_f64(x, vlo);
    const uint64x2_t below = hi_incl ? vcleq_f64(x, vhi) : vcltq_f64(x, vhi);
    const uint64x2_t m = vandq_u64(above, below);
    out[i] = static_cast<std::uint8_t>(vgetq_lane_u64(m, 0) & 1);
    out[i + 1] = static_cast<std::uint8_t>(vgetq_lane_u64(m, 1) & 1);
  }
  for (; i < n; ++i) {
    const bool above = lo_incl ? v[i] >= lo : v[i] > lo;
    const bool below = hi_incl ? v[i] <= hi : v[i] < hi;
    out[i] = static_cast<std::uint8_t>(above && below);
  }
}

double sum_sq_diff_neon(const double* a, const double* b, std::size_t n) {
  Acc4 acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc.lo = vaddq_f64(acc.lo, vmulq_f64(d0, d0));
    acc.hi = vaddq_f64(acc.hi, vmulq_f64(d1, d1));
  }
  double lanes[4];
  acc.spill(lanes);
  for (std::size_t l = 0; i < n; ++i, ++l) {
    const double d = a[i] - b[i];
    lanes[l] += d * d;
  }
  return combine(lanes);
}

Moments moments_neon(const double* a, const double* b, std::size_t n) {
  Acc4 sa, sb, saa, sbb, sab;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int h = 0; h < 2; ++h) {
      const float64x2_t x = vld1q_f64(a + i + 2 * h);
      const float64x2_t y = vld1q_f64(b + i + 2 * h);
      float64x2_t& ra = h ? sa.hi : sa.lo;
      float64x2_t& rb = h ? sb.hi : sb.lo;
      float64x2_t& raa = h ? saa.hi : saa.lo;
      float64x2_t& rbb = h ? sbb.hi : sbb.lo;
      float64x2_t& rab = h ? sab.hi : sab.lo;
      ra = vaddq_f64(ra, x);
      rb = vaddq_f64(rb, y);
      raa = vaddq_f64(raa, vmulq_f64(x, x));
      rbb = vaddq_f64(rbb, vmulq_f64(y, y));
      rab = vaddq_f64(rab, vmulq_f64(x, y));
    }
  }
  double la[4], lb[4], laa[4], lbb[4], lab[4];
  sa.spill(la);
  sb.spill(lb);
  saa.spill(laa);
  sbb.spill(lbb);
  sab.spill(lab);
  for (std::size_t l = 0; i < n; ++i, ++l) {
    la[l] += a[i];
    lb[l] += b[i];
    laa[l] += a[i] * a[i];
    lbb[l] += b[i] * b[i];
    lab[l] += a[i] * b[i];
  }
  return {combine(la), combine(lb), combine(laa), combine(lbb), combine(lab)};
}

void normalize_clamp_neon(const double* v, std::size_t n, double lo, double span, double* out) {
  const float64x2_t vlo = vdupq_n_f64(lo), vspan = vdupq_n_f64(span);
  const float64x2_t vzero = vdupq_n_f64(0.0), vone = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t t = vdivq_f64(vsubq_f64(vld1q_f64(v + i), vlo), vspan);
    vst1q_f64(out + i, vminq_f64(vmaxq_f64(t, vzero), vone));
  }
  for (; i < n; ++i) {
    const double t = (v[i] - lo) / span;
    out[i] = std::min(std::max(t, 0.0), 1.0);
  }
}

double abs_diff_sum_neon(const double* x, std::size_t n, double xi) {
  const float64x2_t vxi = vdupq_n_f64(xi);
  Acc4 acc;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    acc.lo = vaddq_f64(acc.lo, vabsq_f64(vsubq_f64(vxi, vld1q_f64(x + j))));
    acc.hi = vaddq_f64(acc.hi, vabsq_f64(vsubq_f64(vxi, vld1q_f64(x + j + 2))));
  }
  double lanes[4];
  acc.spill(lanes);
  for (std::size_t l = 0; j < n; ++j, ++l) lanes[l] += std::fabs(xi - x[j]);
  return combine(lanes);
}

CrossSums dcov_row_neon(const double* x, const double* a, double xi, double sa, const double* y,
                        const double* b, double yi, double sb, std::size_t n) {
  const float64x2_t vxi = vdupq_n_f64(xi), vyi = vdupq_n_f64(yi);
  const float64x2_t vsa = vdupq_n_f64(sa), vsb = vdupq_n_f64(sb);
  Acc4 ab, aa, bb;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    for (int h = 0; h < 2; ++h) {
      const std::size_t o = j + 2 * h;
      const float64x2_t A = vaddq_f64(
          vsubq_f64(vabsq_f64(vsubq_f64(vxi, vld1q_f64(x + o))), vld1q_f64(a + o)), vsa);
      const float64x2_t B = vaddq_f64(
          vsubq_f64(vabsq_f64(vsubq_f64(vyi, vld1q_f64(y + o))), vld1q_f64(b + o)), vsb);
      float64x2_t& rab = h ? ab.hi : ab.lo;
      float64x2_t& raa = h ? aa.hi : aa.lo;
      float64x2_t& rbb = h ? bb.hi : bb.lo;
      rab = vaddq_f64(rab, vmulq_f64(A, B));
      raa = vaddq_f64(raa, vmulq_f64(A, A));
      rbb = vaddq_f64(rbb, vmulq_f64(B, B));
    }
  }
  double lab[4], laa[4], lbb[4];
  ab.spill(lab);
  aa.spill(laa);
  bb.spill(lbb);
  for (std::size_t l = 0; j < n; ++j, ++l) {
    const double A = (std::fabs(xi - x[j]) - a[j]) + sa;
    const double B = (std::fabs(yi - y[j]) - b[j]) + sb;
    lab[l] += A * B;
    laa[l] += A * A;
    lbb[l] += B * B;
  }
  return {combine(lab), combine(laa), combine(lbb)};
}

}  // namespace

namespace detail {
const KernelTable kNeonTable = {
    axis_bins_neon,       range_mask_neon,   sum_sq_diff_neon, moments_neon,
    normalize_clamp_neon, abs_diff_sum_neon, dcov_row_neon,
};
}  // namespace detail

}  // namespace infosample::kernels
