// AVX2 kernels. Compiled with -mavx2 and only called after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "infosample/kernels.hpp"

namespace infosample::kernels {
namespace {

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline void spill(__m256d v, double (&acc)[4]) { _mm256_storeu_pd(acc, v); }

inline double combine(const double (&acc)[4]) { return (acc[0] + acc[1]) + (acc[2] + acc[3]); }

void axis_bins_avx2(const double* v, std::size_t n, double lo, double width, std::uint32_t bins,
                    std::uint32_t* out) {
  if (width == 0.0) {
    std::fill(out, out + n, 0u);
    return;
  }
  const double top = static_cast<double>(bins - 1);
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vw = _mm256_set1_pd(width);
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vtop = _mm256_set1_pd(top);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d b = _mm256_floor_pd(_mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), vlo), vw));
    b = _mm256_min_pd(_mm256_max_pd(b, vzero), vtop);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), _mm256_cvttpd_epi32(b));
  }
  for (; i < n; ++i) {
    double b = std::floor((v[i] - lo) / width);
    b = std::min(std::max(b, 0.0), top);
    out[i] = static_cast<std::uint32_t>(b);
  }
}

void range_mask_avx2(const double* v, std::size_t n, double lo, double hi, bool lo_incl,
                     bool hi_incl, std::uint8_t* out) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    const __m256d above = lo_incl ? _mm256_cmp_pd(x, vlo, _CMP_GE_OQ) : _mm256_cmp_pd(x, vlo, _CMP_GT_OQ);
    const __m256d below = hi_incl ? _mm256_cmp_pd(x, vhi, _CMP_LE_OQ) : _mm256_cmp_pd(x, vhi, _CMP_LT_OQ);
    const int bits = _mm256_movemask_pd(_mm256_and_pd(above, below));
    out[i + 0] = static_cast<std::uint8_t>(bits & 1);
    out[i + 1] = static_cast<std::uint8_t>((bits >> 1) & 1);
    out[i + 2] = static_cast<std::uint8_t>((bits >> 2) & 1);
    out[i + 3] = static_cast<std::uint8_t>((bits >> 3) & 1);
  }
  for (; i < n; ++i) {
    const bool above = lo_incl ? v[i] >= lo : v[i] > lo;
    const bool below = hi_incl ? v[i] <= hi : v[i] < hi;
    out[i] = static_cast<std::uint8_t>(above && below);
  }
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double lanes[4];
  spill(acc, lanes);
  for (std::size_t l = 0; i < n; ++i, ++l) {
    const double d = a[i] - b[i];
    lanes[l] += d * d;
  }
  return combine(lanes);
}

Moments moments_avx2(const double* a, const double* b, std::size_t n) {
  __m256d sa = _mm256_setzero_pd(), sb = sa, saa = sa, sbb = sa, sab = sa;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(a + i);
    const __m256d y = _mm256_loadu_pd(b + i);
    sa = _mm256_add_pd(sa, x);
    sb = _mm256_add_pd(sb, y);
    saa = _mm256_add_pd(saa, _mm256_mul_pd(x, x));
    sbb = _mm256_add_pd(sbb, _mm256_mul_pd(y, y));
    sab = _mm256_add_pd(sab, _mm256_mul_pd(x, y));
  }
  double la[4], lb[4], laa[4], lbb[4], lab[4];
  spill(sa, la);
  spill(sb, lb);
  spill(saa, laa);
  spill(sbb, lbb);
  spill(sab, lab);
  for (std::size_t l = 0; i < n; ++i, ++l) {
    la[l] += a[i];
    lb[l] += b[i];
    laa[l] += a[i] * a[i];
    lbb[l] += b[i] * b[i];
    lab[l] += a[i] * b[i];
  }
  return {combine(la), combine(lb), combine(laa), combine(lbb), combine(lab)};
}

void normalize_clamp_avx2(const double* v, std::size_t n, double lo, double span, double* out) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vspan = _mm256_set1_pd(span);
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vone = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), vlo), vspan);
    t = _mm256_min_pd(_mm256_max_pd(t, vzero), vone);
    _mm256_storeu_pd(out + i, t);
  }
  for (; i < n; ++i) {
    const double t = (v[i] - lo) / span;
    out[i] = std::min(std::max(t, 0.0), 1.0);
  }
}

double abs_diff_sum_avx2(const double* x, std::size_t n, double xi) {
  const __m256d vxi = _mm256_set1_pd(xi);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    acc = _mm256_add_pd(acc, vabs(_mm256_sub_pd(vxi, _mm256_loadu_pd(x + j))));
  }
  double lanes[4];
  spill(acc, lanes);
  for (std::size_t l = 0; j < n; ++j, ++l) lanes[l] += std::fabs(xi - x[j]);
  return combine(lanes);
}

CrossSums dcov_row_avx2(const double* x, const double* a, double xi, double sa, const double* y,
                        const double* b, double yi, double sb, std::size_t n) {
  const __m256d vxi = _mm256_set1_pd(xi), vyi = _mm256_set1_pd(yi);
  const __m256d vsa = _mm256_set1_pd(sa), vsb = _mm256_set1_pd(sb);
  __m256d ab = _mm256_setzero_pd(), aa = ab, bb = ab;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d A = _mm256_add_pd(
        _mm256_sub_pd(vabs(_mm256_sub_pd(vxi, _mm256_loadu_pd(x + j))), _mm256_loadu_pd(a + j)), vsa);
    const __m256d B = _mm256_add_pd(
        _mm256_sub_pd(vabs(_mm256_sub_pd(vyi, _mm256_loadu_pd(y + j))), _mm256_loadu_pd(b + j)), vsb);
    ab = _mm256_add_pd(ab, _mm256_mul_pd(A, B));
    aa = _mm256_add_pd(aa, _mm256_mul_pd(A, A));
    bb = _mm256_add_pd(bb, _mm256_mul_pd(B, B));
  }
  double lab[4], laa[4], lbb[4];
  spill(ab, lab);
  spill(aa, laa);
  spill(bb, lbb);
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
const KernelTable kAvx2Table = {
    axis_bins_avx2,       range_mask_avx2,   sum_sq_diff_avx2, moments_avx2,
    normalize_clamp_avx2, abs_diff_sum_avx2, dcov_row_avx2,
};
}  // namespace detail

}  // namespace infosample::kernels
