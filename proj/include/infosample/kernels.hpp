#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation and, where the target supports it, an AVX2 (x86-64) or
// NEON (aarch64) variant selected at runtime.
//
// Reductions accumulate into four lanes, element i going to lane i % 4, and
// combine as (l0 + l1) + (l2 + l3). All variants follow that order and the
// library is compiled without FP contraction, so every variant returns
// bit-identical results.

#include <cstddef>
#include <cstdint>
#include <span>

namespace infosample::kernels {

enum class Isa { Scalar, Avx2, Neon };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);

/// Best supported ISA, unless overridden by set_isa() or the
/// INFOSAMPLE_ISA environment variable (scalar|avx2|neon).
Isa active_isa();
/// Throws InvalidArgument if the ISA is not supported on this machine.
void set_isa(Isa isa);

struct Moments {
  double sum_a = 0, sum_b = 0, sum_aa = 0, sum_bb = 0, sum_ab = 0;
};

struct CrossSums {
  double ab = 0, aa = 0, bb = 0;
};

struct KernelTable {
  /// out[i] = clamp(floor((v[i] - lo) / width), 0, bins - 1); all zero when width == 0.
  void (*axis_bins)(const double* v, std::size_t n, double lo, double width, std::uint32_t bins,
                    std::uint32_t* out);
  /// out[i] = 1 when v[i] lies in the interval, else 0.
  void (*range_mask)(const double* v, std::size_t n, double lo, double hi, bool lo_inclusive,
                     bool hi_inclusive, std::uint8_t* out);
  /// Sum of (a[i] - b[i])^2.
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  /// Raw first and second moments of a pair of sequences.
  Moments (*moments)(const double* a, const double* b, std::size_t n);
  /// out[i] = clamp((v[i] - lo) / span, 0, 1).
  void (*normalize_clamp)(const double* v, std::size_t n, double lo, double span, double* out);
  /// Sum over j of |xi - x[j]|.
  double (*abs_diff_sum)(const double* x, std::size_t n, double xi);
  /// Double-centred distance products for one row i:
  ///   A_j = |xi - x[j]| - a[j] + sa,  B_j = |yi - y[j]| - b[j] + sb
  /// returns sums of A_j*B_j, A_j^2, B_j^2.
  CrossSums (*dcov_row)(const double* x, const double* a, double xi, double sa, const double* y,
                        const double* b, double yi, double sb, std::size_t n);
};

const KernelTable& table(Isa isa);
inline const KernelTable& active() { return table(active_isa()); }

// Convenience wrappers over the active table.
void axis_bins(std::span<const double> v, double lo, double width, std::uint32_t bins,
               std::span<std::uint32_t> out);
void range_mask(std::span<const double> v, double lo, double hi, bool lo_inclusive,
                bool hi_inclusive, std::span<std::uint8_t> out);
double sum_sq_diff(std::span<const double> a, std::span<const double> b);
Moments moments(std::span<const double> a, std::span<const double> b);
void normalize_clamp(std::span<const double> v, double lo, double span, std::span<double> out);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(INFOSAMPLE_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(INFOSAMPLE_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace infosample::kernels
