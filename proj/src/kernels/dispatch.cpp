#include <atomic>
#include <cstdlib>
#include <string>

#include "infosample/error.hpp"
#include "infosample/kernels.hpp"

namespace infosample::kernels {
namespace {

Isa detect_best() {
#if defined(INFOSAMPLE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
#if defined(INFOSAMPLE_HAVE_NEON)
  return Isa::Neon;
#endif
  return Isa::Scalar;
}

Isa initial_isa() {
  Isa best = detect_best();
  if (const char* env = std::getenv("INFOSAMPLE_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && isa_supported(Isa::Avx2)) return Isa::Avx2;
    if (want == "neon" && isa_supported(Isa::Neon)) return Isa::Neon;
  }
  return best;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(INFOSAMPLE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(INFOSAMPLE_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorKind::InvalidArgument, std::string("ISA not supported here: ") + isa_name(isa));
  }
  current().store(isa, std::memory_order_relaxed);
}

const KernelTable& table(Isa isa) {
  switch (isa) {
#if defined(INFOSAMPLE_HAVE_AVX2)
    case Isa::Avx2:
      if (isa_supported(Isa::Avx2)) return detail::kAvx2Table;
      break;
#endif
#if defined(INFOSAMPLE_HAVE_NEON)
    case Isa::Neon:
      return detail::kNeonTable;
#endif
    default:
      break;
  }
  return detail::kScalarTable;
}

void axis_bins(std::span<const double> v, double lo, double width, std::uint32_t bins,
               std::span<std::uint32_t> out) {
  active().axis_bins(v.data(), v.size(), lo, width, bins, out.data());
}

void range_mask(std::span<const double> v, double lo, double hi, bool lo_inclusive,
                bool hi_inclusive, std::span<std::uint8_t> out) {
  active().range_mask(v.data(), v.size(), lo, hi, lo_inclusive, hi_inclusive, out.data());
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
  return active().sum_sq_diff(a.data(), b.data(), a.size());
}

Moments moments(std::span<const double> a, std::span<const double> b) {
  return active().moments(a.data(), b.data(), a.size());
}

void normalize_clamp(std::span<const double> v, double lo, double span, std::span<double> out) {
  active().normalize_clamp(v.data(), v.size(), lo, span, out.data());
}

}  // namespace infosample::kernels
