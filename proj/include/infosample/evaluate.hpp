#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infosample/grid.hpp"

namespace infosample {

enum class Axis { X = 0, Y = 1, Z = 2 };

/// Parses "x", "y" or "z"; throws InvalidArgument.
Axis parse_axis(const std::string& text);

/// Slice position, written "axis:index" (e.g. "z:32").
struct SliceSpec {
  Axis axis = Axis::Z;
  std::uint32_t index = 0;
};
/// Throws InvalidArgument.
SliceSpec parse_slice(const std::string& text);

/// Grayscale image, row-major, pixels in [0, 1].
struct RasterImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<double> pixels;

  double at(std::uint32_t x, std::uint32_t y) const { return pixels[std::size_t{y} * width + x]; }
  /// Inclusive pixel rectangle; throws IndexOutOfRange.
  RasterImage crop(std::uint32_t x0, std::uint32_t y0, std::uint32_t x1, std::uint32_t y1) const;
};

/// Inclusive axis-aligned grid box.
using RegionOfInterest = Box3;

/// Parses "x0:x1,y0:y1,z0:z1" (inclusive). Throws InvalidArgument.
RegionOfInterest parse_roi(const std::string& text);

/// Clips the box to the grid; throws EmptyROI when they do not intersect.
RegionOfInterest clip_roi(const RegionOfInterest& roi, const GridDims& dims);

/// 2-D slice through the field, values mapped linearly onto [0, 1] with
/// clamping. Slice orientation: z -> (x, y), y -> (x, z), x -> (y, z), the
/// first named coordinate running along image rows.
/// Throws IndexOutOfRange, InvalidArgument (lo >= hi).
RasterImage rasterize_slice(const Field& f, Axis axis, std::uint32_t index, double lo, double hi);

/// Projection of an ROI box onto a slice, as an inclusive pixel rectangle.
struct PixelRect {
  std::uint32_t x0, y0, x1, y1;
};
PixelRect roi_on_slice(const RegionOfInterest& roi, Axis axis);

struct SsimParams {
  std::uint32_t window = 8;
  double c1 = 0.01 * 0.01;
  double c2 = 0.03 * 0.03;
};

/// Mean SSIM over non-overlapping window x window patches (edge remainders
/// skipped), exponents 1 and C3 = C2/2. Throws DimensionMismatch, TooSmall.
double ssim(const RasterImage& a, const RasterImage& b, const SsimParams& params = {});

/// Mean squared difference. Throws DimensionMismatch.
double mse(std::span<const double> a, std::span<const double> b);
double mse(const RasterImage& a, const RasterImage& b);
double mse(const Field& a, const Field& b, const std::optional<RegionOfInterest>& roi = {});

/// Sample Pearson correlation over the ROI (whole grid when absent).
/// Throws DimensionMismatch, EmptyROI (< 2 points), ZeroVariance.
double pearson(const Field& x, const Field& y, const std::optional<RegionOfInterest>& roi = {});
double pearson(std::span<const double> x, std::span<const double> y);

inline constexpr std::size_t kDefaultDcorPoints = 4096;
inline constexpr std::uint64_t kDefaultDcorSeed = 20240917;

/// Szekely sample distance correlation (V-statistic) over the ROI. When the
/// ROI holds more than max_points points, the max_points with the smallest
/// hash keys (seeded, per linear index) are used. Returns 0 when either
/// variable is constant. Throws DimensionMismatch, EmptyROI (< 2 points).
double distance_correlation(const Field& x, const Field& y,
                            const std::optional<RegionOfInterest>& roi = {},
                            std::size_t max_points = kDefaultDcorPoints,
                            std::uint64_t seed = kDefaultDcorSeed);
double distance_correlation(std::span<const double> x, std::span<const double> y);

/// Writes an 8-bit grayscale PNG (pixel value * 255, rounded). Throws Io.
void write_png(const RasterImage& image, const std::string& path);

}  // namespace infosample
