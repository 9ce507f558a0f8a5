#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "infosample/grid.hpp"

namespace infosample::synth {

/// Independent per-point background noise: uniform on [lo, hi], optionally
/// quantized to `levels` evenly spaced level centres (0 = continuous).
struct Background {
  double lo = 0.0;
  double hi = 1.0;
  std::uint32_t levels = 0;
};

struct VariableSpec {
  std::string name;
  Background background;
};

/// Ellipsoidal region where the listed variables co-occur in a narrow joint
/// band: value_k = values[k] + amplitude * cos(2*pi*dist/wavelength + phases[k])
/// + noise * U(-1, 1), with dist the Euclidean grid distance to the centre.
struct Feature {
  std::array<double, 3> center{0, 0, 0};
  std::array<double, 3> radii{1, 1, 1};
  std::vector<std::string> variables;
  std::vector<double> values;
  std::vector<double> phases;  // empty = all zero
  double amplitude = 0.0;
  double wavelength = 16.0;
  double noise = 0.0;

  bool contains(double x, double y, double z) const noexcept;
  /// Grid box strictly inside the ellipsoid: half-widths floor(scale * r / sqrt(3)).
  Box3 core_box(const GridDims& dims, double scale = 0.6) const;
};

struct SyntheticSpec {
  GridDims dims;
  std::vector<VariableSpec> variables;
  std::vector<Feature> features;

  /// Validates the spec; throws InvalidSpec.
  void validate() const;

  /// Two quantized-noise variables with one planted feature at the joint
  /// value extremes; the dataset the benchmarks and acceptance suite use.
  static SyntheticSpec feature_preset(std::uint32_t n = 64);
  /// Continuous independent uniform noise, no features.
  static SyntheticSpec independent_preset(std::uint32_t n = 64, std::size_t n_vars = 2);
};

/// Deterministic for a fixed (spec, seed). Values are rounded to f32 so that
/// brick and point-set storage is lossless.
MultiField make_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// 1 where the point lies inside feature `feature_index`.
std::vector<std::uint8_t> feature_mask(const SyntheticSpec& spec, std::size_t feature_index);

nlohmann::json to_json(const SyntheticSpec& spec);
SyntheticSpec spec_from_json(const nlohmann::json& j);

}  // namespace infosample::synth
