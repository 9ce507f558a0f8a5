#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infosample/grid.hpp"

namespace infosample {

struct ReconstructionMode {
  enum class Kind {
    DelaunayLinear,   // barycentric interpolation in the Delaunay tetrahedralization
    ShepardIDW,       // inverse-distance weighting of the k nearest samples
    NearestNeighbor,  // closest sample, lowest linear index on ties
    LinearSegment,    // piecewise-linear along a line, for collinear samples
  };
  Kind kind = Kind::DelaunayLinear;
  std::uint32_t k = 8;
  double power = 2.0;

  static ReconstructionMode delaunay() { return {}; }
  static ReconstructionMode idw(std::uint32_t k = 8, double power = 2.0) {
    return {Kind::ShepardIDW, k, power};
  }
  static ReconstructionMode nearest() { return {Kind::NearestNeighbor}; }
  static ReconstructionMode linear_segment() { return {Kind::LinearSegment}; }
};

const char* to_string(ReconstructionMode::Kind kind);
/// Parses delaunay|idw|nearest|segment; throws InvalidArgument.
ReconstructionMode::Kind parse_reconstruction_kind(const std::string& name);

struct Reconstruction {
  Field field;
  /// Mode actually used, after any degenerate-geometry fallback.
  ReconstructionMode effective;
  std::vector<std::string> warnings;
};

/// Rebuilds `variable` on every point of `dims` from the samples.
/// Points outside the convex hull (DelaunayLinear) or off the sample line
/// (LinearSegment) take the nearest sample's value. Under DelaunayLinear,
/// collinear samples switch to LinearSegment and coplanar samples to
/// ShepardIDW (k=8, power=2), each with a DegenerateGeometry warning.
/// Throws UnknownVariable, GridMismatch, InvalidArgument (no samples, bad
/// k/power, non-collinear samples for LinearSegment).
Reconstruction reconstruct(const SampledPointSet& ps, const std::string& variable,
                           const GridDims& dims, ReconstructionMode mode = {});

/// Reconstructs several variables sharing one triangulation / neighbour search.
std::vector<Reconstruction> reconstruct(const SampledPointSet& ps,
                                        const std::vector<std::string>& variables,
                                        const GridDims& dims, ReconstructionMode mode = {});

}  // namespace infosample
