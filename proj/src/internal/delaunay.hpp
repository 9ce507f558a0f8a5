#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "internal/kdtree.hpp"

namespace infosample::detail {

using Int128 = __int128;

/// Sign of det[q - p, r - p, s - p]; positive when s lies on the positive
/// side of the oriented plane (p, q, r).
int orient3(const Coord3& p, const Coord3& q, const Coord3& r, const Coord3& s);
Int128 orient3_det(const Coord3& p, const Coord3& q, const Coord3& r, const Coord3& s);

/// Positive when t lies inside the sphere through p, q, r, s, given
/// orient3(p, q, r, s) > 0; zero when cospherical.
int in_sphere(const Coord3& p, const Coord3& q, const Coord3& r, const Coord3& s, const Coord3& t);

// Incremental Bowyer-Watson Delaunay tetrahedralization over integer
// coordinates (each axis below 2^20). Predicates are exact; degenerate
// (cospherical, coplanar-with-hull) configurations are resolved by symbolic
// perturbation ordered by the per-point key, so the result is a unique,
// valid triangulation. Cells keep their vertices positively oriented; the
// infinite vertex is -1 and the convex hull is closed by infinite cells.
class Delaunay3 {
 public:
  static constexpr int kInfinite = -1;
  static constexpr std::int64_t kMaxCoord = std::int64_t{1} << 20;

  struct Cell {
    std::array<int, 4> v{};
    std::array<int, 4> n{};
    bool alive = true;
    bool infinite() const { return v[0] < 0 || v[1] < 0 || v[2] < 0 || v[3] < 0; }
  };

  Delaunay3(std::vector<Coord3> points, std::vector<std::uint64_t> keys);

  /// Affine dimension of the input (0..3). No cells exist below 3.
  int dimension() const noexcept { return dimension_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const Coord3& point(int id) const { return points_[static_cast<std::size_t>(id)]; }
  std::size_t point_count() const noexcept { return points_.size(); }
  std::size_t finite_cell_count() const;

  /// Walks from `hint` to the finite cell containing q (closed), returning
  /// its index, or -1 when q lies outside the convex hull. `hint` is
  /// updated to the last finite cell visited.
  int locate(const Coord3& q, int& hint, std::uint64_t salt) const;

  /// Barycentric weights of q in finite cell c from exact sub-volumes.
  std::array<double, 4> barycentric(int c, const Coord3& q) const;

  /// Any alive finite cell, for seeding walks.
  int any_finite_cell() const;

  /// Checks orientation, adjacency and the empty-sphere property by brute
  /// force; returns an empty string when valid. Intended for tests.
  std::string validate() const;

 private:
  void insert(int vid);
  bool in_conflict(int c, int vid) const;
  int side_of_oriented_sphere(const std::array<int, 4>& v, int p) const;
  int coplanar_side_of_bounded_circle(int a, int b, int c, int p) const;
  int coplanar_orientation(int a, int b, int c) const;
  bool precedes(int a, int b) const;
  int walk(const Coord3& q, int start, std::uint64_t salt, int& last_finite) const;
  int new_cell(const std::array<int, 4>& v);
  void link_new_cells(const std::vector<int>& created, int vid);

  std::vector<Coord3> points_;
  std::vector<std::uint64_t> keys_;
  std::vector<Cell> cells_;
  std::vector<int> free_;
  int dimension_ = 0;
  int hint_ = 0;
  mutable std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

}  // namespace infosample::detail
