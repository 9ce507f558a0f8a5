#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace infosample::detail {

using Coord3 = std::array<std::int64_t, 3>;

inline std::int64_t dist2(const Coord3& a, const Coord3& b) {
  const std::int64_t dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

// Static 3-D kd-tree over integer points. Distances are exact; equal
// distances are ordered by the caller-supplied key (the linear grid index).
class KdTree {
 public:
  struct Neighbor {
    std::size_t id;
    std::int64_t d2;
  };

  KdTree(std::vector<Coord3> points, std::vector<std::uint64_t> keys);

  std::size_t size() const noexcept { return points_.size(); }
  const Coord3& point(std::size_t id) const { return points_[id]; }

  /// Closest point; lowest key among equally close points.
  Neighbor nearest(const Coord3& q) const;
  /// The k closest points ordered by (distance, key).
  void k_nearest(const Coord3& q, std::size_t k, std::vector<Neighbor>& out) const;

 private:
  struct Node {
    std::size_t id;
    int axis;
    std::int32_t left = -1, right = -1;
  };

  std::int32_t build(std::size_t begin, std::size_t end, int depth);
  bool closer(const Neighbor& a, const Neighbor& b) const {
    return a.d2 < b.d2 || (a.d2 == b.d2 && keys_[a.id] < keys_[b.id]);
  }
  void search1(std::int32_t node, const Coord3& q, Neighbor& best) const;
  void searchk(std::int32_t node, const Coord3& q, std::size_t k, std::vector<Neighbor>& heap) const;

  std::vector<Coord3> points_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace infosample::detail
