#include "internal/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace infosample::detail {

KdTree::KdTree(std::vector<Coord3> points, std::vector<std::uint64_t> keys)
    : points_(std::move(points)), keys_(std::move(keys)) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  nodes_.reserve(points_.size());
  root_ = build(0, order_.size(), 0);
}

std::int32_t KdTree::build(std::size_t begin, std::size_t end, int depth) {
  if (begin >= end) return -1;
  // Split on the axis of largest extent.
  Coord3 lo = points_[order_[begin]], hi = lo;
  for (std::size_t i = begin; i < end; ++i) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], points_[order_[i]][a]);
      hi[a] = std::max(hi[a], points_[order_[i]][a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::size_t a, std::size_t b) {
                     if (points_[a][axis] != points_[b][axis]) return points_[a][axis] < points_[b][axis];
                     return keys_[a] < keys_[b];
                   });
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({order_[mid], axis});
  const std::int32_t left = build(begin, mid, depth + 1);
  const std::int32_t right = build(mid + 1, end, depth + 1);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

void KdTree::search1(std::int32_t node, const Coord3& q, Neighbor& best) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Neighbor here{n.id, dist2(points_[n.id], q)};
  if (closer(here, best)) best = here;
  const std::int64_t diff = q[n.axis] - points_[n.id][n.axis];
  const std::int32_t near = diff < 0 ? n.left : n.right;
  const std::int32_t far = diff < 0 ? n.right : n.left;
  search1(near, q, best);
  if (diff * diff <= best.d2) search1(far, q, best);
}

KdTree::Neighbor KdTree::nearest(const Coord3& q) const {
  Neighbor best{0, std::numeric_limits<std::int64_t>::max()};
  search1(root_, q, best);
  return best;
}

void KdTree::searchk(std::int32_t node, const Coord3& q, std::size_t k,
                     std::vector<Neighbor>& heap) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Neighbor here{n.id, dist2(points_[n.id], q)};
  auto cmp = [&](const Neighbor& a, const Neighbor& b) { return closer(a, b); };
  if (heap.size() < k) {
    heap.push_back(here);
    std::push_heap(heap.begin(), heap.end(), cmp);
  } else if (closer(here, heap.front())) {
    std::pop_heap(heap.begin(), heap.end(), cmp);
    heap.back() = here;
    std::push_heap(heap.begin(), heap.end(), cmp);
  }
  const std::int64_t diff = q[n.axis] - points_[n.id][n.axis];
  const std::int32_t near = diff < 0 ? n.left : n.right;
  const std::int32_t far = diff < 0 ? n.right : n.left;
  searchk(near, q, k, heap);
  if (heap.size() < k || diff * diff <= heap.front().d2) searchk(far, q, k, heap);
}

void KdTree::k_nearest(const Coord3& q, std::size_t k, std::vector<Neighbor>& out) const {
  out.clear();
  if (k == 0) return;
  searchk(root_, q, k, out);
  std::sort(out.begin(), out.end(), [&](const Neighbor& a, const Neighbor& b) { return closer(a, b); });
}

}  // namespace infosample::detail
