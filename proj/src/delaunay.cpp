#include "internal/delaunay.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "infosample/error.hpp"
#include "infosample/random.hpp"

namespace infosample::detail {
namespace {

int sign(Int128 v) { return (v > 0) - (v < 0); }

Int128 det3(Int128 a0, Int128 a1, Int128 a2, Int128 b0, Int128 b1, Int128 b2, Int128 c0, Int128 c1,
            Int128 c2) {
  return a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0);
}

std::uint64_t spread_bits(std::uint64_t x) {
  x &= 0xFFFFF;
  x = (x | (x << 32)) & 0x1F00000000FFFFULL;
  x = (x | (x << 16)) & 0x1F0000FF0000FFULL;
  x = (x | (x << 8)) & 0x100F00F00F00F00FULL;
  x = (x | (x << 4)) & 0x10C30C30C30C30C3ULL;
  x = (x | (x << 2)) & 0x1249249249249249ULL;
  return x;
}

std::uint64_t morton(const Coord3& p) {
  return spread_bits(static_cast<std::uint64_t>(p[0])) |
         (spread_bits(static_cast<std::uint64_t>(p[1])) << 1) |
         (spread_bits(static_cast<std::uint64_t>(p[2])) << 2);
}

Coord3 cross(const Coord3& a, const Coord3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Coord3 sub(const Coord3& a, const Coord3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a + 1)) << 32) |
         static_cast<std::uint32_t>(b + 1);
}

}  // namespace

Int128 orient3_det(const Coord3& p, const Coord3& q, const Coord3& r, const Coord3& s) {
  return det3(q[0] - p[0], q[1] - p[1], q[2] - p[2], r[0] - p[0], r[1] - p[1], r[2] - p[2],
              s[0] - p[0], s[1] - p[1], s[2] - p[2]);
}

int orient3(const Coord3& p, const Coord3& q, const Coord3& r, const Coord3& s) {
  return sign(orient3_det(p, q, r, s));
}

int in_sphere(const Coord3& p, const Coord3& q, const Coord3& r, const Coord3& s, const Coord3& t) {
  const Coord3* rows[4] = {&p, &q, &r, &s};
  Int128 d[4][3];
  Int128 w[4];
  for (int i = 0; i < 4; ++i) {
    for (int a = 0; a < 3; ++a) d[i][a] = (*rows[i])[a] - t[a];
    w[i] = d[i][0] * d[i][0] + d[i][1] * d[i][1] + d[i][2] * d[i][2];
  }
  auto minor = [&](int skip) {
    int r3[3], k = 0;
    for (int i = 0; i < 4; ++i) {
      if (i != skip) r3[k++] = i;
    }
    return det3(d[r3[0]][0], d[r3[0]][1], d[r3[0]][2], d[r3[1]][0], d[r3[1]][1], d[r3[1]][2],
                d[r3[2]][0], d[r3[2]][1], d[r3[2]][2]);
  };
  // Cofactor expansion along the lifted column.
  const Int128 det = -w[0] * minor(0) + w[1] * minor(1) - w[2] * minor(2) + w[3] * minor(3);
  return -sign(det);
}

Delaunay3::Delaunay3(std::vector<Coord3> points, std::vector<std::uint64_t> keys)
    : points_(std::move(points)), keys_(std::move(keys)) {
  if (keys_.size() != points_.size()) {
    throw SizeMismatchError(points_.size(), keys_.size(), "triangulation keys");
  }
  for (const auto& p : points_) {
    for (auto c : p) {
      if (c < 0 || c >= kMaxCoord) {
        throw Error(ErrorKind::InvalidArgument, "triangulation coordinates must lie in [0, 2^20)");
      }
    }
  }
  const std::size_t n = points_.size();
  if (n == 0) return;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::uint64_t> codes(n);
  for (std::size_t i = 0; i < n; ++i) codes[i] = morton(points_[i]);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return codes[a] != codes[b] ? codes[a] < codes[b] : keys_[a] < keys_[b];
  });
  for (std::size_t i = 1; i < n; ++i) {
    if (codes[order[i]] == codes[order[i - 1]]) {
      throw Error(ErrorKind::InvalidArgument, "duplicate point in triangulation input");
    }
  }

  // Initial simplex: the first affinely independent points in insertion order.
  const int a = order[0];
  int b = -1, c = -1, d = -1;
  for (int id : order) {
    if (points_[id] != points_[a]) {
      b = id;
      break;
    }
  }
  if (b < 0) return;
  dimension_ = 1;
  const Coord3 ab = sub(points_[b], points_[a]);
  for (int id : order) {
    if (cross(ab, sub(points_[id], points_[a])) != Coord3{0, 0, 0}) {
      c = id;
      break;
    }
  }
  if (c < 0) return;
  dimension_ = 2;
  for (int id : order) {
    if (orient3(points_[a], points_[b], points_[c], points_[id]) != 0) {
      d = id;
      break;
    }
  }
  if (d < 0) return;
  dimension_ = 3;

  std::array<int, 4> first{a, b, c, d};
  if (orient3(points_[a], points_[b], points_[c], points_[d]) < 0) std::swap(first[0], first[1]);
  const int c0 = new_cell(first);
  for (int i = 0; i < 4; ++i) {
    std::array<int, 4> v = first;
    v[i] = kInfinite;
    const int j = i == 0 ? 1 : 0;
    const int k = i <= 1 ? 2 : 1;
    std::swap(v[j], v[k]);
    const int ci = new_cell(v);
    cells_[c0].n[i] = ci;
    cells_[ci].n[i] = c0;
  }
  // Infinite cells share the faces through the infinite vertex.
  std::unordered_map<std::uint64_t, std::pair<int, int>> open;
  for (int ci = 1; ci <= 4; ++ci) {
    const auto& v = cells_[ci].v;
    const int inf_slot = static_cast<int>(std::find(v.begin(), v.end(), kInfinite) - v.begin());
    for (int f = 0; f < 4; ++f) {
      if (f == inf_slot) continue;
      int e[2], m = 0;
      for (int g = 0; g < 4; ++g) {
        if (g != f && g != inf_slot) e[m++] = v[g];
      }
      const auto key = edge_key(e[0], e[1]);
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, std::make_pair(ci, f));
      } else {
        cells_[ci].n[f] = it->second.first;
        cells_[it->second.first].n[it->second.second] = ci;
        open.erase(it);
      }
    }
  }
  hint_ = c0;

  for (int id : order) {
    if (id == first[0] || id == first[1] || id == first[2] || id == first[3]) continue;
    insert(id);
  }
}

std::size_t Delaunay3::finite_cell_count() const {
  return static_cast<std::size_t>(std::count_if(
      cells_.begin(), cells_.end(), [](const Cell& c) { return c.alive && !c.infinite(); }));
}

int Delaunay3::new_cell(const std::array<int, 4>& v) {
  int id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
    cells_[id] = Cell{};
  } else {
    id = static_cast<int>(cells_.size());
    cells_.emplace_back();
  }
  cells_[id].v = v;
  cells_[id].n = {-1, -1, -1, -1};
  cells_[id].alive = true;
  return id;
}

bool Delaunay3::precedes(int a, int b) const { return keys_[a] < keys_[b]; }

int Delaunay3::side_of_oriented_sphere(const std::array<int, 4>& v, int p) const {
  const auto& P = points_;
  const int s = in_sphere(P[v[0]], P[v[1]], P[v[2]], P[v[3]], P[p]);
  if (s != 0) return s;
  // Symbolic perturbation: examine the leading monomials in order of the
  // largest perturbed point.
  std::array<int, 5> ids{v[0], v[1], v[2], v[3], p};
  std::sort(ids.begin(), ids.end(), [&](int a, int b) { return precedes(a, b); });
  for (int i = 4; i > 2; --i) {
    if (ids[i] == p) return -1;
    int o = 0;
    if (ids[i] == v[3] && (o = orient3(P[v[0]], P[v[1]], P[v[2]], P[p])) != 0) return o;
    if (ids[i] == v[2] && (o = orient3(P[v[0]], P[v[1]], P[p], P[v[3]])) != 0) return o;
    if (ids[i] == v[1] && (o = orient3(P[v[0]], P[p], P[v[2]], P[v[3]])) != 0) return o;
    if (ids[i] == v[0] && (o = orient3(P[p], P[v[1]], P[v[2]], P[v[3]])) != 0) return o;
  }
  return -1;
}

int Delaunay3::coplanar_orientation(int a, int b, int c) const {
  const Coord3 u = sub(points_[b], points_[a]);
  const Coord3 w = sub(points_[c], points_[a]);
  const Coord3 n = cross(u, w);
  // One projection per plane, chosen by the plane's normal, so every
  // triple in the same plane is oriented consistently.
  for (int axis : {2, 0, 1}) {
    if (n[axis] != 0) return n[axis] > 0 ? 1 : -1;
  }
  return 0;
}

int Delaunay3::coplanar_side_of_bounded_circle(int a, int b, int c, int p) const {
  const auto& P = points_;
  const Coord3 n = cross(sub(P[b], P[a]), sub(P[c], P[a]));
  int axis = 0;
  while (axis < 3 && n[axis] == 0) ++axis;
  // Any sphere through the circle and a point off the plane meets the plane
  // exactly in that circle.
  Coord3 lift = P[a];
  lift[axis] += 1;
  const int o = orient3(P[a], P[b], P[c], lift);
  const int s = in_sphere(P[a], P[b], P[c], lift, P[p]) * o;
  if (s != 0) return s;
  std::array<int, 4> ids{a, b, c, p};
  std::sort(ids.begin(), ids.end(), [&](int x, int y) { return precedes(x, y); });
  const int local = coplanar_orientation(a, b, c);
  for (int i = 3; i > 0; --i) {
    if (ids[i] == p) return -1;
    int q = 0;
    if (ids[i] == c && (q = coplanar_orientation(a, b, p)) != 0) return q * local;
    if (ids[i] == b && (q = coplanar_orientation(a, p, c)) != 0) return q * local;
    if (ids[i] == a && (q = coplanar_orientation(p, b, c)) != 0) return q * local;
  }
  return -1;
}

bool Delaunay3::in_conflict(int c, int vid) const {
  const Cell& cell = cells_[c];
  const auto inf = std::find(cell.v.begin(), cell.v.end(), kInfinite);
  if (inf == cell.v.end()) return side_of_oriented_sphere(cell.v, vid) > 0;
  const int slot = static_cast<int>(inf - cell.v.begin());
  Coord3 q[4];
  int finite[3], m = 0;
  for (int i = 0; i < 4; ++i) {
    q[i] = i == slot ? points_[vid] : points_[cell.v[i]];
    if (i != slot) finite[m++] = cell.v[i];
  }
  const int o = orient3(q[0], q[1], q[2], q[3]);
  if (o != 0) return o > 0;
  return coplanar_side_of_bounded_circle(finite[0], finite[1], finite[2], vid) > 0;
}

int Delaunay3::walk(const Coord3& q, int start, std::uint64_t salt, int& last_finite) const {
  int c = start;
  if (cells_[c].infinite()) {
    const auto& v = cells_[c].v;
    c = cells_[c].n[std::find(v.begin(), v.end(), kInfinite) - v.begin()];
  }
  std::uint64_t state = rng::mix64(salt);
  int prev = -1;
  for (;;) {
    const Cell& cell = cells_[c];
    if (cell.infinite()) return c;
    last_finite = c;
    state = rng::mix64(state + 0x9E3779B97F4A7C15ULL);
    const int r = static_cast<int>(state & 3);
    bool moved = false;
    for (int t = 0; t < 4 && !moved; ++t) {
      const int i = (r + t) & 3;
      const int nb = cell.n[i];
      if (nb == prev) continue;
      Coord3 p[4];
      for (int k = 0; k < 4; ++k) p[k] = k == i ? q : points_[cell.v[k]];
      if (orient3(p[0], p[1], p[2], p[3]) < 0) {
        prev = c;
        c = nb;
        moved = true;
      }
    }
    if (!moved) return c;
  }
}

void Delaunay3::insert(int vid) {
  int last = hint_;
  const int start = walk(points_[vid], hint_, static_cast<std::uint64_t>(vid), last);
  if (!in_conflict(start, vid)) {
    throw Error(ErrorKind::Internal, "point location did not reach a conflicting cell");
  }

  if (stamp_.size() < cells_.size()) stamp_.resize(cells_.size() * 2, 0);
  epoch_ += 2;
  const std::uint32_t seen = epoch_, conflict = epoch_ + 1;
  std::vector<int> cavity{start};
  std::vector<std::pair<int, int>> boundary;
  stamp_[start] = conflict;
  for (std::size_t k = 0; k < cavity.size(); ++k) {
    const int x = cavity[k];
    for (int i = 0; i < 4; ++i) {
      const int y = cells_[x].n[i];
      if (stamp_[y] == conflict) continue;
      if (stamp_[y] != seen) {
        if (in_conflict(y, vid)) {
          stamp_[y] = conflict;
          cavity.push_back(y);
          continue;
        }
        stamp_[y] = seen;
      }
      boundary.emplace_back(x, i);
    }
  }

  std::vector<int> created;
  created.reserve(boundary.size());
  for (const auto& [x, i] : boundary) {
    std::array<int, 4> v = cells_[x].v;
    v[i] = vid;
    const int outside = cells_[x].n[i];
    const int nc = new_cell(v);
    cells_[nc].n[i] = outside;
    for (int& back : cells_[outside].n) {
      if (back == x) back = nc;
    }
    created.push_back(nc);
  }
  link_new_cells(created, vid);
  for (int x : cavity) {
    cells_[x].alive = false;
    free_.push_back(x);
  }
  hint_ = created.front();
  for (int nc : created) {
    if (!cells_[nc].infinite()) {
      hint_ = nc;
      break;
    }
  }
  if (stamp_.size() < cells_.size()) stamp_.resize(cells_.size() * 2, 0);
}

void Delaunay3::link_new_cells(const std::vector<int>& created, int vid) {
  std::unordered_map<std::uint64_t, std::pair<int, int>> open;
  open.reserve(created.size() * 2);
  for (int nc : created) {
    const auto v = cells_[nc].v;
    const int slot = static_cast<int>(std::find(v.begin(), v.end(), vid) - v.begin());
    for (int f = 0; f < 4; ++f) {
      if (f == slot) continue;
      int e[2], m = 0;
      for (int g = 0; g < 4; ++g) {
        if (g != f && g != slot) e[m++] = v[g];
      }
      const auto key = edge_key(e[0], e[1]);
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, std::make_pair(nc, f));
      } else {
        cells_[nc].n[f] = it->second.first;
        cells_[it->second.first].n[it->second.second] = nc;
        open.erase(it);
      }
    }
  }
  if (!open.empty()) throw Error(ErrorKind::Internal, "cavity boundary is not closed");
}

int Delaunay3::any_finite_cell() const {
  if (hint_ < static_cast<int>(cells_.size()) && cells_[hint_].alive && !cells_[hint_].infinite()) {
    return hint_;
  }
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c].alive && !cells_[c].infinite()) return static_cast<int>(c);
  }
  return -1;
}

int Delaunay3::locate(const Coord3& q, int& hint, std::uint64_t salt) const {
  if (hint < 0 || hint >= static_cast<int>(cells_.size()) || !cells_[hint].alive) {
    hint = any_finite_cell();
  }
  int last = hint;
  const int c = walk(q, hint, salt, last);
  hint = last;
  return cells_[c].infinite() ? -1 : c;
}

std::array<double, 4> Delaunay3::barycentric(int c, const Coord3& q) const {
  const auto& v = cells_[c].v;
  const Coord3* p[4] = {&points_[v[0]], &points_[v[1]], &points_[v[2]], &points_[v[3]]};
  const double total = static_cast<double>(orient3_det(*p[0], *p[1], *p[2], *p[3]));
  std::array<double, 4> w{};
  for (int i = 0; i < 4; ++i) {
    const Coord3* r[4] = {p[0], p[1], p[2], p[3]};
    r[i] = &q;
    w[i] = static_cast<double>(orient3_det(*r[0], *r[1], *r[2], *r[3])) / total;
  }
  return w;
}

std::string Delaunay3::validate() const {
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const Cell& cell = cells_[c];
    if (!cell.alive) continue;
    for (int i = 0; i < 4; ++i) {
      const int nb = cell.n[i];
      if (nb < 0 || !cells_[nb].alive) return "dangling neighbor at cell " + std::to_string(c);
      const auto& back = cells_[nb].n;
      if (std::find(back.begin(), back.end(), static_cast<int>(c)) == back.end()) {
        return "asymmetric adjacency at cell " + std::to_string(c);
      }
      for (int k = 0; k < 4; ++k) {
        if (k == i) continue;
        const auto& nv = cells_[nb].v;
        if (std::find(nv.begin(), nv.end(), cell.v[k]) == nv.end()) {
          return "neighbor does not share a face at cell " + std::to_string(c);
        }
      }
    }
    if (cell.infinite()) {
      const int slot = static_cast<int>(std::find(cell.v.begin(), cell.v.end(), kInfinite) - cell.v.begin());
      for (std::size_t p = 0; p < points_.size(); ++p) {
        Coord3 q[4];
        for (int k = 0; k < 4; ++k) q[k] = k == slot ? points_[p] : points_[cell.v[k]];
        if (orient3(q[0], q[1], q[2], q[3]) > 0) return "point outside the hull facet of cell " + std::to_string(c);
      }
      continue;
    }
    const auto& P = points_;
    if (orient3(P[cell.v[0]], P[cell.v[1]], P[cell.v[2]], P[cell.v[3]]) <= 0) {
      return "cell " + std::to_string(c) + " is not positively oriented";
    }
    for (std::size_t p = 0; p < points_.size(); ++p) {
      if (in_sphere(P[cell.v[0]], P[cell.v[1]], P[cell.v[2]], P[cell.v[3]], P[p]) > 0) {
        return "point " + std::to_string(p) + " inside the circumsphere of cell " + std::to_string(c);
      }
    }
  }
  return {};
}

}  // namespace infosample::detail
