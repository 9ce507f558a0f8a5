#include "infosample/reconstruct.hpp"

#include <algorithm>
#include <cmath>

#include "infosample/error.hpp"
#include "infosample/parallel.hpp"
#include "internal/delaunay.hpp"
#include "internal/kdtree.hpp"

namespace infosample {
namespace {

using detail::Coord3;

Coord3 coord_of(const GridDims& dims, std::uint64_t index) {
  const GridIndex g = dims.delinearize(index);
  return {g.i, g.j, g.k};
}

// Sample geometry plus the value columns being reconstructed.
struct Samples {
  const std::vector<std::uint64_t>& indices;
  std::vector<const std::vector<double>*> columns;
  std::vector<Coord3> coords;
  detail::KdTree tree;

  Samples(const std::vector<std::uint64_t>& idx, std::vector<const std::vector<double>*> cols,
          std::vector<Coord3> c)
      : indices(idx), columns(std::move(cols)), coords(c), tree(std::move(c), idx) {}

  /// Position of the sample stored at a grid index, or -1.
  std::int64_t at(std::uint64_t index) const {
    auto it = std::lower_bound(indices.begin(), indices.end(), index);
    if (it == indices.end() || *it != index) return -1;
    return it - indices.begin();
  }

  void copy(std::size_t id, std::span<double> out) const {
    for (std::size_t v = 0; v < columns.size(); ++v) out[v] = (*columns[v])[id];
  }
  void nearest(const Coord3& q, std::span<double> out) const { copy(tree.nearest(q).id, out); }
};

// Evaluates fn for every grid point, one chunk per z-slice so the split
// never depends on the thread count. Output is one array per variable.
template <typename Fn>
std::vector<std::vector<double>> over_grid(const GridDims& dims, std::size_t nvars, Fn&& fn) {
  std::vector<std::vector<double>> out(nvars, std::vector<double>(dims.count()));
  const std::uint64_t slice = std::uint64_t{dims.nx()} * dims.ny();
  parallel_chunks(dims.nz(), dims.nz(), default_threads(),
                  [&](std::size_t, std::size_t kb, std::size_t ke) {
                    auto state = fn.start();
                    std::vector<double> vals(nvars);
                    for (std::uint64_t idx = kb * slice; idx < ke * slice; ++idx) {
                      fn(state, idx, coord_of(dims, idx), std::span(vals));
                      for (std::size_t v = 0; v < nvars; ++v) out[v][idx] = vals[v];
                    }
                  });
  return out;
}

struct NearestEval {
  const Samples& s;
  int start() const { return 0; }
  void operator()(int, std::uint64_t, const Coord3& q, std::span<double> out) const {
    s.nearest(q, out);
  }
};

struct IdwEval {
  const Samples& s;
  std::uint32_t k;
  double power;
  std::vector<detail::KdTree::Neighbor> start() const { return {}; }
  void operator()(std::vector<detail::KdTree::Neighbor>& nb, std::uint64_t, const Coord3& q,
                  std::span<double> out) const {
    s.tree.k_nearest(q, k, nb);
    if (nb.front().d2 == 0) return s.copy(nb.front().id, out);
    double weights[64];
    std::vector<double> spill;
    double* w = nb.size() <= 64 ? weights : (spill.resize(nb.size()), spill.data());
    double den = 0.0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      w[i] = std::pow(static_cast<double>(nb[i].d2), -0.5 * power);
      den += w[i];
    }
    for (std::size_t v = 0; v < s.columns.size(); ++v) {
      const auto& col = *s.columns[v];
      double num = 0.0;
      for (std::size_t i = 0; i < nb.size(); ++i) num += w[i] * col[nb[i].id];
      out[v] = num / den;
    }
  }
};

struct DelaunayEval {
  const Samples& s;
  const detail::Delaunay3& tri;
  int start() const { return tri.any_finite_cell(); }
  void operator()(int& hint, std::uint64_t idx, const Coord3& q, std::span<double> out) const {
    if (const auto pos = s.at(idx); pos >= 0) return s.copy(static_cast<std::size_t>(pos), out);
    const int c = tri.locate(q, hint, idx);
    if (c < 0) return s.nearest(q, out);
    const auto& v = tri.cells()[c].v;
    const auto w = tri.barycentric(c, q);
    for (std::size_t var = 0; var < s.columns.size(); ++var) {
      const auto& col = *s.columns[var];
      double value = 0.0, lo = INFINITY, hi = -INFINITY;
      for (int i = 0; i < 4; ++i) {
        const double vi = col[static_cast<std::size_t>(v[i])];
        value += w[i] * vi;
        lo = std::min(lo, vi);
        hi = std::max(hi, vi);
      }
      out[var] = std::clamp(value, lo, hi);
    }
  }
};

struct SegmentEval {
  const Samples& s;
  Coord3 origin;
  Coord3 dir;
  std::vector<std::int64_t> t;      // sorted parameters
  std::vector<std::size_t> order;  // sample ids in parameter order
  int start() const { return 0; }
  void operator()(int, std::uint64_t, const Coord3& q, std::span<double> out) const {
    const Coord3 d{q[0] - origin[0], q[1] - origin[1], q[2] - origin[2]};
    const bool on_line = d[1] * dir[2] == d[2] * dir[1] && d[2] * dir[0] == d[0] * dir[2] &&
                         d[0] * dir[1] == d[1] * dir[0];
    const std::int64_t tq = d[0] * dir[0] + d[1] * dir[1] + d[2] * dir[2];
    if (!on_line || tq < t.front() || tq > t.back()) return s.nearest(q, out);
    auto it = std::lower_bound(t.begin(), t.end(), tq);
    const std::size_t hi = static_cast<std::size_t>(it - t.begin());
    if (*it == tq) return s.copy(order[hi], out);
    const std::size_t lo = hi - 1;
    const double lambda = static_cast<double>(tq - t[lo]) / static_cast<double>(t[hi] - t[lo]);
    for (std::size_t v = 0; v < s.columns.size(); ++v) {
      const auto& col = *s.columns[v];
      out[v] = (1.0 - lambda) * col[order[lo]] + lambda * col[order[hi]];
    }
  }
};

SegmentEval make_segment(const Samples& s) {
  SegmentEval e{s, s.coords.front(), {0, 0, 0}, {}, {}};
  for (const auto& c : s.coords) {
    const Coord3 d{c[0] - e.origin[0], c[1] - e.origin[1], c[2] - e.origin[2]};
    if (e.dir == Coord3{0, 0, 0}) {
      e.dir = d;
      continue;
    }
    const auto& r = e.dir;
    if (d[1] * r[2] != d[2] * r[1] || d[2] * r[0] != d[0] * r[2] || d[0] * r[1] != d[1] * r[0]) {
      throw Error(ErrorKind::InvalidArgument, "linear-segment reconstruction needs collinear samples");
    }
  }
  std::vector<std::pair<std::int64_t, std::size_t>> param;
  for (std::size_t i = 0; i < s.coords.size(); ++i) {
    const auto& c = s.coords[i];
    param.emplace_back((c[0] - e.origin[0]) * e.dir[0] + (c[1] - e.origin[1]) * e.dir[1] +
                           (c[2] - e.origin[2]) * e.dir[2],
                       i);
  }
  std::sort(param.begin(), param.end());
  for (const auto& [t, i] : param) {
    e.t.push_back(t);
    e.order.push_back(i);
  }
  return e;
}

}  // namespace

const char* to_string(ReconstructionMode::Kind kind) {
  switch (kind) {
    case ReconstructionMode::Kind::DelaunayLinear: return "delaunay";
    case ReconstructionMode::Kind::ShepardIDW: return "idw";
    case ReconstructionMode::Kind::NearestNeighbor: return "nearest";
    case ReconstructionMode::Kind::LinearSegment: return "segment";
  }
  return "unknown";
}

ReconstructionMode::Kind parse_reconstruction_kind(const std::string& name) {
  for (auto k : {ReconstructionMode::Kind::DelaunayLinear, ReconstructionMode::Kind::ShepardIDW,
                 ReconstructionMode::Kind::NearestNeighbor, ReconstructionMode::Kind::LinearSegment}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown reconstruction mode '" + name + "'");
}

std::vector<Reconstruction> reconstruct(const SampledPointSet& ps,
                                        const std::vector<std::string>& variables,
                                        const GridDims& dims, ReconstructionMode mode) {
  if (!(ps.dims() == dims)) throw Error(ErrorKind::GridMismatch, "point set comes from a different grid");
  std::vector<const std::vector<double>*> columns;
  for (const auto& name : variables) columns.push_back(&ps.column(ps.index_of(name)));
  if (variables.empty()) throw Error(ErrorKind::InvalidArgument, "no variables to reconstruct");
  if (ps.empty()) throw Error(ErrorKind::InvalidArgument, "cannot reconstruct from an empty point set");
  if (mode.k < 1) throw Error(ErrorKind::InvalidArgument, "IDW neighbour count must be >= 1");
  if (!(mode.power > 0.0)) throw Error(ErrorKind::InvalidArgument, "IDW power must be > 0");

  std::vector<Coord3> coords;
  coords.reserve(ps.size());
  for (std::uint64_t idx : ps.indices()) coords.push_back(coord_of(dims, idx));
  const Samples samples(ps.indices(), columns, coords);
  const std::size_t nv = variables.size();

  ReconstructionMode effective = mode;
  std::vector<std::string> warnings;
  std::vector<std::vector<double>> values;
  switch (mode.kind) {
    case ReconstructionMode::Kind::NearestNeighbor:
      values = over_grid(dims, nv, NearestEval{samples});
      break;
    case ReconstructionMode::Kind::ShepardIDW:
      values = over_grid(dims, nv, IdwEval{samples, mode.k, mode.power});
      break;
    case ReconstructionMode::Kind::LinearSegment:
      values = over_grid(dims, nv, make_segment(samples));
      break;
    case ReconstructionMode::Kind::DelaunayLinear: {
      const detail::Delaunay3 tri(coords, ps.indices());
      if (tri.dimension() <= 1) {
        effective = tri.dimension() == 1 ? ReconstructionMode::linear_segment()
                                         : ReconstructionMode::nearest();
        warnings.push_back(std::string("DegenerateGeometry: samples are ") +
                           (tri.dimension() == 1 ? "collinear; using linear-segment interpolation"
                                                 : "a single point; using its value everywhere"));
        values = tri.dimension() == 1 ? over_grid(dims, nv, make_segment(samples))
                                      : over_grid(dims, nv, NearestEval{samples});
      } else if (tri.dimension() == 2) {
        effective = ReconstructionMode::idw();
        warnings.push_back(
            "DegenerateGeometry: samples are coplanar; falling back to ShepardIDW (k=8, power=2)");
        values = over_grid(dims, nv, IdwEval{samples, effective.k, effective.power});
      } else {
        values = over_grid(dims, nv, DelaunayEval{samples, tri});
      }
      break;
    }
  }
  std::vector<Reconstruction> out;
  for (std::size_t v = 0; v < nv; ++v) {
    out.push_back({Field(variables[v], dims, std::move(values[v])), effective, warnings});
  }
  return out;
}

Reconstruction reconstruct(const SampledPointSet& ps, const std::string& variable,
                           const GridDims& dims, ReconstructionMode mode) {
  return std::move(reconstruct(ps, std::vector<std::string>{variable}, dims, mode).front());
}

}  // namespace infosample
