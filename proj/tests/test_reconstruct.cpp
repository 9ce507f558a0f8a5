#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "infosample/error.hpp"
#include "infosample/parallel.hpp"
#include "infosample/random.hpp"
#include "infosample/reconstruct.hpp"
#include "infosample/sampler.hpp"
#include "infosample/synthetic.hpp"
#include "support.hpp"

using namespace infosample;

namespace {

MultiField affine_field(std::uint32_t n) {
  const GridDims dims(n, n, n);
  std::vector<double> a(dims.count()), b(dims.count());
  for (std::uint64_t i = 0; i < dims.count(); ++i) {
    const GridIndex g = dims.delinearize(i);
    a[i] = 2.0 * g.i + 3.0 * g.j - 1.0 * g.k + 1.0;
    b[i] = -0.5 * g.i + 0.25 * g.k;
  }
  std::vector<Field> f;
  f.emplace_back("f", dims, std::move(a));
  f.emplace_back("g", dims, std::move(b));
  return MultiField(dims, std::move(f));
}

double affine(const GridIndex& g) { return 2.0 * g.i + 3.0 * g.j - 1.0 * g.k + 1.0; }

// 200 random points plus the eight box corners, so the hull is the whole grid.
std::vector<std::uint64_t> hull_sample(const GridDims& dims, std::size_t n, std::uint64_t seed) {
  std::vector<std::uint64_t> idx;
  for (std::uint32_t c = 0; c < 8; ++c) {
    idx.push_back(dims.linear((c & 1) ? dims.nx() - 1 : 0, (c & 2) ? dims.ny() - 1 : 0,
                              (c & 4) ? dims.nz() - 1 : 0));
  }
  const rng::CounterRng g(seed, 9);
  for (std::uint64_t c = 0; idx.size() < n + 8; ++c) {
    idx.push_back(g.bits(c) % dims.count());
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  }
  return idx;
}

}  // namespace

TEST_CASE("a full sample reconstructs exactly in every mode") {
  const MultiField mf = synth::make_synthetic(synth::SyntheticSpec::feature_preset(12), 3);
  std::vector<std::uint64_t> all(mf.dims().count());
  for (std::uint64_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto ps = SampledPointSet::gather(mf, all);
  for (auto mode : {ReconstructionMode::delaunay(), ReconstructionMode::idw(),
                    ReconstructionMode::nearest()}) {
    const auto r = reconstruct(ps, "v0", mf.dims(), mode);
    CHECK(r.field.values == mf.variable("v0").values);
    CHECK(r.warnings.empty());
  }
}

TEST_CASE("collinear samples use linear-segment interpolation") {
  const GridDims dims(11, 1, 1);
  SampledPointSet ps(dims, {"v"});
  ps.push_back(0, std::vector<double>{0.0});
  ps.push_back(10, std::vector<double>{10.0});

  const auto seg = reconstruct(ps, "v", dims, ReconstructionMode::linear_segment());
  CHECK(seg.field.values[4] == doctest::Approx(4.0).epsilon(1e-15));
  for (std::uint32_t x = 0; x <= 10; ++x) CHECK(seg.field.values[x] == doctest::Approx(x));

  const auto del = reconstruct(ps, "v", dims, ReconstructionMode::delaunay());
  CHECK(del.effective.kind == ReconstructionMode::Kind::LinearSegment);
  REQUIRE(del.warnings.size() == 1);
  CHECK(del.warnings[0].rfind("DegenerateGeometry", 0) == 0);
  CHECK(del.field.values[4] == doctest::Approx(4.0));
}

TEST_CASE("segment mode off the line takes the nearest sample") {
  const GridDims dims(5, 5, 1);
  SampledPointSet ps(dims, {"v"});
  ps.push_back(dims.linear(0, 0, 0), std::vector<double>{0.0});
  ps.push_back(dims.linear(4, 4, 0), std::vector<double>{8.0});
  const auto r = reconstruct(ps, "v", dims, ReconstructionMode::linear_segment());
  CHECK(r.field.values[dims.linear(2, 2, 0)] == doctest::Approx(4.0));
  CHECK(r.field.values[dims.linear(4, 0, 0)] == 0.0);  // equidistant, lower index wins
  CHECK(r.field.values[dims.linear(4, 3, 0)] == 8.0);

  SampledPointSet bent(dims, {"v"});
  for (auto i : {dims.linear(0, 0, 0), dims.linear(1, 0, 0), dims.linear(0, 1, 0)}) {
    bent.push_back(i, std::vector<double>{1.0});
  }
  CHECK(testing::error_kind([&] { reconstruct(bent, "v", dims, ReconstructionMode::linear_segment()); }) ==
        testing::kind(ErrorKind::InvalidArgument));
}

TEST_CASE("coplanar samples fall back to IDW with a warning") {
  const GridDims dims(6, 6, 3);
  SampledPointSet ps(dims, {"v"});
  for (std::uint32_t j = 0; j < 6; j += 2)
    for (std::uint32_t i = 0; i < 6; i += 2) ps.push_back(dims.linear(i, j, 1), std::vector<double>{double(i + j)});
  const auto r = reconstruct(ps, "v", dims, ReconstructionMode::delaunay());
  CHECK(r.effective.kind == ReconstructionMode::Kind::ShepardIDW);
  CHECK(r.effective.k == 8);
  CHECK(r.effective.power == 2.0);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("coplanar") != std::string::npos);
  const auto idw = reconstruct(ps, "v", dims, ReconstructionMode::idw());
  CHECK(r.field.values == idw.field.values);
}

TEST_CASE("affine fields are reproduced inside the hull") {
  const MultiField mf = affine_field(16);
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto ps = SampledPointSet::gather(mf, hull_sample(mf.dims(), 200, seed));
    const auto r = reconstruct(ps, "f", mf.dims(), ReconstructionMode::delaunay());
    CHECK(r.warnings.empty());
    double worst = 0.0;
    for (std::uint64_t i = 0; i < mf.dims().count(); ++i) {
      worst = std::max(worst, std::abs(r.field.values[i] - affine(mf.dims().delinearize(i))));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("affine reproduction from four points covers only their hull") {
  const MultiField mf = affine_field(8);
  const GridDims& d = mf.dims();
  const std::vector<std::uint64_t> idx{d.linear(0, 0, 0), d.linear(7, 0, 0), d.linear(0, 7, 0),
                                       d.linear(0, 0, 7)};
  auto sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  const auto ps = SampledPointSet::gather(mf, sorted);
  const auto r = reconstruct(ps, "f", d, ReconstructionMode::delaunay());
  for (std::uint64_t i = 0; i < d.count(); ++i) {
    const GridIndex g = d.delinearize(i);
    if (g.i + g.j + g.k <= 7) CHECK(std::abs(r.field.values[i] - affine(g)) <= 1e-9);
  }
}

TEST_CASE("node exactness, range bound and multi-variable agreement") {
  const MultiField mf = synth::make_synthetic(synth::SyntheticSpec::feature_preset(16), 5);
  const auto ps = random_sample(mf, SamplingFraction(0.05), 4);
  REQUIRE(ps.size() > 4);
  const auto& col = ps.column(ps.index_of("v0"));
  const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
  for (auto mode : {ReconstructionMode::delaunay(), ReconstructionMode::idw(4, 1.5),
                    ReconstructionMode::nearest()}) {
    const auto both = reconstruct(ps, std::vector<std::string>{"v0", "v1"}, mf.dims(), mode);
    const auto single = reconstruct(ps, "v0", mf.dims(), mode);
    CHECK(both[0].field.values == single.field.values);
    CHECK(both[1].field.values == reconstruct(ps, "v1", mf.dims(), mode).field.values);
    for (std::size_t p = 0; p < ps.size(); ++p) {
      const double got = single.field.values[ps.indices()[p]];
      if (mode.kind == ReconstructionMode::Kind::NearestNeighbor) {
        CHECK(got == col[p]);
      } else {
        CHECK(std::abs(got - col[p]) <= 1e-12 * std::max(1.0, std::abs(col[p])));
      }
    }
    for (double v : single.field.values) {
      CHECK(v >= *lo);
      CHECK(v <= *hi);
    }
  }
}

TEST_CASE("nearest neighbour breaks ties by lowest linear index") {
  const GridDims dims(3, 1, 1);
  SampledPointSet ps(dims, {"v"});
  ps.push_back(0, std::vector<double>{5.0});
  ps.push_back(2, std::vector<double>{7.0});
  CHECK(reconstruct(ps, "v", dims, ReconstructionMode::nearest()).field.values ==
        std::vector<double>{5.0, 5.0, 7.0});
}

TEST_CASE("output does not depend on the thread count") {
  const MultiField mf = synth::make_synthetic(synth::SyntheticSpec::feature_preset(16), 8);
  const auto ps = random_sample(mf, SamplingFraction(0.03), 2);
  for (auto mode : {ReconstructionMode::delaunay(), ReconstructionMode::idw()}) {
    std::vector<double> one, many;
    {
      ScopedThreads t(1);
      one = reconstruct(ps, "v1", mf.dims(), mode).field.values;
    }
    {
      ScopedThreads t(5);
      many = reconstruct(ps, "v1", mf.dims(), mode).field.values;
    }
    CHECK(one == many);
    CHECK(one == reconstruct(ps, "v1", mf.dims(), mode).field.values);
  }
}

TEST_CASE("reconstruction errors") {
  const MultiField mf = affine_field(4);
  const auto ps = SampledPointSet::gather(mf, std::vector<std::uint64_t>{0, 5, 21, 63});
  CHECK(testing::error_kind([&] { reconstruct(ps, "nope", mf.dims()); }) ==
        testing::kind(ErrorKind::UnknownVariable));
  CHECK(testing::error_kind([&] { reconstruct(ps, "f", GridDims(4, 4, 5)); }) ==
        testing::kind(ErrorKind::GridMismatch));
  CHECK(testing::error_kind([&] { reconstruct(ps, "f", mf.dims(), ReconstructionMode::idw(0)); }) ==
        testing::kind(ErrorKind::InvalidArgument));
  CHECK(testing::error_kind([&] { reconstruct(ps, "f", mf.dims(), ReconstructionMode::idw(8, 0.0)); }) ==
        testing::kind(ErrorKind::InvalidArgument));
  const SampledPointSet empty(mf.dims(), {"f"});
  CHECK(testing::error_kind([&] { reconstruct(empty, "f", mf.dims()); }) ==
        testing::kind(ErrorKind::InvalidArgument));
  CHECK(parse_reconstruction_kind("idw") == ReconstructionMode::Kind::ShepardIDW);
  CHECK(testing::error_kind([] { parse_reconstruction_kind("cubic"); }) ==
        testing::kind(ErrorKind::InvalidArgument));
}
