#include "infosample/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "infosample/error.hpp"
#include "infosample/kernels.hpp"
#include "infosample/parallel.hpp"
#include "infosample/random.hpp"

namespace infosample {
namespace {

constexpr std::size_t kDcorChunks = 64;

void require_same_dims(const Field& a, const Field& b) {
  if (!(a.dims == b.dims)) {
    throw Error(ErrorKind::DimensionMismatch, "fields '" + a.name + "' and '" + b.name +
                                                  "' have different dimensions");
  }
}

// Linear indices inside the (clipped) ROI, ascending.
std::vector<std::uint64_t> roi_indices(const GridDims& dims, const std::optional<RegionOfInterest>& roi) {
  const RegionOfInterest box = roi ? clip_roi(*roi, dims) : Box3::whole(dims);
  std::vector<std::uint64_t> out;
  out.reserve(box.count());
  for (std::uint32_t k = box.lo[2]; k <= box.hi[2]; ++k) {
    for (std::uint32_t j = box.lo[1]; j <= box.hi[1]; ++j) {
      for (std::uint32_t i = box.lo[0]; i <= box.hi[0]; ++i) out.push_back(dims.linear(i, j, k));
    }
  }
  return out;
}

std::vector<double> gather(const Field& f, const std::vector<std::uint64_t>& idx) {
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = f.values[idx[i]];
  return out;
}

std::uint32_t parse_uint(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const unsigned long v = std::strtoul(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || s[0] == '-' || v > 0xFFFFFFFFUL) {
    throw Error(ErrorKind::InvalidArgument, "bad " + what + " '" + s + "'");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

Axis parse_axis(const std::string& text) {
  if (text == "x" || text == "X") return Axis::X;
  if (text == "y" || text == "Y") return Axis::Y;
  if (text == "z" || text == "Z") return Axis::Z;
  throw Error(ErrorKind::InvalidArgument, "axis must be x, y or z, got '" + text + "'");
}

SliceSpec parse_slice(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorKind::InvalidArgument, "slice '" + text + "' is not axis:index");
  }
  return {parse_axis(text.substr(0, colon)), parse_uint(text.substr(colon + 1), "slice index")};
}

RasterImage RasterImage::crop(std::uint32_t x0, std::uint32_t y0, std::uint32_t x1,
                              std::uint32_t y1) const {
  if (x0 > x1 || y0 > y1 || x1 >= width || y1 >= height) {
    throw Error(ErrorKind::IndexOutOfRange, "crop rectangle outside the image");
  }
  RasterImage out;
  out.width = x1 - x0 + 1;
  out.height = y1 - y0 + 1;
  out.pixels.reserve(std::size_t{out.width} * out.height);
  for (std::uint32_t y = y0; y <= y1; ++y) {
    for (std::uint32_t x = x0; x <= x1; ++x) out.pixels.push_back(at(x, y));
  }
  return out;
}

RegionOfInterest parse_roi(const std::string& text) {
  RegionOfInterest roi;
  std::stringstream ss(text);
  std::string part;
  int axis = 0;
  while (std::getline(ss, part, ',')) {
    if (axis >= 3) throw Error(ErrorKind::InvalidArgument, "ROI has more than three ranges");
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorKind::InvalidArgument, "ROI range '" + part + "' is not lo:hi");
    }
    roi.lo[axis] = parse_uint(part.substr(0, colon), "ROI bound");
    roi.hi[axis] = parse_uint(part.substr(colon + 1), "ROI bound");
    if (roi.lo[axis] > roi.hi[axis]) {
      throw Error(ErrorKind::InvalidArgument, "ROI range '" + part + "' has lo > hi");
    }
    ++axis;
  }
  if (axis != 3) throw Error(ErrorKind::InvalidArgument, "ROI needs three ranges x0:x1,y0:y1,z0:z1");
  return roi;
}

RegionOfInterest clip_roi(const RegionOfInterest& roi, const GridDims& dims) {
  RegionOfInterest out = roi;
  for (int a = 0; a < 3; ++a) {
    if (roi.lo[a] > roi.hi[a] || roi.lo[a] >= dims.extent(a)) {
      throw Error(ErrorKind::EmptyROI, "ROI does not intersect the grid");
    }
    out.hi[a] = std::min(roi.hi[a], dims.extent(a) - 1);
  }
  return out;
}

RasterImage rasterize_slice(const Field& f, Axis axis, std::uint32_t index, double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorKind::InvalidArgument, "value range needs min < max");
  const GridDims& d = f.dims;
  const int a = static_cast<int>(axis);
  if (index >= d.extent(a)) {
    throw Error(ErrorKind::IndexOutOfRange, "slice index " + std::to_string(index) +
                                                " outside axis of extent " + std::to_string(d.extent(a)));
  }
  const int u = a == 0 ? 1 : 0;
  const int v = a == 2 ? 1 : 2;
  RasterImage img;
  img.width = d.extent(u);
  img.height = d.extent(v);
  std::vector<double> raw(std::size_t{img.width} * img.height);
  std::uint32_t c[3];
  c[a] = index;
  for (std::uint32_t y = 0; y < img.height; ++y) {
    c[v] = y;
    for (std::uint32_t x = 0; x < img.width; ++x) {
      c[u] = x;
      raw[std::size_t{y} * img.width + x] = f.values[d.linear(c[0], c[1], c[2])];
    }
  }
  img.pixels.resize(raw.size());
  kernels::normalize_clamp(raw, lo, hi - lo, img.pixels);
  return img;
}

PixelRect roi_on_slice(const RegionOfInterest& roi, Axis axis) {
  const int a = static_cast<int>(axis);
  const int u = a == 0 ? 1 : 0;
  const int v = a == 2 ? 1 : 2;
  return {roi.lo[u], roi.lo[v], roi.hi[u], roi.hi[v]};
}

double ssim(const RasterImage& a, const RasterImage& b, const SsimParams& params) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorKind::DimensionMismatch, "SSIM images differ in size");
  }
  const std::uint32_t w = params.window;
  if (w < 2 || a.width < w || a.height < w) {
    throw Error(ErrorKind::TooSmall, "SSIM needs images of at least " + std::to_string(w) + "x" +
                                         std::to_string(w) + " pixels");
  }
  const double n = static_cast<double>(w) * w;
  std::vector<double> pa(w * w), pb(w * w);
  double total = 0.0;
  std::size_t patches = 0;
  for (std::uint32_t y0 = 0; y0 + w <= a.height; y0 += w) {
    for (std::uint32_t x0 = 0; x0 + w <= a.width; x0 += w) {
      for (std::uint32_t y = 0; y < w; ++y) {
        for (std::uint32_t x = 0; x < w; ++x) {
          pa[y * w + x] = a.at(x0 + x, y0 + y);
          pb[y * w + x] = b.at(x0 + x, y0 + y);
        }
      }
      const auto raw = kernels::moments(pa, pb);
      const double ma = raw.sum_a / n, mb = raw.sum_b / n;
      for (auto& p : pa) p -= ma;
      for (auto& p : pb) p -= mb;
      const auto c = kernels::moments(pa, pb);
      const double va = c.sum_aa / (n - 1), vb = c.sum_bb / (n - 1), cov = c.sum_ab / (n - 1);
      // With unit exponents and C3 = C2/2 the contrast and structure terms
      // combine into (2 cov + C2) / (va + vb + C2).
      const double lum = (2.0 * (ma * mb) + params.c1) / (ma * ma + mb * mb + params.c1);
      const double cs = (2.0 * cov + params.c2) / (va + vb + params.c2);
      total += lum * cs;
      ++patches;
    }
  }
  return total / static_cast<double>(patches);
}

double mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "MSE inputs differ in size");
  if (a.empty()) throw Error(ErrorKind::DimensionMismatch, "MSE of empty inputs");
  return kernels::sum_sq_diff(a, b) / static_cast<double>(a.size());
}

double mse(const RasterImage& a, const RasterImage& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorKind::DimensionMismatch, "MSE images differ in size");
  }
  return mse(std::span(a.pixels), std::span(b.pixels));
}

double mse(const Field& a, const Field& b, const std::optional<RegionOfInterest>& roi) {
  require_same_dims(a, b);
  if (!roi) return mse(std::span(a.values), std::span(b.values));
  const auto idx = roi_indices(a.dims, roi);
  return mse(gather(a, idx), gather(b, idx));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "Pearson inputs differ in size");
  if (x.size() < 2) throw Error(ErrorKind::EmptyROI, "Pearson correlation needs >= 2 points");
  const double n = static_cast<double>(x.size());
  const auto raw = kernels::moments(x, y);
  const double mx = raw.sum_a / n, my = raw.sum_b / n;
  std::vector<double> cx(x.begin(), x.end()), cy(y.begin(), y.end());
  for (auto& v : cx) v -= mx;
  for (auto& v : cy) v -= my;
  const auto c = kernels::moments(cx, cy);
  if (c.sum_aa == 0.0 || c.sum_bb == 0.0) {
    throw Error(ErrorKind::ZeroVariance, "Pearson correlation of a constant variable");
  }
  const double r = c.sum_ab / std::sqrt(c.sum_aa * c.sum_bb);
  return std::clamp(r, -1.0, 1.0);
}

double pearson(const Field& x, const Field& y, const std::optional<RegionOfInterest>& roi) {
  require_same_dims(x, y);
  if (!roi) return pearson(std::span(x.values), std::span(y.values));
  const auto idx = roi_indices(x.dims, roi);
  return pearson(gather(x, idx), gather(y, idx));
}

double distance_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "dCor inputs differ in size");
  if (x.size() < 2) throw Error(ErrorKind::EmptyROI, "distance correlation needs >= 2 points");
  const std::size_t n = x.size();
  const auto& k = kernels::active();
  std::vector<double> a(n), b(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      a[i] = k.abs_diff_sum(x.data(), n, x[i]) / static_cast<double>(n);
      b[i] = k.abs_diff_sum(y.data(), n, y[i]) / static_cast<double>(n);
    }
  });
  double abar = 0.0, bbar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    abar += a[i];
    bbar += b[i];
  }
  abar /= static_cast<double>(n);
  bbar /= static_cast<double>(n);

  // Row sums of A_ij B_ij, A_ij^2, B_ij^2 with fixed chunks merged in order.
  std::vector<kernels::CrossSums> parts(std::min(kDcorChunks, n));
  parallel_chunks(n, parts.size(), default_threads(), [&](std::size_t c, std::size_t begin, std::size_t end) {
    kernels::CrossSums acc;
    for (std::size_t i = begin; i < end; ++i) {
      const auto row = k.dcov_row(x.data(), a.data(), x[i], abar - a[i], y.data(), b.data(), y[i],
                                  bbar - b[i], n);
      acc.ab += row.ab;
      acc.aa += row.aa;
      acc.bb += row.bb;
    }
    parts[c] = acc;
  });
  kernels::CrossSums total;
  for (const auto& p : parts) {
    total.ab += p.ab;
    total.aa += p.aa;
    total.bb += p.bb;
  }
  if (total.aa <= 0.0 || total.bb <= 0.0) return 0.0;
  const double r2 = std::max(total.ab, 0.0) / std::sqrt(total.aa * total.bb);
  return std::min(1.0, std::sqrt(r2));
}

double distance_correlation(const Field& x, const Field& y, const std::optional<RegionOfInterest>& roi,
                            std::size_t max_points, std::uint64_t seed) {
  require_same_dims(x, y);
  if (max_points < 2) throw Error(ErrorKind::InvalidArgument, "dCor max_points must be >= 2");
  auto idx = roi_indices(x.dims, roi);
  if (idx.size() > max_points) {
    const rng::CounterRng rng(seed, rng::Stream::DcorSubsample);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> keyed;
    keyed.reserve(idx.size());
    for (auto i : idx) keyed.emplace_back(rng.bits(i), i);
    std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(max_points), keyed.end());
    idx.clear();
    for (std::size_t i = 0; i < max_points; ++i) idx.push_back(keyed[i].second);
    std::sort(idx.begin(), idx.end());
  }
  return distance_correlation(gather(x, idx), gather(y, idx));
}

}  // namespace infosample
