// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "infosample/error.hpp"
#include "infosample/histogram.hpp"
#include "infosample/pipeline.hpp"
#include "infosample/pointinfo.hpp"
#include "infosample/query.hpp"
#include "infosample/random.hpp"
#include "infosample/reconstruct.hpp"
#include "infosample/sampler.hpp"
#include "infosample/synthetic.hpp"

using namespace infosample;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kFeatureQuery = "1.19 < v0 < 1.21 AND -0.21 < v1 < -0.19";
constexpr const char* kBackgroundQuery = "v0 < 0.5";
constexpr std::uint64_t kDataSeed = 7;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Random dense count table with B_k <= 8 bins per axis and counts <= 20.
JointHistogram random_table(const rng::CounterRng& g, std::uint64_t& ctr, std::size_t d) {
  std::vector<AxisBinning> axes;
  std::uint64_t cells = 1;
  for (std::size_t k = 0; k < d; ++k) {
    const auto b = static_cast<std::uint32_t>(2 + g.bits(ctr++) % 7);
    axes.push_back({"v" + std::to_string(k), 0.0, 1.0, b});
    cells *= b;
  }
  std::vector<std::uint64_t> counts(cells);
  for (auto& c : counts) c = g.uniform(ctr++) < 0.3 ? 0 : g.bits(ctr++) % 21;
  if (std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; })) counts[0] = 1;
  return JointHistogram::from_dense(axes, counts);
}

// Dense row-major counts and per-axis marginal counts.
struct Tally {
  std::vector<std::uint32_t> bins;
  std::vector<std::uint64_t> counts;
  std::vector<std::vector<std::uint64_t>> marg;
  double total = 0;
};

Tally tally(const JointHistogram& h) {
  Tally t;
  for (const auto& a : h.axes()) t.bins.push_back(a.bins);
  t.counts.resize(h.bin_count());
  t.marg.resize(t.bins.size());
  for (std::size_t k = 0; k < t.bins.size(); ++k) t.marg[k].assign(t.bins[k], 0);
  for (std::uint64_t f = 0; f < h.bin_count(); ++f) {
    t.counts[f] = h.count(f);
    t.total += static_cast<double>(t.counts[f]);
    std::uint64_t rest = f;
    for (std::size_t k = t.bins.size(); k-- > 0;) {
      t.marg[k][rest % t.bins[k]] += t.counts[f];
      rest /= t.bins[k];
    }
  }
  return t;
}

// log( p(b) / prod p_k(b_k) ) straight from the count table.
double brute_pmi(const Tally& t, std::uint64_t f) {
  if (t.counts[f] == 0) return 0.0;
  double joint = static_cast<double>(t.counts[f]) / t.total;
  double prod = 1.0;
  std::uint64_t rest = f;
  for (std::size_t k = t.bins.size(); k-- > 0;) {
    prod *= static_cast<double>(t.marg[k][rest % t.bins[k]]) / t.total;
    rest /= t.bins[k];
  }
  return std::log(joint / prod);
}

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  const rng::CounterRng g(101, 0);
  std::uint64_t ctr = 0;
  double worst = 0.0;
  std::size_t bins_checked = 0;
  for (std::size_t d : {2, 3}) {
    for (int inst = 0; inst < 50; ++inst) {
      const auto h = random_table(g, ctr, d);
      const auto t = tally(h);
      const auto table = pmi_table(h);
      for (std::uint64_t f = 0; f < h.bin_count(); ++f) {
        worst = std::max(worst, std::abs(table.raw_at(f) - brute_pmi(t, f)));
        ++bins_checked;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 1.0,
          fmt("100 tables (50 d=2, 50 d=3), %.0f bins, max |err| %.3g, %.3f s", double(bins_checked), worst,
              secs)};
}

Outcome ac2() {
  const rng::CounterRng g(101, 0);
  std::uint64_t ctr = 0;
  double worst = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const auto h = random_table(g, ctr, 2);
    const auto t = tally(h);
    double expect = 0.0;
    for (std::uint64_t f = 0; f < h.bin_count(); ++f) {
      expect += static_cast<double>(t.counts[f]) / t.total * brute_pmi(t, f);
    }
    const double mi = mutual_information(h), tc = total_correlation(h);
    worst = std::max({worst, std::abs(mi - expect), std::abs(tc - expect), std::abs(mi - tc)});
  }
  return {worst <= 1e-12, fmt("50 tables d=2, max deviation among MI, sum p*PMI, TC %.3g", worst)};
}

Outcome ac3() {
  const auto t0 = std::chrono::steady_clock::now();
  const rng::CounterRng g(202, 0);
  std::uint64_t ctr = 0;
  int ok = 0, saturating = 0, instances = 0;
  double worst_rel = 0.0, worst_p = 0.0;
  while (instances < 100) {
    const auto h = random_table(g, ctr, 2 + g.bits(ctr++) % 2);
    const auto norm = instances % 2 ? Normalization::ClampMax : Normalization::MinMax;
    const auto table = pmi_table(h, norm);
    const auto& w = table.normalized;
    const auto& c = h.occupied_counts();
    double positive = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) positive += w[i] > 0 ? static_cast<double>(c[i]) : 0.0;
    if (positive == 0.0) continue;
    const double total = static_cast<double>(h.total_count());
    // Half the instances push alpha towards the positive mass to force saturation.
    const double frac = instances % 4 < 2 ? 0.05 + 0.9 * g.uniform(ctr++) : 0.9 + 0.1 * g.uniform(ctr++);
    const double alpha = std::min(frac * positive / total, 0.999);
    const SamplingFraction sf(alpha);
    const double n = static_cast<double>(sf.target(h.total_count()));
    if (n < 1 || n > positive) continue;
    ++instances;

    auto yield = [&](double gamma) {
      double y = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) y += std::min(1.0, gamma * w[i]) * static_cast<double>(c[i]);
      return y;
    };
    double lo = 0.0, hi = 1.0;
    while (yield(hi) < n) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (yield(mid) < n ? lo : hi) = mid;
    }
    const double gamma = hi;

    const auto acc = build_acceptance(table, h, sf);
    double max_dp = 0.0;
    bool sat = false;
    double y_lib = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      max_dp = std::max(max_dp, std::abs(acc.per_bin[i] - std::min(1.0, gamma * w[i])));
      sat = sat || acc.per_bin[i] >= 1.0;
      y_lib += acc.per_bin[i] * static_cast<double>(c[i]);
    }
    const double rel = std::abs(y_lib - n) / n;
    worst_rel = std::max(worst_rel, rel);
    worst_p = std::max(worst_p, max_dp);
    saturating += sat;
    ok += rel <= 0.005 && max_dp <= 1e-6;
  }
  const double secs = seconds_since(t0);
  return {ok == 100 && saturating > 0 && secs < 1.0,
          fmt("%.0f/100 within 0.5%% (worst %.3g), %.0f saturating, max |p - oracle| %.3g", ok, worst_rel,
              saturating, worst_p) +
              fmt(", %.3f s", secs)};
}

struct FeatureData {
  synth::SyntheticSpec spec;
  MultiField mf;
  HistogramBuild hb;
  PointInfoTable table;
};

const FeatureData& feature_data() {
  static const FeatureData d = [] {
    FeatureData f;
    f.spec = synth::SyntheticSpec::feature_preset(64);
    f.mf = synth::make_synthetic(f.spec, kDataSeed);
    f.hb = build_joint(f.mf, {"v0", "v1"});
    f.table = pmi_table(f.hb.histogram);
    return f;
  }();
  return d;
}

Outcome ac4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& d = feature_data();
  const std::uint64_t n = d.mf.dims().count();
  std::string detail;
  bool pass = true;
  for (double a : {0.01, 0.05}) {
    const SamplingFraction sf(a);
    const auto acc = build_acceptance(d.table, d.hb.histogram, sf);
    const double expect = a * static_cast<double>(n);
    const double sigma = std::sqrt(static_cast<double>(n) * a * (1.0 - a));
    int in_random = 0, in_pmi = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const double r = static_cast<double>(random_sample_indices(n, sf, seed).size());
      const double p = static_cast<double>(pmi_sample_indices(d.hb.assignment, acc, seed).size());
      in_random += std::abs(r - expect) <= 3 * sigma;
      in_pmi += std::abs(p - expect) <= 3 * sigma;
    }
    pass = pass && in_random >= 95 && in_pmi >= 95;
    detail += fmt("a=%.2f random %.0f/100 pmi %.0f/100; ", a, in_random, in_pmi);
  }
  const double secs = seconds_since(t0);
  return {pass && secs < 30.0, detail + fmt("%.2f s", secs)};
}

json feature_dataset(std::uint32_t n = 64) {
  return {{"synthetic", {{"preset", "feature"}, {"n", n}}}, {"seed", kDataSeed}};
}

json seeds(int count) {
  json s = json::array();
  for (int i = 1; i <= count; ++i) s.push_back(i);
  return s;
}

struct QueryBench {
  BenchmarkReport report;
  double seconds = 0;
};

const QueryBench& query_bench() {
  static const QueryBench b = [] {
    const auto t0 = std::chrono::steady_clock::now();
    json cfg = {{"version", 1},
                {"dataset", feature_dataset()},
                {"variables", {"v0", "v1"}},
                {"alphas", {0.01, 0.03, 0.05}},
                {"seeds", seeds(10)},
                {"queries", {{{"name", "feature"}, {"expr", kFeatureQuery}},
                             {{"name", "background"}, {"expr", kBackgroundQuery}}}}};
    QueryBench q;
    q.report = run_pipeline(parse_bench_config(cfg, "."));
    q.seconds = seconds_since(t0);
    return q;
  }();
  return b;
}

Outcome ac5() {
  const auto& b = query_bench();
  const double q = b.report.reference["query_size:feature"].get<double>();
  bool pass = b.seconds < 120.0;
  std::string detail = fmt("|Q| = %.0f; ", q);
  for (double a : {0.01, 0.03, 0.05}) {
    const double jr = b.report.find("jaccard:feature", a, "random")->mean;
    const double jp = b.report.find("jaccard:feature", a, "pmi")->mean;
    // Random sampling keeps each query point with probability a, so J ~ Bin(|Q|, a) / |Q|.
    const double sigma = std::sqrt(a * (1 - a) / (q * 10.0));
    const bool ok = jp >= 2 * jr && std::abs(jr - a) <= 3 * sigma;
    pass = pass && ok;
    detail += fmt("a=%.2f J(pmi) %.4f J(random) %.4f (3 sigma %.4f); ", a, jp, jr, 3 * sigma);
  }
  return {pass, detail + fmt("%.1f s", b.seconds)};
}

Outcome ac6() {
  const auto& b = query_bench();
  bool pass = true;
  std::string detail;
  int large = 0;
  for (const char* name : {"feature", "background"}) {
    const double q = b.report.reference[std::string("query_size:") + name].get<double>();
    if (q < 1e4) continue;
    ++large;
    for (double a : {0.01, 0.03, 0.05}) {
      const double jr = b.report.find(std::string("jaccard:") + name, a, "random")->mean;
      const bool ok = std::abs(jr - a) < 0.2 * a;
      pass = pass && ok;
      detail += std::string(name) + fmt(" a=%.2f %.4f; ", a, jr);
    }
  }
  return {pass && large > 0, detail.substr(0, detail.size() - 2)};
}

// Hull membership by brute force: a triple spans a facet when every other
// sample lies on one side of its plane.
struct HullOracle {
  std::vector<std::array<std::int64_t, 4>> planes;  // n . x <= c on the inside

  explicit HullOracle(const std::vector<std::array<std::int64_t, 3>>& p) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          const std::array<std::int64_t, 3> u{p[j][0] - p[i][0], p[j][1] - p[i][1], p[j][2] - p[i][2]};
          const std::array<std::int64_t, 3> v{p[k][0] - p[i][0], p[k][1] - p[i][1], p[k][2] - p[i][2]};
          const std::array<std::int64_t, 3> nn{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                               u[0] * v[1] - u[1] * v[0]};
          if (nn == std::array<std::int64_t, 3>{0, 0, 0}) continue;
          const std::int64_t c = nn[0] * p[i][0] + nn[1] * p[i][1] + nn[2] * p[i][2];
          bool above = false, below = false;
          for (std::size_t m = 0; m < n && !(above && below); ++m) {
            const std::int64_t s = nn[0] * p[m][0] + nn[1] * p[m][1] + nn[2] * p[m][2] - c;
            above = above || s > 0;
            below = below || s < 0;
          }
          if (above && below) continue;
          if (above) planes.push_back({-nn[0], -nn[1], -nn[2], -c});
          else planes.push_back({nn[0], nn[1], nn[2], c});
        }
  }
  bool inside(std::int64_t x, std::int64_t y, std::int64_t z) const {
    for (const auto& pl : planes) {
      if (pl[0] * x + pl[1] * y + pl[2] * z > pl[3]) return false;
    }
    return true;
  }
};

Outcome ac7() {
  const auto t0 = std::chrono::steady_clock::now();
  const MultiField mf = synth::make_synthetic(synth::SyntheticSpec::feature_preset(32), kDataSeed);
  const GridDims& dims = mf.dims();
  std::vector<std::uint64_t> all(dims.count());
  for (std::uint64_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto full = SampledPointSet::gather(mf, all);
  const auto& raw = mf.variable("v0").values;
  const auto nn = reconstruct(full, "v0", dims, ReconstructionMode::nearest());
  const auto del = reconstruct(full, "v0", dims, ReconstructionMode::delaunay());
  const bool nn_exact = nn.field.values == raw;
  double del_err = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    del_err = std::max(del_err, std::abs(del.field.values[i] - raw[i]) / std::max(1.0, std::abs(raw[i])));
  }

  // Affine field from 200 random samples.
  auto affine = [](const GridIndex& g) { return 2.0 * g.i + 3.0 * g.j - 1.0 * g.k + 1.0; };
  std::vector<double> av(dims.count());
  for (std::uint64_t i = 0; i < av.size(); ++i) av[i] = affine(dims.delinearize(i));
  std::vector<Field> fields;
  fields.emplace_back("f", dims, av);
  const MultiField amf(dims, std::move(fields));
  double affine_err = 0.0;
  std::uint64_t inside = 0;
  bool affine_ok = true;
  for (std::uint64_t seed : {1, 2, 3}) {
    const rng::CounterRng g(seed, 31);
    std::vector<std::uint64_t> idx;
    for (std::uint64_t c = 0; idx.size() < 200; ++c) {
      const std::uint64_t i = g.bits(c) % dims.count();
      if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end());
    const auto ps = SampledPointSet::gather(amf, idx);
    const auto r = reconstruct(ps, "f", dims, ReconstructionMode::delaunay());
    affine_ok = affine_ok && r.warnings.empty();
    std::vector<std::array<std::int64_t, 3>> pts;
    for (auto i : idx) {
      const GridIndex gi = dims.delinearize(i);
      pts.push_back({gi.i, gi.j, gi.k});
    }
    const HullOracle hull(pts);
    for (std::uint64_t i = 0; i < dims.count(); ++i) {
      const GridIndex gi = dims.delinearize(i);
      if (!hull.inside(gi.i, gi.j, gi.k)) continue;
      ++inside;
      affine_err = std::max(affine_err, std::abs(r.field.values[i] - affine(gi)));
    }
  }
  const double secs = seconds_since(t0);
  return {nn_exact && del_err <= 1e-12 && affine_ok && affine_err <= 1e-9 && inside > 0 && secs < 30.0,
          std::string(nn_exact ? "nearest bit-exact" : "nearest NOT exact") +
              fmt(", delaunay max rel err %.3g, affine max err %.3g over %.0f in-hull points (3 seeds), %.2f s",
                  del_err, affine_err, double(inside), secs)};
}

struct ReconBench {
  BenchmarkReport report;
  double seconds = 0;
};

const ReconBench& recon_bench() {
  static const ReconBench b = [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = synth::SyntheticSpec::feature_preset(64);
    const Box3 core = spec.features.at(0).core_box(spec.dims);
    const auto roi = std::to_string(core.lo[0]) + ":" + std::to_string(core.hi[0]) + "," +
                     std::to_string(core.lo[1]) + ":" + std::to_string(core.hi[1]) + "," +
                     std::to_string(core.lo[2]) + ":" + std::to_string(core.hi[2]);
    const auto zc = static_cast<int>(std::lround(spec.features.at(0).center[2]));
    json cfg = {{"version", 1},
                {"dataset", feature_dataset()},
                {"variables", {"v0", "v1"}},
                {"alphas", {0.01, 0.05}},
                {"seeds", seeds(10)},
                {"reconstructions",
                 {{{"name", "v0"},
                   {"variable", "v0"},
                   {"partner", "v1"},
                   {"mode", "delaunay"},
                   {"slice", "z:" + std::to_string(zc)},
                   {"roi", roi}}}}};
    ReconBench r;
    r.report = run_pipeline(parse_bench_config(cfg, "."));
    r.seconds = seconds_since(t0);
    return r;
  }();
  return b;
}

int wins(const BenchmarkReport& rep, const std::string& metric, double a, bool higher_better) {
  const auto& p = rep.find(metric, a, "pmi")->values;
  const auto& r = rep.find(metric, a, "random")->values;
  int w = 0;
  for (std::size_t i = 0; i < p.size(); ++i) w += higher_better ? p[i] > r[i] : p[i] < r[i];
  return w;
}

int wins_or_ties(const BenchmarkReport& rep, const std::string& metric, double a) {
  const auto& p = rep.find(metric, a, "pmi")->values;
  const auto& r = rep.find(metric, a, "random")->values;
  int w = 0;
  for (std::size_t i = 0; i < p.size(); ++i) w += p[i] <= r[i];
  return w;
}

Outcome ac8() {
  const auto& b = recon_bench();
  const int ssim_w = wins(b.report, "ssim:v0", 0.01, true);
  const int roi_w = wins(b.report, "mse_roi:v0", 0.01, false);
  const int slice_w = wins(b.report, "mse_slice:v0", 0.01, false);
  return {ssim_w >= 8 && roi_w >= 8,
          fmt("a=0.01 pmi wins SSIM %.0f/10, feature-ROI MSE %.0f/10 (full-slice MSE %.0f/10, diagnostic); "
              "mean SSIM pmi %.4f",
              ssim_w, roi_w, slice_w, b.report.find("ssim:v0", 0.01, "pmi")->mean) +
              fmt(" random %.4f; bench %.1f s", b.report.find("ssim:v0", 0.01, "random")->mean, b.seconds)};
}

Outcome ac9() {
  const auto& b = recon_bench();
  const int pw = wins_or_ties(b.report, "pearson_abs_err:v0", 0.05);
  const int dw = wins_or_ties(b.report, "dcor_abs_err:v0", 0.05);
  return {pw >= 7 && dw >= 7,
          fmt("a=0.05 pmi error <= random: Pearson %.0f/10, dCor %.0f/10 (raw ROI pearson %.4f dcor %.4f)", pw, dw,
              b.report.reference["pearson:v0"].get<double>(), b.report.reference["dcor:v0"].get<double>())};
}

Outcome ac10() {
  const auto& d = feature_data();
  std::vector<std::array<double, 2>> centres;
  std::vector<double> jac;
  double coarse_w[2] = {0, 0};
  for (std::uint32_t bins : {64, 128, 256}) {
    HistogramOptions opt;
    opt.bins = bins;
    const auto hb = build_joint(d.mf, {"v0", "v1"}, opt);
    const auto table = pmi_table(hb.histogram);
    const auto best = hb.histogram.unflatten(table.argmax());
    const auto& axes = hb.histogram.axes();
    centres.push_back({axes[0].center(best[0]), axes[1].center(best[1])});
    if (bins == 64) {
      coarse_w[0] = axes[0].width();
      coarse_w[1] = axes[1].width();
    }
    const auto acc = build_acceptance(table, hb.histogram, SamplingFraction(0.05));
    const auto truth = query_raw(d.mf, parse_query(kFeatureQuery));
    std::vector<double> js;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      QueryResult sampled;
      const auto idx = pmi_sample_indices(hb.assignment, acc, seed);
      std::set_intersection(idx.begin(), idx.end(), truth.indices.begin(), truth.indices.end(),
                            std::back_inserter(sampled.indices));
      sampled.dims = truth.dims;
      js.push_back(jaccard(sampled, truth));
    }
    jac.push_back(mean(js));
  }
  double drift = 0.0;
  for (const auto& c : centres) {
    for (int a = 0; a < 2; ++a) drift = std::max(drift, std::abs(c[a] - centres[0][a]) / coarse_w[a]);
  }
  const auto [jlo, jhi] = std::minmax_element(jac.begin(), jac.end());
  const double spread = (*jhi - *jlo) / *jlo;
  return {drift < 2.0 && spread < 0.15,
          fmt("max-PMI bin centre drift %.3g coarse widths; J(pmi, a=0.05) B=64 %.4f B=128 %.4f B=256 %.4f", drift,
              jac[0], jac[1], jac[2]) +
              fmt(" (spread %.1f%%)", 100 * spread)};
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(INFOSAMPLE_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome ac11() {
  const fs::path dir = fs::temp_directory_path() / ("infosample_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  json cfg = {{"version", 1},
              {"dataset", feature_dataset(32)},
              {"variables", {"v0", "v1"}},
              {"alphas", {0.01, 0.05}},
              {"seeds", {1, 2, 3}},
              {"queries", {{{"name", "feature"}, {"expr", kFeatureQuery}}}},
              {"reconstructions",
               {{{"name", "v0"}, {"variable", "v0"}, {"partner", "v1"}, {"slice", "z:16"}, {"roi", "11:21,11:21,14:18"}}}}};
  std::ofstream(dir / "bench.json") << cfg.dump(2);
  const std::string base = "bench --config " + (dir / "bench.json").string() + " --out ";
  const int c1 = run_cli("--threads 1 " + base + (dir / "a.json").string());
  const int c2 = run_cli("--threads 1 " + base + (dir / "b.json").string());
  const int c3 = run_cli("--threads 8 " + base + (dir / "c.json").string());
  const std::string a = slurp(dir / "a.json"), b = slurp(dir / "b.json"), c = slurp(dir / "c.json");
  fs::remove_all(dir);
  const bool ok = c1 == 0 && c2 == 0 && c3 == 0 && !a.empty() && a == b && a == c;
  return {ok, fmt("3 runs (threads 1, 1, 8): exit %.0f/%.0f/%.0f, %.0f-byte report, ", c1, c2, c3, double(a.size())) +
                  (a == b && a == c ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},  {"AC5", ac5},  {"AC6", ac6},
      {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}};
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%-4s %s  %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
