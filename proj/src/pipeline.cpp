#include "infosample/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "infosample/error.hpp"
#include "infosample/fieldio.hpp"
#include "infosample/histogram.hpp"
#include "infosample/parallel.hpp"
#include "infosample/query.hpp"
#include "infosample/sampler.hpp"
#include "infosample/synthetic.hpp"

namespace infosample {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void schema(const std::string& message) {
  throw Error(ErrorKind::SchemaError, "bench config: " + message);
}

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) schema(where + " is missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    schema(where + " has a malformed '" + key + "'");
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

MultiField load_dataset(const json& ds, const fs::path& base_dir) {
  if (!ds.is_object()) schema("'dataset' must be an object");
  if (ds.contains("sidecar")) {
    fs::path p = get<std::string>(ds, "sidecar", "dataset");
    if (p.is_relative()) p = base_dir / p;
    return io::load_multifield(p);
  }
  if (!ds.contains("synthetic")) schema("'dataset' needs 'synthetic' or 'sidecar'");
  if (!ds.contains("seed")) schema("synthetic dataset needs an explicit 'seed'");
  const auto seed = get<std::uint64_t>(ds, "seed", "dataset");
  const json& sj = ds.at("synthetic");
  synth::SyntheticSpec spec;
  if (sj.contains("preset")) {
    const auto preset = get<std::string>(sj, "preset", "dataset.synthetic");
    const auto n = get_or<std::uint32_t>(sj, "n", 64, "dataset.synthetic");
    if (preset == "feature") {
      spec = synth::SyntheticSpec::feature_preset(n);
    } else if (preset == "independent") {
      spec = synth::SyntheticSpec::independent_preset(n, get_or<std::size_t>(sj, "vars", 2, "dataset.synthetic"));
    } else {
      schema("unknown synthetic preset '" + preset + "'");
    }
  } else {
    spec = synth::spec_from_json(sj);
  }
  return synth::make_synthetic(spec, seed);
}

BenchReconstruction parse_reconstruction(const json& rj, const GridDims& dims) {
  if (!rj.is_object()) schema("each reconstruction must be an object");
  BenchReconstruction r;
  r.variable = get<std::string>(rj, "variable", "reconstruction");
  r.name = get_or<std::string>(rj, "name", r.variable, "reconstruction");
  r.partner = get_or<std::string>(rj, "partner", "", "reconstruction");
  const auto where = "reconstruction '" + r.name + "'";
  r.mode.kind = parse_reconstruction_kind(get_or<std::string>(rj, "mode", "delaunay", where));
  r.mode.k = get_or<std::uint32_t>(rj, "k", r.mode.k, where);
  r.mode.power = get_or<double>(rj, "power", r.mode.power, where);
  const SliceSpec slice = parse_slice(get<std::string>(rj, "slice", where));
  r.axis = slice.axis;
  r.slice = slice.index;
  if (r.slice >= dims.extent(static_cast<int>(r.axis))) schema(where + " slice is outside the grid");
  if (rj.contains("roi")) r.roi = clip_roi(parse_roi(get<std::string>(rj, "roi", where)), dims);
  r.metrics = get_or<std::vector<std::string>>(rj, "metrics", {"ssim", "mse", "pearson", "dcor"}, where);
  for (const auto& m : r.metrics) {
    if (m != "ssim" && m != "mse" && m != "pearson" && m != "dcor") {
      schema(where + " has unknown metric '" + m + "'");
    }
    if ((m == "pearson" || m == "dcor") && r.partner.empty()) {
      schema(where + " needs a 'partner' variable for " + m);
    }
  }
  if (r.roi) {
    const int a = static_cast<int>(r.axis);
    if (r.slice < r.roi->lo[a] || r.slice > r.roi->hi[a]) {
      schema(where + " slice does not cross the roi");
    }
  }
  return r;
}

struct Cell {
  std::size_t method;
  std::size_t alpha;
  std::size_t seed;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> warnings;
};

struct ReconReference {
  double lo = 0.0;
  double hi = 1.0;
  RasterImage slice;
  std::optional<PixelRect> rect;
  double pearson = 0.0;
  double dcor = 0.0;
};

bool wants(const BenchReconstruction& r, const char* metric) {
  return std::find(r.metrics.begin(), r.metrics.end(), metric) != r.metrics.end();
}

std::string cell_stem(const std::string& method, double alpha, std::uint64_t seed) {
  return method + "_a" + format_number(alpha) + "_s" + std::to_string(seed);
}

std::string pmi_table_csv(const PointInfoTable& t) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& a : t.axes) out << a.variable << "_bin,";
  out << "raw,normalized\n";
  for (std::size_t s = 0; s < t.bins.size(); ++s) {
    std::uint64_t rest = t.bins[s];
    std::vector<std::uint32_t> coords(t.axes.size());
    for (std::size_t k = t.axes.size(); k-- > 0;) {
      coords[k] = static_cast<std::uint32_t>(rest % t.axes[k].bins);
      rest /= t.axes[k].bins;
    }
    for (auto c : coords) out << c << ',';
    out << t.raw[s] << ',' << t.normalized[s] << '\n';
  }
  return out.str();
}

}  // namespace

BenchConfig parse_bench_config(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) schema("document must be an object");
  const auto version = get<int>(doc, "version", "document");
  if (version != kBenchSchemaVersion) schema("unsupported version " + std::to_string(version));

  BenchConfig c;
  c.document = nlohmann::ordered_json::parse(doc.dump());
  if (!doc.contains("dataset")) schema("document is missing 'dataset'");
  c.data = load_dataset(doc.at("dataset"), base_dir);

  c.variables = get<std::vector<std::string>>(doc, "variables", "document");
  if (c.variables.size() < 2) schema("'variables' needs at least two names");
  for (const auto& v : c.variables) c.data.index_of(v);
  c.bins = get_or<std::uint32_t>(doc, "bins", 128, "document");
  if (c.bins < 1) schema("'bins' must be >= 1");
  const auto norm = get_or<std::string>(doc, "normalization", "minmax", "document");
  if (norm == "minmax") {
    c.normalization = Normalization::MinMax;
  } else if (norm == "clampmax") {
    c.normalization = Normalization::ClampMax;
  } else {
    schema("unknown normalization '" + norm + "'");
  }
  c.exact_quota = get_or<bool>(doc, "exact_quota", false, "document");

  c.methods = get_or<std::vector<std::string>>(doc, "methods", {"random", "pmi"}, "document");
  if (c.methods.empty()) schema("'methods' is empty");
  for (const auto& m : c.methods) {
    if (m != "random" && m != "pmi") schema("unknown method '" + m + "'");
  }
  c.alphas = get<std::vector<double>>(doc, "alphas", "document");
  if (c.alphas.empty()) schema("'alphas' is empty");
  for (double a : c.alphas) {
    if (!(a > 0.0 && a < 1.0)) schema("alpha " + format_number(a) + " is outside (0, 1)");
  }
  c.seeds = get<std::vector<std::uint64_t>>(doc, "seeds", "document");
  if (c.seeds.empty()) schema("'seeds' is empty; every run needs explicit seeds");

  for (const auto& qj : get_or<json>(doc, "queries", json::array(), "document")) {
    BenchQuery q;
    q.text = get<std::string>(qj, "expr", "query");
    q.name = get_or<std::string>(qj, "name", q.text, "query");
    c.queries.push_back(q);
  }
  for (const auto& rj : get_or<json>(doc, "reconstructions", json::array(), "document")) {
    c.reconstructions.push_back(parse_reconstruction(rj, c.data.dims()));
  }
  if (doc.contains("dcor")) {
    const json& d = doc.at("dcor");
    c.dcor_max_points = get_or<std::size_t>(d, "max_points", c.dcor_max_points, "dcor");
    c.dcor_seed = get_or<std::uint64_t>(d, "seed", c.dcor_seed, "dcor");
    if (c.dcor_max_points < 2) schema("'dcor.max_points' must be >= 2");
  }
  std::set<std::string> names;
  for (const auto& q : c.queries) {
    if (!names.insert("q:" + q.name).second) schema("duplicate query name '" + q.name + "'");
  }
  for (const auto& r : c.reconstructions) {
    if (!names.insert("r:" + r.name).second) schema("duplicate reconstruction name '" + r.name + "'");
  }
  return c;
}

BenchConfig load_bench_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open bench config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    schema(std::string("invalid JSON: ") + e.what());
  }
  return parse_bench_config(doc, path.parent_path());
}

const BenchRow* BenchmarkReport::find(const std::string& metric, double alpha,
                                      const std::string& method) const {
  for (const auto& r : rows) {
    if (r.metric == metric && r.alpha == alpha && r.method == method) return &r;
  }
  return nullptr;
}

std::string BenchmarkReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kBenchSchemaVersion;
  j["config"] = config;
  j["reference"] = reference;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"metric", r.metric},
                         {"alpha", r.alpha},
                         {"method", r.method},
                         {"seed_count", r.values.size()},
                         {"values", r.values},
                         {"mean", r.mean},
                         {"stddev", r.stddev}});
  }
  return j.dump(2) + "\n";
}

std::string BenchmarkReport::to_markdown() const {
  std::ostringstream out;
  out << "| metric | alpha | method | seeds | mean | stddev |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    out << "| " << r.metric << " | " << format_number(r.alpha) << " | " << r.method << " | "
        << r.values.size() << " | " << format_number(r.mean) << " | " << format_number(r.stddev)
        << " |\n";
  }
  return out.str();
}

BenchmarkReport run_pipeline(const BenchConfig& c, const std::optional<fs::path>& artifacts_dir) {
  const MultiField& mf = c.data;
  const GridDims& dims = mf.dims();
  if (artifacts_dir) fs::create_directories(*artifacts_dir);

  BenchmarkReport report;
  report.config = c.document;
  report.reference["grid_points"] = dims.count();

  HistogramOptions hopt;
  hopt.bins = c.bins;
  const HistogramBuild hb = build_joint(mf, c.variables, hopt);
  const PointInfoTable table = pmi_table(hb.histogram, c.normalization);
  std::vector<AcceptanceTable> acceptance;
  for (double a : c.alphas) acceptance.push_back(build_acceptance(table, hb.histogram, SamplingFraction(a)));
  report.reference["occupied_bins"] = table.bins.size();
  if (artifacts_dir) {
    std::ofstream(*artifacts_dir / "pmi_table.csv") << pmi_table_csv(table);
  }

  std::vector<QueryExpr> queries;
  std::vector<QueryResult> truth;
  for (const auto& q : c.queries) {
    queries.push_back(parse_query(q.text));
    truth.push_back(query_raw(mf, queries.back()));
    report.reference["query_size:" + q.name] = truth.back().indices.size();
  }

  std::vector<ReconReference> refs;
  for (const auto& r : c.reconstructions) {
    ReconReference ref;
    const Field& raw = mf.variable(r.variable);
    const auto [lo, hi] = std::minmax_element(raw.values.begin(), raw.values.end());
    ref.lo = *lo;
    ref.hi = *hi > *lo ? *hi : *lo + 1.0;
    ref.slice = rasterize_slice(raw, r.axis, r.slice, ref.lo, ref.hi);
    if (r.roi) ref.rect = roi_on_slice(*r.roi, r.axis);
    if (wants(r, "pearson")) {
      ref.pearson = pearson(raw, mf.variable(r.partner), r.roi);
      report.reference["pearson:" + r.name] = ref.pearson;
    }
    if (wants(r, "dcor")) {
      ref.dcor = distance_correlation(raw, mf.variable(r.partner), r.roi, c.dcor_max_points, c.dcor_seed);
      report.reference["dcor:" + r.name] = ref.dcor;
    }
    if (artifacts_dir) write_png(ref.slice, (*artifacts_dir / ("raw_" + r.name + ".png")).string());
    refs.push_back(std::move(ref));
  }

  std::vector<Cell> cells;
  for (std::size_t m = 0; m < c.methods.size(); ++m)
    for (std::size_t a = 0; a < c.alphas.size(); ++a)
      for (std::size_t s = 0; s < c.seeds.size(); ++s) cells.push_back({m, a, s, {}, {}});

  auto run_cell = [&](Cell& cell) {
    const std::string& method = c.methods[cell.method];
    const double alpha = c.alphas[cell.alpha];
    const std::uint64_t seed = c.seeds[cell.seed];
    const SampledPointSet ps =
        method == "random"
            ? random_sample(mf, SamplingFraction(alpha), seed)
            : pmi_sample(mf, hb.assignment, acceptance[cell.alpha], seed, c.exact_quota);
    const std::string stem = cell_stem(method, alpha, seed);
    if (artifacts_dir) io::save_pointset(ps, *artifacts_dir / (stem + ".mvsp"));
    cell.metrics.emplace_back("sample_count", static_cast<double>(ps.size()));

    for (std::size_t q = 0; q < queries.size(); ++q) {
      const double j = jaccard(truth[q], query_sampled(ps, queries[q]), &cell.warnings);
      cell.metrics.emplace_back("jaccard:" + c.queries[q].name, j);
    }
    for (std::size_t i = 0; i < c.reconstructions.size(); ++i) {
      const auto& r = c.reconstructions[i];
      const auto& ref = refs[i];
      std::vector<std::string> vars{r.variable};
      const bool pair = wants(r, "pearson") || wants(r, "dcor");
      if (pair) vars.push_back(r.partner);
      auto rec = reconstruct(ps, vars, dims, r.mode);
      for (const auto& w : rec.front().warnings) cell.warnings.push_back(w);
      const RasterImage img = rasterize_slice(rec[0].field, r.axis, r.slice, ref.lo, ref.hi);
      if (artifacts_dir) write_png(img, (*artifacts_dir / (stem + "_" + r.name + ".png")).string());
      if (wants(r, "ssim")) cell.metrics.emplace_back("ssim:" + r.name, ssim(ref.slice, img));
      if (wants(r, "mse")) {
        cell.metrics.emplace_back("mse_slice:" + r.name, mse(ref.slice, img));
        if (ref.rect) {
          const auto& p = *ref.rect;
          cell.metrics.emplace_back("mse_roi:" + r.name, mse(ref.slice.crop(p.x0, p.y0, p.x1, p.y1),
                                                            img.crop(p.x0, p.y0, p.x1, p.y1)));
        }
      }
      if (wants(r, "pearson")) {
        const double v = pearson(rec[0].field, rec[1].field, r.roi);
        cell.metrics.emplace_back("pearson:" + r.name, v);
        cell.metrics.emplace_back("pearson_abs_err:" + r.name, std::abs(v - ref.pearson));
      }
      if (wants(r, "dcor")) {
        const double v = distance_correlation(rec[0].field, rec[1].field, r.roi, c.dcor_max_points,
                                              c.dcor_seed);
        cell.metrics.emplace_back("dcor:" + r.name, v);
        cell.metrics.emplace_back("dcor_abs_err:" + r.name, std::abs(v - ref.dcor));
      }
    }
  };

  const unsigned threads = default_threads();
  parallel_chunks(cells.size(), cells.size(), threads,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    const ScopedThreads inner(1);
                    for (std::size_t i = begin; i < end; ++i) run_cell(cells[i]);
                  });

  using Key = std::tuple<std::string, double, std::string>;
  std::map<Key, std::vector<double>> values;
  std::set<std::string> warnings;
  for (const auto& cell : cells) {
    for (const auto& [metric, v] : cell.metrics) {
      auto& slot = values[{metric, c.alphas[cell.alpha], c.methods[cell.method]}];
      slot.resize(c.seeds.size());
      slot[cell.seed] = v;
    }
    warnings.insert(cell.warnings.begin(), cell.warnings.end());
  }
  for (auto& [key, v] : values) {
    BenchRow row{std::get<0>(key), std::get<1>(key), std::get<2>(key), v, 0.0, 0.0};
    double sum = 0.0;
    for (double x : v) sum += x;
    row.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - row.mean) * (x - row.mean);
      row.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    report.rows.push_back(std::move(row));
  }
  report.reference["warnings"] = std::vector<std::string>(warnings.begin(), warnings.end());
  return report;
}

}  // namespace infosample
