// Command-line front end: synth, sample, pmi-plot, pmi-field, query,
// reconstruct, eval and bench.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "infosample/error.hpp"
#include "infosample/evaluate.hpp"
#include "infosample/fieldio.hpp"
#include "infosample/histogram.hpp"
#include "infosample/parallel.hpp"
#include "infosample/pipeline.hpp"
#include "infosample/pointinfo.hpp"
#include "infosample/query.hpp"
#include "infosample/reconstruct.hpp"
#include "infosample/sampler.hpp"
#include "infosample/synthetic.hpp"

namespace fs = std::filesystem;
using namespace infosample;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Normalization parse_normalization(const std::string& s) {
  if (s == "minmax") return Normalization::MinMax;
  if (s == "clampmax") return Normalization::ClampMax;
  throw Error(ErrorKind::InvalidArgument, "normalization must be minmax or clampmax");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

void log_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) spdlog::warn("{}", w);
}

struct PmiInputs {
  std::string input;
  std::string vars;
  std::uint32_t bins = 128;
  std::string normalization = "minmax";

  void add(CLI::App* cmd) {
    cmd->add_option("input", input, "Input sidecar")->required();
    cmd->add_option("--vars", vars, "Comma-separated variables")->required();
    cmd->add_option("--bins", bins, "Bins per axis")->check(CLI::PositiveNumber);
    cmd->add_option("--normalization", normalization, "minmax or clampmax");
  }
};

struct PmiState {
  MultiField mf;
  HistogramBuild hb;
  PointInfoTable table;
};

PmiState build_pmi(const PmiInputs& in) {
  PmiState s;
  s.mf = io::load_multifield(in.input);
  HistogramOptions opt;
  opt.bins = in.bins;
  s.hb = build_joint(s.mf, split_list(in.vars), opt);
  s.table = pmi_table(s.hb.histogram, parse_normalization(in.normalization));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_st("infosample");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"PMI-guided importance sampling of multivariate grid data"};
  app.require_subcommand(1);
  unsigned threads = 1;
  std::string log_level = "info";
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  std::string synth_preset = "feature", synth_spec, synth_out, synth_spec_out;
  std::uint32_t synth_n = 64;
  std::uint64_t synth_seed = 0;
  synth_cmd->add_option("--preset", synth_preset, "feature or independent")
      ->check(CLI::IsMember({"feature", "independent"}));
  synth_cmd->add_option("--spec", synth_spec, "Synthetic spec JSON (overrides --preset)");
  synth_cmd->add_option("--n", synth_n, "Grid points per axis for presets")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth_seed, "Generator seed")->required();
  synth_cmd->add_option("--out", synth_out, "Output sidecar path")->required();
  synth_cmd->add_option("--write-spec", synth_spec_out, "Also write the resolved spec JSON");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Sample a dataset");
  std::string sample_input, sample_method = "pmi", sample_vars, sample_out, sample_norm = "minmax";
  double sample_alpha = 0.0;
  std::uint32_t sample_bins = 128;
  std::uint64_t sample_seed = 0;
  bool sample_exact = false;
  sample_cmd->add_option("input", sample_input, "Input sidecar")->required();
  sample_cmd->add_option("--method", sample_method, "random or pmi")
      ->check(CLI::IsMember({"random", "pmi"}));
  sample_cmd->add_option("--vars", sample_vars, "Comma-separated variables for the PMI table");
  sample_cmd->add_option("--alpha", sample_alpha, "Sampling fraction")->required();
  sample_cmd->add_option("--bins", sample_bins, "Bins per axis")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", sample_seed, "Sampling seed")->required();
  sample_cmd->add_flag("--exact-quota", sample_exact, "Keep exactly round(p * count) points per bin");
  sample_cmd->add_option("--normalization", sample_norm, "minmax or clampmax");
  sample_cmd->add_option("--out", sample_out, "Output point-set file")->required();

  // pmi-plot
  auto* plot_cmd = app.add_subcommand("pmi-plot", "Write a 2-D PMI table as CSV and PNG");
  PmiInputs plot_in;
  plot_in.add(plot_cmd);
  std::string plot_csv, plot_png;
  plot_cmd->add_option("--csv", plot_csv, "CSV output (binX,binY,raw,normalized)");
  plot_cmd->add_option("--png", plot_png, "Heatmap PNG (row = Y bin, column = X bin)");

  // pmi-field
  auto* field_cmd = app.add_subcommand("pmi-field", "Write the per-point PMI field as a brick");
  PmiInputs field_in;
  field_in.add(field_cmd);
  std::string field_mode = "raw", field_out;
  field_cmd->add_option("--mode", field_mode, "raw or normalized")
      ->check(CLI::IsMember({"raw", "normalized"}));
  field_cmd->add_option("--out", field_out, "Output brick")->required();

  // query
  auto* query_cmd = app.add_subcommand("query", "Run a range query");
  std::string query_text, query_input, query_truth, query_out;
  query_cmd->add_option("--query", query_text, "Query expression")->required();
  query_cmd->add_option("--input", query_input, "Sidecar or point-set file")->required();
  query_cmd->add_option("--ground-truth", query_truth, "Raw sidecar; reports the Jaccard index");
  query_cmd->add_option("--out", query_out, "Matching indices (.csv or little-endian u64)");

  // reconstruct
  auto* recon_cmd = app.add_subcommand("reconstruct", "Rebuild a grid field from samples");
  std::string recon_input, recon_vars, recon_mode = "delaunay", recon_out;
  std::uint32_t recon_k = 8;
  double recon_power = 2.0;
  recon_cmd->add_option("--input", recon_input, "Point-set file")->required();
  recon_cmd->add_option("--var", recon_vars, "Variable, or comma-separated variables")->required();
  recon_cmd->add_option("--mode", recon_mode, "delaunay, idw, nearest or segment");
  recon_cmd->add_option("--k", recon_k, "IDW neighbour count");
  recon_cmd->add_option("--power", recon_power, "IDW power");
  recon_cmd->add_option("--out", recon_out, "Output sidecar path (one brick per variable)")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Compare a reconstruction with the raw data");
  std::string eval_raw, eval_recon, eval_var, eval_metrics = "ssim,mse", eval_slice, eval_roi,
                                              eval_pair, eval_png, eval_out;
  std::size_t eval_dcor_points = kDefaultDcorPoints;
  std::uint64_t eval_dcor_seed = kDefaultDcorSeed;
  eval_cmd->add_option("--raw", eval_raw, "Raw sidecar")->required();
  eval_cmd->add_option("--recon", eval_recon, "Reconstructed sidecar or brick")->required();
  eval_cmd->add_option("--var", eval_var, "Variable compared by ssim/mse")->required();
  eval_cmd->add_option("--metrics", eval_metrics, "Comma-separated: ssim,mse,pearson,dcor");
  eval_cmd->add_option("--slice", eval_slice, "Slice axis:index for ssim/mse (default z:middle)");
  eval_cmd->add_option("--roi", eval_roi, "Region x0:x1,y0:y1,z0:z1");
  eval_cmd->add_option("--pair", eval_pair, "Two variables a,b for pearson/dcor");
  eval_cmd->add_option("--dcor-points", eval_dcor_points, "dCor subsample size");
  eval_cmd->add_option("--dcor-seed", eval_dcor_seed, "dCor subsample seed");
  eval_cmd->add_option("--png-dir", eval_png, "Directory for the compared slice PNGs");
  eval_cmd->add_option("--out", eval_out, "JSON metrics report (stdout when absent)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run the sampling benchmark");
  std::string bench_config, bench_out, bench_md, bench_artifacts;
  bench_cmd->add_option("--config", bench_config, "Benchmark config JSON")->required();
  bench_cmd->add_option("--out", bench_out, "JSON report")->required();
  bench_cmd->add_option("--markdown", bench_md, "Markdown report");
  bench_cmd->add_option("--artifacts", bench_artifacts, "Directory for intermediate artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  spdlog::set_level(spdlog::level::from_str(log_level));
  set_default_threads(threads);

  try {
    if (*synth_cmd) {
      synth::SyntheticSpec spec;
      if (!synth_spec.empty()) {
        std::ifstream in(synth_spec);
        if (!in) throw Error(ErrorKind::Io, "cannot open " + synth_spec);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorKind::InvalidSpec, std::string("spec is not valid JSON: ") + e.what());
        }
        spec = synth::spec_from_json(j);
      } else {
        spec = synth_preset == "feature" ? synth::SyntheticSpec::feature_preset(synth_n)
                                         : synth::SyntheticSpec::independent_preset(synth_n);
      }
      const MultiField mf = synth::make_synthetic(spec, synth_seed);
      io::save_multifield(mf, synth_out);
      if (!synth_spec_out.empty()) write_text(synth_spec_out, synth::to_json(spec).dump(2) + "\n");
      spdlog::info("wrote {} variables on a {}x{}x{} grid to {}", mf.size(), mf.dims().nx(),
                   mf.dims().ny(), mf.dims().nz(), synth_out);
    } else if (*sample_cmd) {
      const MultiField mf = io::load_multifield(sample_input);
      const SamplingFraction alpha(sample_alpha);
      SampledPointSet ps;
      if (sample_method == "random") {
        ps = random_sample(mf, alpha, sample_seed);
      } else {
        if (sample_vars.empty()) throw Error(ErrorKind::InvalidArgument, "--vars is required for pmi");
        HistogramOptions opt;
        opt.bins = sample_bins;
        const auto hb = build_joint(mf, split_list(sample_vars), opt);
        const auto table = pmi_table(hb.histogram, parse_normalization(sample_norm));
        const auto acc = build_acceptance(table, hb.histogram, alpha);
        log_warnings(acc.warnings);
        spdlog::debug("gamma {} after {} iterations, expected yield {}", acc.gamma, acc.iterations,
                      acc.expected_yield);
        ps = pmi_sample(mf, hb.assignment, acc, sample_seed, sample_exact);
      }
      io::save_pointset(ps, sample_out);
      std::cout << ps.size() << " of " << mf.dims().count() << " points sampled\n";
    } else if (*plot_cmd) {
      const PmiState s = build_pmi(plot_in);
      const auto& axes = s.table.axes;
      if (axes.size() != 2) throw Error(ErrorKind::WrongDimensionality, "pmi-plot needs exactly two variables");
      if (plot_csv.empty() && plot_png.empty()) {
        throw Error(ErrorKind::InvalidArgument, "pmi-plot needs --csv and/or --png");
      }
      const auto raw = s.table.dense_raw();
      const auto norm = s.table.dense_normalized();
      const std::uint32_t bx = axes[0].bins, by = axes[1].bins;
      if (!plot_csv.empty()) {
        std::ostringstream out;
        out.precision(17);
        out << "binX,binY,raw,normalized\n";
        for (std::uint32_t x = 0; x < bx; ++x) {
          for (std::uint32_t y = 0; y < by; ++y) {
            const std::size_t f = std::size_t{x} * by + y;
            out << x << ',' << y << ',' << raw[f] << ',' << norm[f] << '\n';
          }
        }
        write_text(plot_csv, out.str());
      }
      if (!plot_png.empty()) {
        RasterImage img{bx, by, std::vector<double>(std::size_t{bx} * by)};
        for (std::uint32_t y = 0; y < by; ++y) {
          for (std::uint32_t x = 0; x < bx; ++x) img.pixels[std::size_t{y} * bx + x] = norm[std::size_t{x} * by + y];
        }
        write_png(img, plot_png);
      }
      const auto best = s.hb.histogram.unflatten(s.table.argmax());
      std::cout << "max PMI " << s.table.raw_at(s.table.argmax()) << " at bin (" << best[0] << ", "
                << best[1] << ")\n";
    } else if (*field_cmd) {
      const PmiState s = build_pmi(field_in);
      const Field f = pmi_field(s.table, s.hb.assignment, s.mf.dims(),
                                field_mode == "raw" ? FieldMode::Raw : FieldMode::Normalized);
      io::save_field(f, field_out);
    } else if (*query_cmd) {
      std::vector<std::string> warnings;
      const QueryExpr q = parse_query(query_text, &warnings);
      log_warnings(warnings);
      std::cout << "query: " << q.to_string() << "\n";
      QueryResult result;
      if (io::is_pointset_file(query_input)) {
        result = query_sampled(io::load_pointset(query_input), q);
      } else {
        result = query_raw(io::load_multifield(query_input), q);
      }
      std::cout << "matches: " << result.indices.size() << "\n";
      if (!query_truth.empty()) {
        const QueryResult truth = query_raw(io::load_multifield(query_truth), q);
        std::vector<std::string> jw;
        const double j = jaccard(truth, result, &jw);
        log_warnings(jw);
        std::printf("ground truth: %zu\njaccard: %.17g\n", truth.indices.size(), j);
      }
      if (!query_out.empty()) {
        if (fs::path(query_out).extension() == ".csv") {
          std::ostringstream out;
          out << "index\n";
          for (auto i : result.indices) out << i << '\n';
          write_text(query_out, out.str());
        } else {
          io::save_indices(result.indices, query_out);
        }
      }
    } else if (*recon_cmd) {
      const SampledPointSet ps = io::load_pointset(recon_input);
      ReconstructionMode mode{parse_reconstruction_kind(recon_mode), recon_k, recon_power};
      auto recs = reconstruct(ps, split_list(recon_vars), ps.dims(), mode);
      log_warnings(recs.front().warnings);
      std::vector<Field> fields;
      for (auto& r : recs) fields.push_back(std::move(r.field));
      io::save_multifield(MultiField(ps.dims(), std::move(fields)), recon_out);
      spdlog::info("reconstructed with {} onto {}x{}x{}", to_string(recs.front().effective.kind),
                   ps.dims().nx(), ps.dims().ny(), ps.dims().nz());
    } else if (*eval_cmd) {
      const MultiField raw = io::load_multifield(eval_raw);
      const GridDims& dims = raw.dims();
      MultiField recon;
      if (fs::path(eval_recon).extension() == ".json") {
        recon = io::load_multifield(eval_recon);
      } else {
        recon = MultiField(dims, {io::load_field(eval_recon, dims, eval_var)});
      }
      if (!(recon.dims() == dims)) throw Error(ErrorKind::GridMismatch, "raw and reconstruction grids differ");
      const auto metrics = split_list(eval_metrics);
      auto wants = [&](const char* m) { return std::find(metrics.begin(), metrics.end(), m) != metrics.end(); };
      for (const auto& m : metrics) {
        if (m != "ssim" && m != "mse" && m != "pearson" && m != "dcor") {
          throw Error(ErrorKind::InvalidArgument, "unknown metric '" + m + "'");
        }
      }
      const SliceSpec slice = eval_slice.empty() ? SliceSpec{Axis::Z, dims.nz() / 2} : parse_slice(eval_slice);
      std::optional<RegionOfInterest> roi;
      if (!eval_roi.empty()) roi = clip_roi(parse_roi(eval_roi), dims);

      nlohmann::ordered_json report;
      report["variable"] = eval_var;
      report["slice"] = {{"axis", std::string(1, "xyz"[static_cast<int>(slice.axis)])},
                         {"index", slice.index}};
      if (roi) report["roi"] = {roi->lo, roi->hi};
      const Field& rf = raw.variable(eval_var);
      const Field& cf = recon.variable(eval_var);
      if (wants("ssim") || wants("mse")) {
        const auto [lo, hi] = std::minmax_element(rf.values.begin(), rf.values.end());
        const double vhi = *hi > *lo ? *hi : *lo + 1.0;
        const RasterImage a = rasterize_slice(rf, slice.axis, slice.index, *lo, vhi);
        const RasterImage b = rasterize_slice(cf, slice.axis, slice.index, *lo, vhi);
        if (!eval_png.empty()) {
          fs::create_directories(eval_png);
          write_png(a, (fs::path(eval_png) / "raw_slice.png").string());
          write_png(b, (fs::path(eval_png) / "recon_slice.png").string());
        }
        if (wants("ssim")) report["ssim"] = ssim(a, b);
        if (wants("mse")) {
          report["mse_slice"] = mse(a, b);
          report["mse_field"] = mse(rf, cf, roi);
          if (roi) {
            const int ax = static_cast<int>(slice.axis);
            if (slice.index >= roi->lo[ax] && slice.index <= roi->hi[ax]) {
              const PixelRect p = roi_on_slice(*roi, slice.axis);
              report["mse_slice_roi"] = mse(a.crop(p.x0, p.y0, p.x1, p.y1), b.crop(p.x0, p.y0, p.x1, p.y1));
            }
          }
        }
      }
      if (wants("pearson") || wants("dcor")) {
        const auto pair = split_list(eval_pair);
        if (pair.size() != 2) throw Error(ErrorKind::InvalidArgument, "--pair needs two variables a,b");
        const Field& ra = raw.variable(pair[0]);
        const Field& rb = raw.variable(pair[1]);
        const Field& ca = recon.variable(pair[0]);
        const Field& cb = recon.variable(pair[1]);
        if (wants("pearson")) {
          report["pearson_raw"] = pearson(ra, rb, roi);
          report["pearson_recon"] = pearson(ca, cb, roi);
        }
        if (wants("dcor")) {
          report["dcor_raw"] = distance_correlation(ra, rb, roi, eval_dcor_points, eval_dcor_seed);
          report["dcor_recon"] = distance_correlation(ca, cb, roi, eval_dcor_points, eval_dcor_seed);
        }
      }
      const std::string text = report.dump(2) + "\n";
      if (eval_out.empty()) {
        std::cout << text;
      } else {
        write_text(eval_out, text);
      }
    } else if (*bench_cmd) {
      const BenchConfig config = load_bench_config(bench_config);
      std::optional<fs::path> artifacts;
      if (!bench_artifacts.empty()) artifacts = bench_artifacts;
      const BenchmarkReport report = run_pipeline(config, artifacts);
      for (const auto& w : report.reference["warnings"]) spdlog::warn("{}", w.get<std::string>());
      write_text(bench_out, report.to_json());
      if (!bench_md.empty()) write_text(bench_md, report.to_markdown());
      spdlog::info("{} report rows written to {}", report.rows.size(), bench_out);
    }
  } catch (const Error& e) {
    spdlog::error("{}: {}", to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    spdlog::error("Io: {}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("Internal: {}", e.what());
    return 3;
  }
  return 0;
}
