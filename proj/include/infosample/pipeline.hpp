#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infosample/evaluate.hpp"
#include "infosample/grid.hpp"
#include "infosample/pointinfo.hpp"
#include "infosample/reconstruct.hpp"

namespace infosample {

inline constexpr int kBenchSchemaVersion = 1;

struct BenchQuery {
  std::string name;
  std::string text;
};

struct BenchReconstruction {
  std::string name;
  std::string variable;
  /// Second variable for the ROI correlation metrics; empty disables them.
  std::string partner;
  ReconstructionMode mode;
  Axis axis = Axis::Z;
  std::uint32_t slice = 0;
  std::optional<RegionOfInterest> roi;
  std::vector<std::string> metrics;  // subset of ssim, mse, pearson, dcor
};

struct BenchConfig {
  /// Config document as written, echoed into the report.
  nlohmann::ordered_json document;
  MultiField data;
  std::vector<std::string> variables;
  std::uint32_t bins = 128;
  Normalization normalization = Normalization::MinMax;
  bool exact_quota = false;
  std::vector<std::string> methods;  // random, pmi
  std::vector<double> alphas;
  std::vector<std::uint64_t> seeds;
  std::vector<BenchQuery> queries;
  std::vector<BenchReconstruction> reconstructions;
  std::size_t dcor_max_points = kDefaultDcorPoints;
  std::uint64_t dcor_seed = kDefaultDcorSeed;
};

// Config document, version 1:
// {
//   "version": 1,
//   "dataset": {"synthetic": {"preset": "feature", "n": 64} | <synthetic spec>, "seed": 7}
//            | {"sidecar": "relative/or/absolute.json"},
//   "variables": ["v0", "v1"],
//   "bins": 128,                      optional
//   "normalization": "minmax",        optional, or "clampmax"
//   "exact_quota": false,             optional
//   "methods": ["random", "pmi"],     optional
//   "alphas": [0.01, 0.05],
//   "seeds": [1, 2, 3],
//   "queries": [{"name": "feature", "expr": "1.19 < v0 < 1.21"}],
//   "reconstructions": [{"name": "v0", "variable": "v0", "partner": "v1",
//                        "mode": "delaunay", "slice": "z:32",
//                        "roi": "22:42,22:42,28:36",
//                        "metrics": ["ssim", "mse", "pearson", "dcor"]}],
//   "dcor": {"max_points": 4096, "seed": 20240917}   optional
// }
// Throws SchemaError for structural problems; dataset errors propagate.
BenchConfig parse_bench_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
BenchConfig load_bench_config(const std::filesystem::path& path);

struct BenchRow {
  std::string metric;
  double alpha = 0.0;
  std::string method;
  std::vector<double> values;  // one per seed, in config seed order
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single seed
};

struct BenchmarkReport {
  nlohmann::ordered_json config;
  /// Seed-independent values computed on the raw data.
  nlohmann::ordered_json reference;
  /// Sorted by (metric, alpha, method).
  std::vector<BenchRow> rows;

  const BenchRow* find(const std::string& metric, double alpha, const std::string& method) const;
  std::string to_json() const;
  std::string to_markdown() const;
};

/// Runs every (method, alpha, seed) cell. When artifacts_dir is set, point
/// sets, PMI tables and slice images are written there.
BenchmarkReport run_pipeline(const BenchConfig& config,
                             const std::optional<std::filesystem::path>& artifacts_dir = {});

}  // namespace infosample
