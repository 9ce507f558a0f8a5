#include <doctest.h>

#include <fstream>

#include <nlohmann/json.hpp>

#include "infosample/error.hpp"
#include "infosample/kernels.hpp"
#include "infosample/parallel.hpp"
#include "infosample/pipeline.hpp"
#include "support.hpp"

using namespace infosample;
using nlohmann::json;

namespace {

const char* kFeatureQuery = "1.19 < v0 < 1.21 AND -0.21 < v1 < -0.19";

json small_config() {
  return json::parse(R"({
    "version": 1,
    "dataset": {"synthetic": {"preset": "feature", "n": 24}, "seed": 7},
    "variables": ["v0", "v1"],
    "bins": 32,
    "alphas": [0.05, 0.1],
    "seeds": [1, 2],
    "queries": [{"name": "feature", "expr": "1.19 < v0 < 1.21 AND -0.21 < v1 < -0.19"}],
    "reconstructions": [{"name": "v0", "variable": "v0", "partner": "v1", "slice": "z:12",
                         "roi": "6:17,6:17,9:14"}],
    "dcor": {"max_points": 300, "seed": 5}
  })");
}

int schema_kind(const json& doc) {
  return testing::error_kind([&] { parse_bench_config(doc, "."); });
}

}  // namespace

TEST_CASE("config schema errors") {
  const int schema = testing::kind(ErrorKind::SchemaError);
  auto with = [](const std::string& key, json value) {
    json d = small_config();
    d[key] = std::move(value);
    return d;
  };
  CHECK(schema_kind(with("seeds", json::array())) == schema);
  CHECK(schema_kind(with("version", 2)) == schema);
  CHECK(schema_kind(with("alphas", json::array({0.5, 1.0}))) == schema);
  CHECK(schema_kind(with("alphas", json::array())) == schema);
  CHECK(schema_kind(with("methods", json::array({"stratified"}))) == schema);
  CHECK(schema_kind(with("normalization", "zscore")) == schema);
  CHECK(schema_kind(with("bins", "many")) == schema);

  json no_seed = small_config();
  no_seed["dataset"].erase("seed");
  CHECK(schema_kind(no_seed) == schema);

  json no_data = small_config();
  no_data.erase("dataset");
  CHECK(schema_kind(no_data) == schema);

  json bad_metric = small_config();
  bad_metric["reconstructions"][0]["metrics"] = {"psnr"};
  CHECK(schema_kind(bad_metric) == schema);

  json no_partner = small_config();
  no_partner["reconstructions"][0].erase("partner");
  CHECK(schema_kind(no_partner) == schema);
  no_partner["reconstructions"][0]["metrics"] = {"ssim", "mse"};
  CHECK(schema_kind(no_partner) == -1);

  json off_roi = small_config();
  off_roi["reconstructions"][0]["slice"] = "z:2";
  CHECK(schema_kind(off_roi) == schema);

  json dup = small_config();
  dup["queries"].push_back(dup["queries"][0]);
  CHECK(schema_kind(dup) == schema);

  json unknown_var = small_config();
  unknown_var["variables"] = {"v0", "v9"};
  CHECK(schema_kind(unknown_var) == testing::kind(ErrorKind::UnknownVariable));
}

TEST_CASE("config loads relative sidecars and echoes the document") {
  testing::TempDir tmp;
  const json cfg = small_config();
  const auto parsed = parse_bench_config(cfg, tmp.path());
  CHECK(parsed.variables == std::vector<std::string>{"v0", "v1"});
  CHECK(parsed.seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(parsed.dcor_max_points == 300);
  CHECK(parsed.reconstructions.at(0).roi.has_value());

  std::ofstream(tmp / "bench.json") << cfg.dump();
  const auto loaded = load_bench_config(tmp / "bench.json");
  CHECK(loaded.document == parsed.document);
  CHECK(testing::error_kind([&] { load_bench_config(tmp / "missing.json"); }) == testing::kind(ErrorKind::Io));
  std::ofstream(tmp / "broken.json") << "{ not json";
  CHECK(testing::error_kind([&] { load_bench_config(tmp / "broken.json"); }) ==
        testing::kind(ErrorKind::SchemaError));
}

TEST_CASE("bench report structure") {
  const auto report = run_pipeline(parse_bench_config(small_config(), "."));
  CHECK(report.reference["grid_points"] == 24 * 24 * 24);
  CHECK(report.reference.contains("query_size:feature"));
  for (const char* metric : {"sample_count", "jaccard:feature", "ssim:v0", "mse_slice:v0", "mse_roi:v0",
                             "pearson:v0", "pearson_abs_err:v0", "dcor:v0", "dcor_abs_err:v0"}) {
    for (double a : {0.05, 0.1}) {
      for (const char* m : {"random", "pmi"}) {
        const BenchRow* row = report.find(metric, a, m);
        REQUIRE_MESSAGE(row != nullptr, metric);
        CHECK(row->values.size() == 2);
        CHECK(row->mean == doctest::Approx((row->values[0] + row->values[1]) / 2));
      }
    }
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& p = report.rows[i - 1];
    const auto& r = report.rows[i];
    CHECK(std::tie(p.metric, p.alpha, p.method) < std::tie(r.metric, r.alpha, r.method));
  }
  const auto parsed = json::parse(report.to_json());
  CHECK(parsed["schema_version"] == kBenchSchemaVersion);
  CHECK(parsed["config"] == small_config());
  CHECK(report.to_markdown().find("| jaccard:feature |") != std::string::npos);
}

TEST_CASE("bench output is independent of threads and vector kernels") {
  const auto cfg = parse_bench_config(small_config(), ".");
  std::string one, many, scalar;
  {
    ScopedThreads t(1);
    one = run_pipeline(cfg).to_json();
  }
  {
    ScopedThreads t(4);
    many = run_pipeline(cfg).to_json();
  }
  {
    const auto saved = kernels::active_isa();
    kernels::set_isa(kernels::Isa::Scalar);
    scalar = run_pipeline(cfg).to_json();
    kernels::set_isa(saved);
  }
  CHECK(one == many);
  CHECK(one == scalar);
  CHECK(one == run_pipeline(cfg).to_json());
}

TEST_CASE("artifacts are written") {
  testing::TempDir tmp;
  json cfg = small_config();
  cfg["alphas"] = {0.1};
  cfg["seeds"] = {3};
  run_pipeline(parse_bench_config(cfg, "."), tmp.path());
  for (const char* name : {"pmi_table.csv", "raw_v0.png", "pmi_a0.1_s3.mvsp", "random_a0.1_s3.mvsp",
                           "pmi_a0.1_s3_v0.png"}) {
    CHECK_MESSAGE(std::filesystem::exists(tmp / name), name);
  }
}

TEST_CASE("pmi sampling finds the planted feature more often than random sampling") {
  json cfg = json::parse(R"({
    "version": 1,
    "dataset": {"synthetic": {"preset": "feature", "n": 64}, "seed": 11},
    "variables": ["v0", "v1"],
    "alphas": [0.05],
    "seeds": [1, 2, 3]
  })");
  cfg["queries"] = json::array({{{"name", "feature"}, {"expr", kFeatureQuery}}});
  const auto report = run_pipeline(parse_bench_config(cfg, "."));
  const double jr = report.find("jaccard:feature", 0.05, "random")->mean;
  const double jp = report.find("jaccard:feature", 0.05, "pmi")->mean;
  CHECK(jp > 2.0 * jr);
  CHECK(jr == doctest::Approx(0.05).epsilon(0.2));
}
