#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "infosample/fieldio.hpp"
#include "infosample/histogram.hpp"
#include "infosample/pointinfo.hpp"
#include "infosample/query.hpp"
#include "infosample/reconstruct.hpp"
#include "infosample/sampler.hpp"
#include "support.hpp"

using namespace infosample;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const testing::TempDir& tmp, const std::string& args) {
  const auto out = tmp / "stdout.txt";
  const std::string cmd = std::string(INFOSAMPLE_CLI) + " " + args + " > " + out.string() + " 2> " +
                          (tmp / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string p(const testing::TempDir& tmp, const std::string& name) { return (tmp / name).string(); }

}  // namespace

TEST_CASE("synth, sample and query agree with the library") {
  testing::TempDir tmp;
  REQUIRE(run(tmp, "synth --preset feature --n 24 --seed 7 --out " + p(tmp, "raw.json")).code == 0);
  const MultiField mf = io::load_multifield(tmp / "raw.json");
  CHECK(mf.dims() == GridDims(24, 24, 24));

  const auto s = run(tmp, "sample " + p(tmp, "raw.json") +
                              " --method pmi --vars v0,v1 --alpha 0.05 --bins 32 --seed 3 --out " +
                              p(tmp, "pmi.mvsp"));
  REQUIRE(s.code == 0);
  HistogramOptions opt;
  opt.bins = 32;
  const auto hb = build_joint(mf, {"v0", "v1"}, opt);
  const auto acc = build_acceptance(pmi_table(hb.histogram), hb.histogram, SamplingFraction(0.05));
  const auto expected = pmi_sample(mf, hb.assignment, acc, 3);
  const auto got = io::load_pointset(tmp / "pmi.mvsp");
  CHECK(got == expected);
  CHECK(s.out == std::to_string(expected.size()) + " of 13824 points sampled\n");

  REQUIRE(run(tmp, "sample " + p(tmp, "raw.json") + " --method random --alpha 0.05 --seed 3 --out " +
                       p(tmp, "rnd.mvsp"))
              .code == 0);
  CHECK(io::load_pointset(tmp / "rnd.mvsp") == random_sample(mf, SamplingFraction(0.05), 3));

  const std::string q = "1.19 < v0 < 1.21 AND -0.21 < v1 < -0.19";
  const auto qr = run(tmp, "query --query '" + q + "' --input " + p(tmp, "pmi.mvsp") + " --ground-truth " +
                               p(tmp, "raw.json") + " --out " + p(tmp, "hits.csv"));
  REQUIRE(qr.code == 0);
  const auto expr = parse_query(q);
  const double j = jaccard(query_sampled(expected, expr), query_raw(mf, expr));
  char line[64];
  std::snprintf(line, sizeof line, "jaccard: %.17g\n", j);
  CHECK(qr.out.find(line) != std::string::npos);
  CHECK(std::filesystem::exists(tmp / "hits.csv"));
}

TEST_CASE("reconstruct and eval round trip") {
  testing::TempDir tmp;
  REQUIRE(run(tmp, "synth --preset feature --n 16 --seed 2 --out " + p(tmp, "raw.json")).code == 0);
  REQUIRE(run(tmp, "sample " + p(tmp, "raw.json") + " --method random --alpha 0.2 --seed 1 --out " +
                       p(tmp, "s.mvsp"))
              .code == 0);
  REQUIRE(run(tmp, "reconstruct --input " + p(tmp, "s.mvsp") + " --var v0,v1 --out " + p(tmp, "rec.json")).code ==
          0);
  const MultiField raw = io::load_multifield(tmp / "raw.json");
  const MultiField rec = io::load_multifield(tmp / "rec.json");
  const auto lib = reconstruct(io::load_pointset(tmp / "s.mvsp"), "v0", raw.dims());
  for (std::size_t i = 0; i < lib.field.values.size(); ++i) {
    CHECK(rec.variable("v0").values[i] == static_cast<double>(static_cast<float>(lib.field.values[i])));
  }

  const auto self = run(tmp, "eval --raw " + p(tmp, "raw.json") + " --recon " + p(tmp, "raw.json") +
                                 " --var v0 --metrics ssim,mse --slice z:8");
  REQUIRE(self.code == 0);
  const auto js = nlohmann::json::parse(self.out);
  CHECK(js["ssim"] == 1.0);
  CHECK(js["mse_slice"] == 0.0);

  const auto e = run(tmp, "eval --raw " + p(tmp, "raw.json") + " --recon " + p(tmp, "rec.json") +
                              " --var v0 --metrics ssim,mse,pearson,dcor --pair v0,v1 --roi 2:13,2:13,4:11" +
                              " --png-dir " + p(tmp, "png") + " --out " + p(tmp, "m.json"));
  REQUIRE(e.code == 0);
  const auto m = nlohmann::json::parse(slurp(tmp / "m.json"));
  CHECK(m["ssim"].get<double>() < 1.0);
  CHECK(m["mse_slice"].get<double>() > 0.0);
  CHECK(m.contains("pearson_raw"));
  CHECK(m.contains("dcor_recon"));
}

TEST_CASE("pmi-plot writes every bin") {
  testing::TempDir tmp;
  REQUIRE(run(tmp, "synth --preset feature --n 16 --seed 2 --out " + p(tmp, "raw.json")).code == 0);
  const auto r = run(tmp, "pmi-plot " + p(tmp, "raw.json") + " --vars v0,v1 --bins 8 --csv " + p(tmp, "t.csv") +
                              " --png " + p(tmp, "t.png"));
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(tmp / "t.csv"));
  std::string line;
  int rows = 0;
  std::getline(csv, line);
  CHECK(line == "binX,binY,raw,normalized");
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 64);
  CHECK(std::filesystem::exists(tmp / "t.png"));
}

TEST_CASE("exit codes") {
  testing::TempDir tmp;
  CHECK(run(tmp, "sample").code == 1);
  CHECK(run(tmp, "no-such-command").code == 1);
  CHECK(run(tmp, "sample " + p(tmp, "missing.json") + " --alpha 0.1 --seed 1 --out " + p(tmp, "x.mvsp")).code == 2);
  REQUIRE(run(tmp, "synth --preset feature --n 8 --seed 1 --out " + p(tmp, "raw.json")).code == 0);
  CHECK(run(tmp, "sample " + p(tmp, "raw.json") + " --method random --alpha 1.5 --seed 1 --out " + p(tmp, "x.mvsp"))
            .code == 1);
  CHECK(run(tmp, "query --query 'v0 <' --input " + p(tmp, "raw.json")).code == 1);
  CHECK(run(tmp, "query --query 'v9 < 1' --input " + p(tmp, "raw.json")).code == 1);
}

TEST_CASE("bench output is byte-identical across thread counts") {
  testing::TempDir tmp;
  std::ofstream(tmp / "bench.json") << R"({
    "version": 1,
    "dataset": {"synthetic": {"preset": "feature", "n": 20}, "seed": 4},
    "variables": ["v0", "v1"],
    "bins": 32,
    "alphas": [0.05],
    "seeds": [1, 2],
    "queries": [{"name": "feature", "expr": "1.19 < v0 < 1.21 AND -0.21 < v1 < -0.19"}],
    "reconstructions": [{"name": "v0", "variable": "v0", "partner": "v1", "slice": "z:10",
                         "roi": "5:14,5:14,7:12"}],
    "dcor": {"max_points": 200, "seed": 3}
  })";
  REQUIRE(run(tmp, "--threads 1 bench --config " + p(tmp, "bench.json") + " --out " + p(tmp, "a.json")).code == 0);
  REQUIRE(run(tmp, "--threads 4 bench --config " + p(tmp, "bench.json") + " --out " + p(tmp, "b.json") +
                       " --markdown " + p(tmp, "b.md"))
              .code == 0);
  CHECK(slurp(tmp / "a.json") == slurp(tmp / "b.json"));
  CHECK(!slurp(tmp / "b.md").empty());
  std::ofstream(tmp / "bad.json") << R"({"version": 1, "dataset": {"synthetic": {"preset": "feature"}, "seed": 1},
    "variables": ["v0", "v1"], "alphas": [0.05], "seeds": []})";
  CHECK(run(tmp, "bench --config " + p(tmp, "bad.json") + " --out " + p(tmp, "c.json")).code == 1);
}
