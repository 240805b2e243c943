#include "fidreg/csv.hpp"
#include "fidreg/report_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace fidreg;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& content) {
    path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("csv reads headerless and headered files identically") {
  TempFile plain("fidreg_t1.csv", "1,2\n3,4\n5,6\n");
  TempFile headered("fidreg_t2.csv", "a,b\n1,2\n3,4\n5,6\n");
  Matrix m1 = read_csv_matrix(plain.path.string());
  Matrix m2 = read_csv_matrix(headered.path.string());
  REQUIRE(m1.rows() == 3);
  REQUIRE(m1.cols() == 2);
  CHECK(m1 == m2);
  CHECK(m1(2, 1) == 6.0);
}

TEST_CASE("csv rejects bad cells with row and column") {
  TempFile nan_file("fidreg_t3.csv", "1,2\n3,nan\n");
  CHECK_THROWS_WITH_AS(read_csv_matrix(nan_file.path.string()),
                       doctest::Contains("row 2"), CsvError);
  TempFile inf_file("fidreg_t4.csv", "1,2\n3,inf\n");
  CHECK_THROWS_AS(read_csv_matrix(inf_file.path.string()), CsvError);
  TempFile ragged("fidreg_t5.csv", "1,2\n3\n");
  CHECK_THROWS_AS(read_csv_matrix(ragged.path.string()), CsvError);
  TempFile text_mid("fidreg_t6.csv", "1,2\nx,4\n");
  CHECK_THROWS_WITH_AS(read_csv_matrix(text_mid.path.string()),
                       doctest::Contains("column 1"), CsvError);
}

TEST_CASE("csv vector wants one column") {
  TempFile one("fidreg_t7.csv", "y\n1\n2\n3\n");
  Vector v = read_csv_vector(one.path.string());
  CHECK(v.size() == 3);
  CHECK(v[2] == 3.0);
  TempFile two("fidreg_t8.csv", "1,2\n3,4\n");
  CHECK_THROWS_AS(read_csv_vector(two.path.string()), CsvError);
}

TEST_CASE("config parsing applies defaults and rejects unknown keys") {
  auto cfgs = parse_sim_configs(R"({"n":50,"p":100,"d":3,"b":1.0,"rho":0.0,"reps":2})");
  REQUIRE(cfgs.size() == 1);
  CHECK(cfgs[0].gamma == 1.0);
  CHECK(cfgs[0].draws_per_rep == 2000);
  CHECK(cfgs[0].levels == std::vector<double>{0.90, 0.95, 0.99});

  CHECK_THROWS_WITH_AS(
      parse_sim_configs(R"({"n":50,"p":100,"d":3,"b":1.0,"rho":0.0,"reps":2,"bogus":1})"),
      doctest::Contains("bogus"), ConfigError);
  CHECK_THROWS_AS(parse_sim_configs(R"({"n":50})"), ConfigError);
  CHECK_THROWS_AS(parse_sim_configs("not json"), ConfigError);
  CHECK_THROWS_AS(
      parse_sim_configs(R"({"n":50,"p":100,"d":3,"b":1.0,"rho":1.5,"reps":2})"),
      ConfigError);

  auto list = parse_sim_configs(
      R"([{"n":50,"p":100,"d":3,"b":1.0,"rho":0.0,"reps":2},
          {"n":60,"p":100,"d":3,"b":1.0,"rho":0.5,"reps":2}])");
  CHECK(list.size() == 2);
}

TEST_CASE("config hash is stable and sensitive") {
  SimConfig a;
  a.n = 50;
  a.p = 100;
  a.d = 3;
  a.b = 1.0;
  a.reps = 2;
  SimConfig b = a;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed = 1;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("csv rows carry the documented header and bias only on sigma2") {
  CHECK(sim_result_csv_header() ==
        "config_hash,estimator,quantity,level,coverage,mean_width,bias,bias_se,excluded_reps");
  SimConfig cfg;
  cfg.n = 50;
  cfg.p = 100;
  cfg.d = 3;
  cfg.b = 1.0;
  cfg.reps = 2;
  SimResult res;
  res.proposed.sigma2 = {{0.95, 0.94, 0.4}};
  res.proposed.beta1 = {{0.95, 0.93, 0.3}};
  res.proposed.mean_fn = {{0.95, 0.96, 0.5}};
  res.oracle = res.proposed;
  res.proposed.sigma2_bias = -0.004;
  const std::string rows = sim_result_to_csv_rows(cfg, res);
  CHECK(rows.find("proposed,sigma2,0.95,0.94,0.4,-0.004") != std::string::npos);
  CHECK(rows.find("proposed,beta1,0.95,0.93,0.3,,,0") != std::string::npos);
}

TEST_CASE("report json carries the documented fields") {
  InferenceReport rep;
  rep.n = 10;
  rep.p = 5;
  rep.draw_count = 100;
  rep.levels = {0.95};
  rep.model_probs = {{ModelId({1, 3}), 0.75}};
  rep.sigma2.estimate = 1.5;
  rep.sigma2.cis = {{1.0, 2.0}};
  CoefficientSummary cs;
  cs.inclusion_prob = 0.8;
  cs.significant = true;
  cs.estimate = 2.5;
  cs.cis = {{2.0, 3.0}};
  rep.coefficients.emplace_back(3, cs);

  const std::string json = report_to_json(rep);
  for (const char* needle :
       {"\"model_probs\"", "\"support\"", "\"sigma2\"", "\"coefficients\"",
        "\"inclusion_prob\"", "\"significant\"", "\"estimate\"", "\"level\""})
    CHECK(json.find(needle) != std::string::npos);
  // Not-significant coefficients carry no estimate/cis.
  InferenceReport rep2 = rep;
  rep2.coefficients[0].second.significant = false;
  const std::string json2 = report_to_json(rep2);
  CHECK(json2.find("\"estimate\": 2.5") == std::string::npos);
}

}  // TEST_SUITE
