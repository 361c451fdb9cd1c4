#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cmgec/cmgec.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cmgec_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

cmgec_config* quick_config() {
  cmgec_config* cfg = nullptr;
  EXPECT_EQ(cmgec_config_create(&cfg), CMGEC_OK);
  for (const auto& [k, v] : std::vector<std::pair<const char*, const char*>>{
           {"epochs_gfn", "20"}, {"epochs_mgae", "40"}, {"h1", "32"}, {"h2", "16"},
           {"runs", "2"}, {"k_g", "5"}, {"kmeans_restarts", "5"}})
    EXPECT_EQ(cmgec_config_set(cfg, k, v), CMGEC_OK) << k;
  return cfg;
}

}  // namespace

TEST(CApi, ConfigErrorsReportStatusAndMessage) {
  cmgec_config* cfg = nullptr;
  ASSERT_EQ(cmgec_config_create(&cfg), CMGEC_OK);
  EXPECT_STREQ(cmgec_last_error(), "");
  EXPECT_EQ(cmgec_config_set(cfg, "lambda1", "-1"), CMGEC_ERR_CONFIG);
  EXPECT_NE(std::string(cmgec_last_error()).find("lambda1"), std::string::npos);
  EXPECT_EQ(cmgec_config_set(cfg, "bogus", "1"), CMGEC_ERR_CONFIG);
  EXPECT_EQ(cmgec_config_set(cfg, "lambda2", "0.5"), CMGEC_OK);
  EXPECT_STREQ(cmgec_last_error(), "");
  const char* json = nullptr;
  ASSERT_EQ(cmgec_config_json(cfg, &json), CMGEC_OK);
  EXPECT_NE(std::string(json).find("\"lambda2\""), std::string::npos);
  EXPECT_EQ(cmgec_config_set(nullptr, "m", "3"), CMGEC_ERR_CONFIG);
  EXPECT_EQ(cmgec_config_create(nullptr), CMGEC_ERR_CONFIG);
  cmgec_config_destroy(cfg);
  cmgec_config_destroy(nullptr);
}

TEST(CApi, MissingDatasetIsDataError) {
  cmgec_dataset* ds = nullptr;
  EXPECT_EQ(cmgec_dataset_load("/nonexistent/cmgec", &ds), CMGEC_ERR_DATA);
  EXPECT_EQ(ds, nullptr);
  EXPECT_NE(std::string(cmgec_last_error()).size(), 0u);
}

TEST(CApi, SynthRunReportAndExports) {
  const double corrupt[2] = {0.0, 0.1};
  cmgec_dataset* ds = nullptr;
  ASSERT_EQ(cmgec_make_synth(3, 30, 2, 6, corrupt, 7, &ds), CMGEC_OK);
  EXPECT_EQ(cmgec_dataset_n(ds), 30u);
  EXPECT_EQ(cmgec_dataset_views(ds), 2u);

  const fs::path dir = scratch_dir("run");
  ASSERT_EQ(cmgec_dataset_save(ds, (dir / "data").c_str()), CMGEC_OK);
  cmgec_dataset* loaded = nullptr;
  ASSERT_EQ(cmgec_dataset_load((dir / "data").c_str(), &loaded), CMGEC_OK);
  EXPECT_EQ(cmgec_dataset_n(loaded), 30u);

  cmgec_config* cfg = quick_config();
  cmgec_report* report = nullptr;
  ASSERT_EQ(cmgec_run(cfg, loaded, &report), CMGEC_OK) << cmgec_last_error();
  EXPECT_EQ(cmgec_report_runs(report), 2u);
  double acc = -1.0, sd = -1.0;
  ASSERT_EQ(cmgec_report_mean(report, "acc", &acc), CMGEC_OK);
  ASSERT_EQ(cmgec_report_stddev(report, "acc", &sd), CMGEC_OK);
  EXPECT_GE(acc, 0.0);
  EXPECT_LE(acc, 1.0);
  EXPECT_GE(sd, 0.0);
  EXPECT_NE(cmgec_report_mean(report, "speed", &acc), CMGEC_OK);

  std::vector<int> labels(30, -1);
  ASSERT_EQ(cmgec_report_labels(report, 1, labels.data(), labels.size()), CMGEC_OK);
  for (int l : labels) {
    EXPECT_GE(l, 0);
    EXPECT_LT(l, 3);
  }
  EXPECT_NE(cmgec_report_labels(report, 2, labels.data(), labels.size()), CMGEC_OK);
  EXPECT_NE(cmgec_report_labels(report, 0, labels.data(), 5), CMGEC_OK);

  ASSERT_EQ(cmgec_report_write(report, (dir / "report.json").c_str()), CMGEC_OK);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  ASSERT_EQ(cmgec_report_export_consensus(report, (dir / "a.csv").c_str()), CMGEC_OK);
  ASSERT_EQ(cmgec_report_export_embedding(report, (dir / "z.csv").c_str()), CMGEC_OK);
  std::ifstream z(dir / "z.csv");
  std::size_t rows = 0;
  for (std::string line; std::getline(z, line);) rows += !line.empty();
  EXPECT_EQ(rows, 30u);

  // pgs learns neither a consensus graph nor an embedding.
  cmgec_report* pgs = nullptr;
  ASSERT_EQ(cmgec_config_set(cfg, "ablation", "pgs"), CMGEC_OK);
  ASSERT_EQ(cmgec_config_set(cfg, "k_g", "5"), CMGEC_OK);
  ASSERT_EQ(cmgec_run(cfg, loaded, &pgs), CMGEC_OK);
  EXPECT_NE(cmgec_report_export_consensus(pgs, (dir / "none.csv").c_str()), CMGEC_OK);
  EXPECT_NE(cmgec_report_export_embedding(pgs, (dir / "none.csv").c_str()), CMGEC_OK);

  // k_g must be below N.
  cmgec_report* bad = nullptr;
  ASSERT_EQ(cmgec_config_set(cfg, "k_g", "30"), CMGEC_OK);
  EXPECT_EQ(cmgec_run(cfg, loaded, &bad), CMGEC_ERR_CONFIG);
  EXPECT_EQ(bad, nullptr);

  cmgec_report_destroy(pgs);
  cmgec_report_destroy(report);
  cmgec_config_destroy(cfg);
  cmgec_dataset_destroy(loaded);
  cmgec_dataset_destroy(ds);
}

TEST(CApi, Evaluate) {
  const int truth[4] = {0, 0, 1, 1};
  const int pred[4] = {0, 1, 1, 1};
  cmgec_metrics m{};
  ASSERT_EQ(cmgec_evaluate(pred, truth, 4, &m), CMGEC_OK);
  EXPECT_EQ(m.acc, 0.75);
  const int crossed[4] = {5, 9, 5, 9};
  ASSERT_EQ(cmgec_evaluate(crossed, truth, 4, &m), CMGEC_OK);
  EXPECT_EQ(m.ari, -0.5);
  EXPECT_NEAR(m.f1, 0.5, 1e-15);
  EXPECT_NE(cmgec_evaluate(nullptr, truth, 4, &m), CMGEC_OK);

  const fs::path dir = scratch_dir("eval");
  std::ofstream(dir / "p.csv") << "0\n1\n1\n1\n";
  std::ofstream(dir / "t.csv") << "0\n0\n1\n1\n";
  std::ofstream(dir / "short.csv") << "0\n1\n";
  ASSERT_EQ(cmgec_evaluate_files((dir / "p.csv").c_str(), (dir / "t.csv").c_str(), &m), CMGEC_OK);
  EXPECT_EQ(m.acc, 0.75);
  EXPECT_EQ(cmgec_evaluate_files((dir / "short.csv").c_str(), (dir / "t.csv").c_str(), &m),
            CMGEC_ERR_DATA);
  EXPECT_EQ(cmgec_evaluate_files((dir / "nope.csv").c_str(), (dir / "t.csv").c_str(), &m),
            CMGEC_ERR_DATA);
}
