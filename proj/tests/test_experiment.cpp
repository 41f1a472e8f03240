#include "hybridloc/config.hpp"
#include "hybridloc/errors.hpp"
#include "hybridloc/experiment.hpp"
#include "hybridloc/measurement_log.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace hybridloc {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("hybridloc_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    cfg_ = preset_config("default");
    cfg_.runs = 3;
    cfg_.seed = 21;
    cfg_.filters = {FilterKind::kEkf, FilterKind::kUkf, FilterKind::kBleOnlyEkf};
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path root_;
  ExperimentConfig cfg_;
};

TEST_F(ExperimentTest, SameSeedSameBytes) {
  write_results(simulate_experiment(cfg_), cfg_, root_ / "a");
  write_results(simulate_experiment(cfg_), cfg_, root_ / "b");
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(root_ / "a")) {
    ++files;
    EXPECT_EQ(slurp(entry.path()), slurp(root_ / "b" / entry.path().filename()))
        << entry.path().filename();
  }
  EXPECT_EQ(files, 3u * 3u + 3u + 2u);
  EXPECT_TRUE(fs::exists(root_ / "a" / "ecdf_UKF_3Hz.csv"));
  EXPECT_TRUE(fs::exists(root_ / "a" / "run_002_BLE-EKF.csv"));
}

TEST_F(ExperimentTest, ThreadCountDoesNotMatter) {
  const ExperimentResult one = simulate_experiment(cfg_, 1);
  const ExperimentResult many = simulate_experiment(cfg_, 3);
  ASSERT_EQ(one.summaries.size(), many.summaries.size());
  for (std::size_t f = 0; f < one.summaries.size(); ++f) {
    EXPECT_EQ(one.summaries[f].summary, many.summaries[f].summary);
    EXPECT_EQ(one.summaries[f].counters, many.summaries[f].counters);
    EXPECT_EQ(one.pooled_errors[f], many.pooled_errors[f]);
  }
}

TEST_F(ExperimentTest, DifferentSeedDifferentResult) {
  const ExperimentResult a = simulate_experiment(cfg_);
  cfg_.seed = 22;
  const ExperimentResult b = simulate_experiment(cfg_);
  EXPECT_NE(a.pooled_errors[0], b.pooled_errors[0]);
}

TEST_F(ExperimentTest, SummaryShapes) {
  const ExperimentResult r = simulate_experiment(cfg_);
  ASSERT_EQ(r.runs.size(), 3u);
  ASSERT_EQ(r.summaries.size(), 3u);
  for (const RunResult& run : r.runs) {
    EXPECT_EQ(run.frames, 109u);
    for (const FilterRun& fr : run.filters) EXPECT_EQ(fr.points.size(), 109u);
  }
  for (const FilterSummary& s : r.summaries) {
    EXPECT_EQ(s.summary.samples, 3u * 109u);
    EXPECT_TRUE(s.position_rmse.has_value());
    EXPECT_EQ(s.summary.exceedance.size(), cfg_.thresholds.size());
  }
  // The BLE-only filter sees no TDOA and is visibly worse.
  EXPECT_GT(*r.summaries[2].position_rmse, *r.summaries[0].position_rmse);
}

TEST_F(ExperimentTest, EvaluateReproducesSimulation) {
  const ExperimentResult sim = simulate_experiment(cfg_);
  write_results(sim, cfg_, root_);
  const ExperimentResult ev = evaluate_directory(cfg_, root_);
  ASSERT_EQ(ev.runs.size(), sim.runs.size());
  for (std::size_t f = 0; f < sim.summaries.size(); ++f) {
    EXPECT_EQ(ev.summaries[f].summary, sim.summaries[f].summary);
    EXPECT_EQ(ev.pooled_errors[f], sim.pooled_errors[f]);
    EXPECT_EQ(ev.summaries[f].position_rmse, sim.summaries[f].position_rmse);
  }
  EXPECT_THROW(evaluate_directory(cfg_, root_ / "missing"), Error);
}

TEST_F(ExperimentTest, ReplayMatchesSimulatedRun) {
  cfg_.runs = 1;
  const auto stream = simulate_stream(cfg_, 0);
  fs::create_directories(root_);
  write_log(root_ / "log.csv", stream);
  const ExperimentResult rep = replay_experiment(cfg_, read_log(root_ / "log.csv"));
  const ExperimentResult sim = simulate_experiment(cfg_);
  for (std::size_t f = 0; f < cfg_.filters.size(); ++f) {
    EXPECT_EQ(rep.pooled_errors[f], sim.pooled_errors[f]);
    EXPECT_FALSE(rep.summaries[f].position_rmse.has_value());
  }
}

TEST_F(ExperimentTest, ReplayHonoursDecimation) {
  cfg_.runs = 1;
  const auto stream = simulate_stream(cfg_, 0);
  cfg_.schedule.decimation = 6;
  const ExperimentResult rep = replay_experiment(cfg_, stream);
  EXPECT_EQ(rate_label(cfg_.schedule), "0.5Hz");
  EXPECT_EQ(rep.runs[0].frames, 109u);
}

TEST(RateLabel, Formats) {
  ScheduleConfig s;
  EXPECT_EQ(rate_label(s), "3Hz");
  s.uwb_rate = 0.0;
  EXPECT_EQ(rate_label(s), "0Hz");
}

}  // namespace
}  // namespace hybridloc
