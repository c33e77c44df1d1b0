#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "temp_dir.hpp"
#include "wmi/app.hpp"
#include "wmi/io.hpp"

using namespace wmi;
using testing_support::TempDir;
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

struct Streams {
  std::ostringstream out;
  std::ostringstream err;
};

int make_phantom(const fs::path& dir, int slices = 6) {
  app::PhantomRequest req;
  req.out = dir;
  req.seed = 5;
  req.slices = slices;
  req.lesions = 2;
  req.decoys = 2;
  Streams s;
  return app::run_phantom(req, s.out, s.err);
}

int detect(const fs::path& manifest, const fs::path& out, int threads, std::string* err = nullptr) {
  app::DetectRequest req;
  req.manifest = manifest;
  req.config.out = out;
  req.config.pipeline.threads = threads;
  Streams s;
  const int rc = app::run_detect(req, s.out, s.err);
  if (err) *err = s.err.str();
  return rc;
}

}  // namespace

TEST(App, PhantomWritesManifestAndObjects) {
  TempDir dir("app_ph");
  ASSERT_EQ(make_phantom(dir.path()), app::kOk);
  EXPECT_TRUE(fs::exists(dir / "manifest.txt"));
  EXPECT_TRUE(fs::exists(dir / "objects.json"));
  EXPECT_EQ(read_manifest(dir / "manifest.txt").size(), 6u);
}

TEST(App, DetectWritesArtifacts) {
  TempDir dir("app_det");
  ASSERT_EQ(make_phantom(dir / "stack"), app::kOk);
  ASSERT_EQ(detect(dir / "stack/manifest.txt", dir / "run", 1), app::kOk);
  for (const char* f : {"summary.json", "timing.json", "metrics.csv", "candidates/slice_0000.pgm",
                        "confirmed/slice_0005.pgm"}) {
    EXPECT_TRUE(fs::exists(dir.path() / "run" / f)) << f;
  }
  EXPECT_EQ(read_file(dir / "run/metrics.csv").rfind("slice_index,tp,fp,tn,fn,sensitivity,specificity\n", 0), 0u);
}

TEST(App, OutputsIdenticalAcrossThreadCounts) {
  TempDir dir("app_thr");
  ASSERT_EQ(make_phantom(dir / "stack", 8), app::kOk);
  ASSERT_EQ(detect(dir / "stack/manifest.txt", dir / "one", 1), app::kOk);
  ASSERT_EQ(detect(dir / "stack/manifest.txt", dir / "four", 4), app::kOk);
  std::size_t compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "one")) {
    if (!e.is_regular_file() || e.path().filename() == "timing.json") continue;
    const fs::path rel = fs::relative(e.path(), dir / "one");
    EXPECT_EQ(read_file(e.path()), read_file(dir / "four" / rel)) << rel;
    ++compared;
  }
  EXPECT_GT(compared, 16u);
}

TEST(App, EvalOfTruthIsPerfect) {
  TempDir dir("app_eval");
  ASSERT_EQ(make_phantom(dir.path()), app::kOk);
  app::EvalRequest req{dir / "manifest.txt", dir / "truth", dir / "m.csv"};
  Streams s;
  ASSERT_EQ(app::run_eval(req, s.out, s.err), app::kOk);
  const std::string csv = read_file(dir / "m.csv");
  EXPECT_NE(csv.find("\nmean,"), std::string::npos);
  EXPECT_NE(csv.find(",100.0000,100.0000\n", csv.find("\nmean,")), std::string::npos);
}

TEST(App, ExitCodes) {
  TempDir dir("app_codes");
  ASSERT_EQ(make_phantom(dir / "stack", 3), app::kOk);
  const fs::path stack = dir / "stack";

  EXPECT_EQ(detect(dir / "nope.txt", dir / "o1", 1), app::kMissingFile);

  write_file(dir / "empty.txt", "# no slices\n");
  EXPECT_EQ(detect(dir / "empty.txt", dir / "o2", 1), app::kBadManifest);
  EXPECT_FALSE(fs::exists(dir / "o2"));

  write_pgm(dir / "odd.pgm", GrayImage(20, 20, 50));
  write_file(dir / "mixed.txt", (stack / "slices/slice_0000.pgm").string() + "\nodd.pgm\n");
  EXPECT_EQ(detect(dir / "mixed.txt", dir / "o3", 1), app::kDimensionMismatch);

  write_file(dir / "junk.pgm", "not an image");
  write_file(dir / "junk.txt", "junk.pgm\n");
  EXPECT_EQ(detect(dir / "junk.txt", dir / "o4", 1), app::kUnreadableSlice);

  write_file(dir / "notruth.txt", (stack / "slices/slice_0000.pgm").string() + "\n");
  app::EvalRequest eval{dir / "notruth.txt", stack / "truth", std::nullopt};
  Streams s;
  EXPECT_EQ(app::run_eval(eval, s.out, s.err), app::kMissingTruth);

  app::DetectRequest bad;
  bad.manifest = stack / "manifest.txt";
  bad.config.pipeline.threads = 0;
  EXPECT_EQ(app::run_detect(bad, s.out, s.err), app::kUsage);
}

TEST(App, ReportErrorMapsConfigErrors) {
  std::ostringstream err;
  EXPECT_EQ(app::report_error(ConfigError("x"), err), app::kUsage);
  EXPECT_EQ(app::report_error(IoError(IoErrorKind::missing_truth, "x"), err), app::kMissingTruth);
  EXPECT_EQ(app::report_error(std::runtime_error("x"), err), app::kFailure);
  EXPECT_NE(err.str().find("error: x"), std::string::npos);
}

TEST(App, TimingReportCoversAllSlices) {
  const app::TimingReport t = app::time_pipeline({}, 4, 3);
  EXPECT_EQ(t.slices, 4);
  EXPECT_GT(t.coarse_ms_per_slice, 0.0);
  EXPECT_GT(t.total_s, 0.0);
}
