#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "wmi/config.hpp"
#include "wmi/phantom.hpp"

namespace wmi::app {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kMissingFile = 3,
  kDimensionMismatch = 4,
  kUnreadableSlice = 5,
  kMissingTruth = 6,
  kBadManifest = 7,
};

// Maps a library exception onto an exit code and prints it to `err`.
int report_error(const std::exception& e, std::ostream& err);

struct DetectRequest {
  std::filesystem::path manifest;
  RunConfig config;
};

// Writes candidates/, confirmed/, optional overlay/, summary.json and
// timing.json below config.out. When every manifest line carries a truth
// mask, metrics.csv is written as well.
int run_detect(const DetectRequest& request, std::ostream& out, std::ostream& err);

struct EvalRequest {
  std::filesystem::path manifest;
  std::filesystem::path predictions;         // directory of masks named like the slices
  std::optional<std::filesystem::path> csv;  // stdout when empty
};

// Brain region per slice: the manifest's third column, else the Otsu
// foreground of the raw slice.
int run_eval(const EvalRequest& request, std::ostream& out, std::ostream& err);

struct PhantomRequest {
  std::filesystem::path out;
  std::uint64_t seed = 1;
  int slices = 12;
  int lesions = 3;
  int decoys = 5;
  double noise_sigma = 1.0;
  VentricleShape shape = VentricleShape::simple;
  int width = 96;
  int height = 112;
};

PhantomConfig phantom_config(const PhantomRequest& request);
int run_phantom(const PhantomRequest& request, std::ostream& out, std::ostream& err);

struct TimingReport {
  int slices = 0;
  int threads = 1;
  double coarse_ms_per_slice = 0.0;
  double fine_ms_per_slice = 0.0;
  double total_s = 0.0;
};

// Times detection on a generated phantom stack.
TimingReport time_pipeline(const PipelineConfig& config, int slices, std::uint64_t seed);

struct BenchRequest {
  RunConfig config;
  int slices = 192;
  std::uint64_t seed = 7;
};

int run_bench(const BenchRequest& request, std::ostream& out, std::ostream& err);

}  // namespace wmi::app
