#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmi/image.hpp"
#include "wmi/phantom.hpp"
#include "wmi/pipeline.hpp"

namespace wmi {

// Pixel counts restricted to brain pixels.
struct ConfusionCounts {
  long long tp = 0;
  long long fp = 0;
  long long tn = 0;
  long long fn = 0;

  long long total() const noexcept { return tp + fp + tn + fn; }
};

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth, const BinaryMask& brain);

// Percentages; nullopt when the denominator is zero.
std::optional<double> sensitivity(const ConfusionCounts& c);
std::optional<double> specificity(const ConfusionCounts& c);

struct SliceMetrics {
  int slice_index = 0;
  ConfusionCounts counts;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
};

struct MetricsReport {
  std::vector<SliceMetrics> rows;
  // Unweighted means over slices where the metric is defined.
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  double avg_tp = 0.0;
  double avg_fp = 0.0;
  double avg_tn = 0.0;
  double avg_fn = 0.0;
  int undefined_sensitivity = 0;  // slices without any truth positive
  int undefined_specificity = 0;
};

MetricsReport make_report(std::span<const BinaryMask> pred, std::span<const BinaryMask> truth,
                          std::span<const BinaryMask> brain);

// slice_index,tp,fp,tn,fn,sensitivity,specificity with an aggregate row last.
std::string to_csv(const MetricsReport& report);

// Slices with lesion truth and the brain region the metrics are restricted to.
struct LabeledStack {
  std::vector<GrayImage> slices;
  std::vector<BinaryMask> truth;
  std::vector<BinaryMask> brain;  // empty: use the detected foreground per slice
};

LabeledStack labeled_stack(const PhantomStack& phantom);

// Object-level outcome on a phantom: a lesion instance counts as confirmed
// when a confirmed candidate overlaps it; a decoy counts as rejected when none does.
struct ObjectRecall {
  int lesions = 0;
  int lesions_confirmed = 0;
  int decoys = 0;
  int decoys_rejected = 0;
};

ObjectRecall object_recall(const PhantomStack& phantom, std::span<const BinaryMask> confirmed_masks);

enum class ConstraintMode { both, none, size, distance };

const char* to_string(ConstraintMode mode);
PipelineConfig with_constraints(PipelineConfig config, ConstraintMode mode);

struct EvaluationRun {
  VolumeResult volume;
  MetricsReport report;
};

// Runs detection on the stack and scores the confirmed masks.
EvaluationRun evaluate_stack(const LabeledStack& stack, const PipelineConfig& config);

struct AblationRow {
  std::string label;
  MetricsReport report;
};

struct AblationTable {
  std::string title;
  std::vector<AblationRow> rows;
};

// One pipeline run with the constraints of `mode` switched on or off.
MetricsReport ablation_run(const LabeledStack& stack, const PipelineConfig& base, ConstraintMode mode);

// One pipeline run with a minimum lesion size (0 = off) on top of `base`.
MetricsReport ablation_run_min_size(const LabeledStack& stack, const PipelineConfig& base, int min_size);

// Both / None / Size / Distance.
AblationTable constraint_ablation(const LabeledStack& stack, const PipelineConfig& base);

// Minimum lesion size sweep, default {0, 100, 150, 250}.
AblationTable min_size_sweep(const LabeledStack& stack, const PipelineConfig& base,
                             std::span<const int> sizes = {});

struct TrendCheck {
  bool sensitivity_non_increasing = true;
  bool specificity_non_decreasing = true;
};

TrendCheck check_trend(const AblationTable& table);

// label,sensitivity,avg_tp,specificity,avg_fp
std::string to_csv(const AblationTable& table);

}  // namespace wmi
