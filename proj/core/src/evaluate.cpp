#include "wmi/evaluate.hpp"

#include <array>
#include <cstdio>
#include <sstream>

namespace wmi {

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth, const BinaryMask& brain) {
  require_same_shape(pred, truth, "confusion");
  require_same_shape(pred, brain, "confusion");
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!brain[i]) continue;
    const bool p = pred[i] != 0;
    const bool t = truth[i] != 0;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

std::optional<double> sensitivity(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return 100.0 * static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::optional<double> specificity(const ConfusionCounts& c) {
  if (c.tn + c.fp == 0) return std::nullopt;
  return 100.0 * static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
}

MetricsReport make_report(std::span<const BinaryMask> pred, std::span<const BinaryMask> truth,
                          std::span<const BinaryMask> brain) {
  if (pred.size() != truth.size() || pred.size() != brain.size()) {
    throw ShapeMismatch("make_report: prediction, truth and brain stacks differ in length");
  }
  MetricsReport r;
  double sens_sum = 0.0;
  double spec_sum = 0.0;
  int sens_n = 0;
  int spec_n = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    SliceMetrics m;
    m.slice_index = static_cast<int>(i);
    m.counts = confusion(pred[i], truth[i], brain[i]);
    m.sensitivity = sensitivity(m.counts);
    m.specificity = specificity(m.counts);
    if (m.sensitivity) {
      sens_sum += *m.sensitivity;
      ++sens_n;
    } else {
      ++r.undefined_sensitivity;
    }
    if (m.specificity) {
      spec_sum += *m.specificity;
      ++spec_n;
    } else {
      ++r.undefined_specificity;
    }
    r.avg_tp += static_cast<double>(m.counts.tp);
    r.avg_fp += static_cast<double>(m.counts.fp);
    r.avg_tn += static_cast<double>(m.counts.tn);
    r.avg_fn += static_cast<double>(m.counts.fn);
    r.rows.push_back(m);
  }
  if (sens_n > 0) r.sensitivity = sens_sum / sens_n;
  if (spec_n > 0) r.specificity = spec_sum / spec_n;
  if (!pred.empty()) {
    const auto n = static_cast<double>(pred.size());
    r.avg_tp /= n;
    r.avg_fp /= n;
    r.avg_tn /= n;
    r.avg_fn /= n;
  }
  return r;
}

namespace {

std::string fmt(double v, int digits = 4) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*f", digits, v);
  return buf.data();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "NA"; }

}  // namespace

std::string to_csv(const MetricsReport& report) {
  std::ostringstream os;
  os << "slice_index,tp,fp,tn,fn,sensitivity,specificity\n";
  for (const auto& m : report.rows) {
    os << m.slice_index << ',' << m.counts.tp << ',' << m.counts.fp << ',' << m.counts.tn << ','
       << m.counts.fn << ',' << fmt(m.sensitivity) << ',' << fmt(m.specificity) << '\n';
  }
  os << "mean," << fmt(report.avg_tp) << ',' << fmt(report.avg_fp) << ',' << fmt(report.avg_tn) << ','
     << fmt(report.avg_fn) << ',' << fmt(report.sensitivity) << ',' << fmt(report.specificity) << '\n';
  return os.str();
}

LabeledStack labeled_stack(const PhantomStack& phantom) {
  LabeledStack s;
  s.slices = phantom.slices;
  for (const auto& t : phantom.truth) {
    s.truth.push_back(t.lesion);
    s.brain.push_back(t.brain);
  }
  return s;
}

ObjectRecall object_recall(const PhantomStack& phantom, std::span<const BinaryMask> confirmed_masks) {
  if (confirmed_masks.size() != phantom.slices.size()) {
    throw ShapeMismatch("object_recall: mask count differs from slice count");
  }
  auto hit = [&](const PhantomObject& o) {
    const BinaryMask& m = confirmed_masks[static_cast<std::size_t>(o.slice)];
    for (PixelIndex p : o.pixels) {
      if (m[static_cast<std::size_t>(p)]) return true;
    }
    return false;
  };
  ObjectRecall r;
  for (const auto& o : phantom.lesion_instances) {
    ++r.lesions;
    if (hit(o)) ++r.lesions_confirmed;
  }
  for (const auto& o : phantom.decoys) {
    ++r.decoys;
    if (!hit(o)) ++r.decoys_rejected;
  }
  return r;
}

const char* to_string(ConstraintMode mode) {
  switch (mode) {
    case ConstraintMode::both: return "Both";
    case ConstraintMode::none: return "None";
    case ConstraintMode::size: return "Size";
    case ConstraintMode::distance: return "Distance";
  }
  return "?";
}

PipelineConfig with_constraints(PipelineConfig config, ConstraintMode mode) {
  config.filter.size_constraint = mode == ConstraintMode::both || mode == ConstraintMode::size;
  config.filter.distance_constraint = mode == ConstraintMode::both || mode == ConstraintMode::distance;
  return config;
}

EvaluationRun evaluate_stack(const LabeledStack& stack, const PipelineConfig& config) {
  if (stack.truth.size() != stack.slices.size()) {
    throw ShapeMismatch("evaluate_stack: truth count differs from slice count");
  }
  if (!stack.brain.empty() && stack.brain.size() != stack.slices.size()) {
    throw ShapeMismatch("evaluate_stack: brain mask count differs from slice count");
  }
  EvaluationRun run;
  run.volume = detect_volume(stack.slices, config);
  if (stack.brain.empty()) {
    std::vector<BinaryMask> brain;
    brain.reserve(run.volume.slices.size());
    for (const auto& s : run.volume.slices) brain.push_back(s.foreground);
    run.report = make_report(run.volume.confirmed_masks, stack.truth, brain);
  } else {
    run.report = make_report(run.volume.confirmed_masks, stack.truth, stack.brain);
  }
  return run;
}

MetricsReport ablation_run(const LabeledStack& stack, const PipelineConfig& base, ConstraintMode mode) {
  return evaluate_stack(stack, with_constraints(base, mode)).report;
}

MetricsReport ablation_run_min_size(const LabeledStack& stack, const PipelineConfig& base, int min_size) {
  PipelineConfig config = base;
  config.filter.min_lesion_size = min_size;
  return evaluate_stack(stack, config).report;
}

AblationTable constraint_ablation(const LabeledStack& stack, const PipelineConfig& base) {
  AblationTable table{"constraints", {}};
  for (ConstraintMode m : {ConstraintMode::both, ConstraintMode::none, ConstraintMode::size,
                           ConstraintMode::distance}) {
    table.rows.push_back({to_string(m), ablation_run(stack, base, m)});
  }
  return table;
}

AblationTable min_size_sweep(const LabeledStack& stack, const PipelineConfig& base, std::span<const int> sizes) {
  static constexpr std::array<int, 4> kDefaultSizes{0, 100, 150, 250};
  if (sizes.empty()) sizes = kDefaultSizes;
  AblationTable table{"min_lesion_size", {}};
  for (int s : sizes) {
    table.rows.push_back({s == 0 ? std::string("off") : std::to_string(s), ablation_run_min_size(stack, base, s)});
  }
  return table;
}

TrendCheck check_trend(const AblationTable& table) {
  TrendCheck t;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& prev = table.rows[i - 1].report;
    const auto& cur = table.rows[i].report;
    if (prev.sensitivity && cur.sensitivity && *cur.sensitivity > *prev.sensitivity) {
      t.sensitivity_non_increasing = false;
    }
    if (prev.specificity && cur.specificity && *cur.specificity < *prev.specificity) {
      t.specificity_non_decreasing = false;
    }
  }
  return t;
}

std::string to_csv(const AblationTable& table) {
  std::ostringstream os;
  os << "label,sensitivity,avg_tp,specificity,avg_fp\n";
  for (const auto& row : table.rows) {
    os << row.label << ',' << fmt(row.report.sensitivity) << ',' << fmt(row.report.avg_tp) << ','
       << fmt(row.report.specificity) << ',' << fmt(row.report.avg_fp) << '\n';
  }
  return os.str();
}

}  // namespace wmi
