#include "wmi/app.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "wmi/evaluate.hpp"
#include "wmi/io.hpp"
#include "wmi/pipeline.hpp"

namespace wmi::app {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

int report_error(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  if (const auto* io = dynamic_cast<const IoError*>(&e)) {
    switch (io->kind()) {
      case IoErrorKind::missing_file: return kMissingFile;
      case IoErrorKind::unreadable: return kUnreadableSlice;
      case IoErrorKind::dimension_mismatch: return kDimensionMismatch;
      case IoErrorKind::missing_truth: return kMissingTruth;
      case IoErrorKind::empty_manifest: return kBadManifest;
      case IoErrorKind::write_failed: return kFailure;
    }
  }
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) return kUsage;
  if (dynamic_cast<const ShapeMismatch*>(&e)) return kDimensionMismatch;
  return kFailure;
}

namespace {

json point(const Point2& p) { return json::array({p.x, p.y}); }

json object_json(const CandidateObject& o) {
  return {{"size", o.size}, {"centroid", point(o.centroid)}, {"mean_boundary_distance", o.mean_boundary_distance}};
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << text;
  f.flush();
  if (!f) throw IoError(IoErrorKind::write_failed, "cannot write " + path.string());
}

BinaryMask fallback_brain(const GrayImage& slice) {
  try {
    return segregate_background(slice).foreground;
  } catch (const Undetectable&) {
    return BinaryMask(slice.width(), slice.height(), 1);
  }
}

BinaryMask load_matching_mask(const fs::path& path, const GrayImage& slice) {
  BinaryMask m = read_mask_pgm(path);
  if (!m.same_shape(slice)) {
    throw IoError(IoErrorKind::dimension_mismatch, path.string() + ": mask shape differs from its slice");
  }
  return m;
}

}  // namespace

int run_detect(const DetectRequest& request, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig& cfg = request.config;
    cfg.pipeline.validate();
    const auto entries = read_manifest(request.manifest);
    const SliceStack stack = load_slices(entries);

    const VolumeResult result = detect_volume(stack.slices, cfg.pipeline);

    for (std::size_t i = 0; i < stack.slices.size(); ++i) {
      write_mask_pgm(cfg.out / "candidates" / stack.names[i], result.candidate_masks[i]);
      write_mask_pgm(cfg.out / "confirmed" / stack.names[i], result.confirmed_masks[i]);
      if (cfg.overlays) {
        fs::path name = stack.names[i];
        name.replace_extension(".ppm");
        write_overlay_ppm(cfg.out / "overlay" / name, stack.slices[i], result.confirmed_masks[i]);
      }
    }

    json summary;
    summary["config"] = json::object();
    for (const auto& [key, value] : config_items(cfg)) {
      if (key != "threads" && key != "out") summary["config"][key] = value;
    }
    summary["cross_validated"] = result.detection.cross_validated;
    json slices = json::array();
    std::size_t confirmed_total = 0;
    for (std::size_t i = 0; i < result.slices.size(); ++i) {
      const SliceResult& s = result.slices[i];
      const SliceDetection& d = result.detection.per_slice[i];
      json row{{"index", i}, {"name", stack.names[i]}, {"detected", s.detected}};
      if (!s.detected) row["note"] = s.note;
      row["mser_regions"] = s.mser_regions;
      row["ga_fitness"] = s.ga_fitness;
      row["wm_median"] = s.coarse.stats.median;
      row["wm_mad"] = s.coarse.stats.mad;
      row["candidates"] = s.coarse.candidates.size();
      json confirmed = json::array();
      for (const auto& o : d.confirmed) confirmed.push_back(object_json(o));
      json rejected = json::array();
      for (const auto& o : d.rejected) rejected.push_back(object_json(o));
      row["confirmed"] = std::move(confirmed);
      row["rejected"] = std::move(rejected);
      confirmed_total += d.confirmed.size();
      slices.push_back(std::move(row));
    }
    summary["slices"] = std::move(slices);
    json recovered = json::array();
    for (const auto& r : result.detection.recovered) {
      recovered.push_back({{"slice", r.slice_index}, {"centroid", point(r.centroid)}});
    }
    summary["recovered"] = std::move(recovered);
    write_text(cfg.out / "summary.json", summary.dump(2) + "\n");

    json timing{{"threads", cfg.pipeline.threads},
                {"coarse_ms", result.coarse_ms},
                {"fine_ms", result.fine_ms},
                {"slice_ms", json::array()}};
    for (const auto& s : result.slices) timing["slice_ms"].push_back(s.elapsed_ms);
    write_text(cfg.out / "timing.json", timing.dump(2) + "\n");

    const bool have_truth =
        std::all_of(entries.begin(), entries.end(), [](const ManifestEntry& e) { return e.truth.has_value(); });
    if (have_truth) {
      std::vector<BinaryMask> truth;
      std::vector<BinaryMask> brain;
      for (std::size_t i = 0; i < entries.size(); ++i) {
        truth.push_back(load_matching_mask(*entries[i].truth, stack.slices[i]));
        brain.push_back(entries[i].brain ? load_matching_mask(*entries[i].brain, stack.slices[i])
                                         : result.slices[i].foreground);
      }
      write_text(cfg.out / "metrics.csv", to_csv(make_report(result.confirmed_masks, truth, brain)));
    }

    out << "slices: " << stack.slices.size() << ", confirmed objects: " << confirmed_total
        << ", recovered: " << result.detection.recovered.size() << ", output: " << cfg.out.string() << '\n';
    return kOk;
  } catch (const std::exception& e) {
    return report_error(e, err);
  }
}

int run_eval(const EvalRequest& request, std::ostream& out, std::ostream& err) {
  try {
    const auto entries = read_manifest(request.manifest);
    std::vector<BinaryMask> pred;
    std::vector<BinaryMask> truth;
    std::vector<BinaryMask> brain;
    for (const auto& e : entries) {
      if (!e.truth) {
        throw IoError(IoErrorKind::missing_truth, e.slice.string() + ": manifest line has no truth mask");
      }
      const GrayImage slice = read_pgm(e.slice);
      truth.push_back(load_matching_mask(*e.truth, slice));
      pred.push_back(load_matching_mask(request.predictions / e.slice.filename(), slice));
      brain.push_back(e.brain ? load_matching_mask(*e.brain, slice) : fallback_brain(slice));
    }
    const std::string csv = to_csv(make_report(pred, truth, brain));
    if (request.csv) {
      write_text(*request.csv, csv);
    } else {
      out << csv;
    }
    return kOk;
  } catch (const std::exception& e) {
    return report_error(e, err);
  }
}

PhantomConfig phantom_config(const PhantomRequest& r) {
  PhantomConfig base;
  base.width = r.width;
  base.height = r.height;
  base.ventricle_shape = r.shape;
  base.noise_sigma = r.noise_sigma;
  PhantomConfig c = PhantomConfig::with_random_lesions(base, r.seed, r.lesions, r.decoys, r.slices);
  return c;
}

int run_phantom(const PhantomRequest& request, std::ostream& out, std::ostream& err) {
  try {
    const PhantomStack stack = generate_phantom(phantom_config(request));
    write_phantom_stack(request.out, stack);

    json objects{{"lesions", json::array()}, {"decoys", json::array()}};
    for (const auto& o : stack.lesion_instances) {
      objects["lesions"].push_back(
          {{"id", o.id}, {"slice", o.slice}, {"size", o.pixels.size()}, {"centroid", point(o.centroid)}});
    }
    for (const auto& o : stack.decoys) {
      objects["decoys"].push_back(
          {{"id", o.id}, {"slice", o.slice}, {"size", o.pixels.size()}, {"centroid", point(o.centroid)}});
    }
    write_text(request.out / "objects.json", objects.dump(2) + "\n");
    out << "wrote " << stack.slices.size() << " slices, " << stack.lesion_instances.size()
        << " lesion instances, " << stack.decoys.size() << " decoys to " << request.out.string() << '\n';
    return kOk;
  } catch (const std::exception& e) {
    return report_error(e, err);
  }
}

TimingReport time_pipeline(const PipelineConfig& config, int slices, std::uint64_t seed) {
  if (slices < 1) throw InvalidArgument("time_pipeline: need at least one slice");
  const PhantomStack stack = generate_phantom(
      PhantomConfig::with_random_lesions(seed, std::max(1, slices / 4), std::max(0, slices / 3), slices));
  const auto t0 = std::chrono::steady_clock::now();
  const VolumeResult r = detect_volume(stack.slices, config);
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  TimingReport t;
  t.slices = slices;
  t.threads = config.threads;
  t.coarse_ms_per_slice = r.coarse_ms / slices;
  t.fine_ms_per_slice = r.fine_ms / slices;
  t.total_s = total;
  return t;
}

int run_bench(const BenchRequest& request, std::ostream& out, std::ostream& err) {
  try {
    const TimingReport t = time_pipeline(request.config.pipeline, request.slices, request.seed);
    json j{{"slices", t.slices},
           {"threads", t.threads},
           {"coarse_ms_per_slice", t.coarse_ms_per_slice},
           {"fine_ms_per_slice", t.fine_ms_per_slice},
           {"total_s", t.total_s}};
    out << j.dump(2) << '\n';
    return kOk;
  } catch (const std::exception& e) {
    return report_error(e, err);
  }
}

}  // namespace wmi::app
