// wmidetect: command line front end for the white-matter hyperintensity detector.
//
//   wmidetect detect  MANIFEST [--config FILE] [--KEY VALUE ...] [--no-diffusion ...]
//   wmidetect eval    MANIFEST --pred DIR [--csv FILE]
//   wmidetect phantom --out DIR [--seed N] [--slices N] [--lesions N] [--decoys N]
//   wmidetect bench   [--slices N] [--seed N] [--threads N]

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "wmi/app.hpp"
#include "wmi/config.hpp"

namespace {

// Every config key doubles as a --KEY VALUE option; values are applied after
// the config file, in key order.
struct KeyOptions {
  std::map<std::string, std::string> values;

  void attach(CLI::App& cmd) {
    for (const auto& key : wmi::config_keys()) {
      cmd.add_option("--" + key, values[key], "config key '" + key + "'")->group("Config keys");
    }
  }

  void apply(CLI::App& cmd, wmi::RunConfig& cfg) const {
    for (const auto& key : wmi::config_keys()) {
      if (cmd.count("--" + key) > 0) wmi::apply_setting(cfg, key, values.at(key));
    }
  }
};

struct Shortcuts {
  bool no_diffusion = false;
  bool no_size = false;
  bool no_distance = false;

  void attach(CLI::App& cmd) {
    cmd.add_flag("--no-diffusion", no_diffusion, "skip Perona-Malik denoising");
    cmd.add_flag("--no-size-constraint", no_size, "keep objects regardless of size");
    cmd.add_flag("--no-distance-constraint", no_distance, "keep objects near the brain boundary");
  }

  void apply(wmi::RunConfig& cfg) const {
    if (no_diffusion) cfg.pipeline.diffusion = false;
    if (no_size) cfg.pipeline.filter.size_constraint = false;
    if (no_distance) cfg.pipeline.filter.distance_constraint = false;
  }
};

wmi::VentricleShape parse_shape(const std::string& s) {
  if (s == "simple") return wmi::VentricleShape::simple;
  if (s == "lobed") return wmi::VentricleShape::lobed;
  throw wmi::ConfigError("--ventricles expects 'simple' or 'lobed', got '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segmentation-free white-matter injury detection on T1 slice stacks"};
  app.require_subcommand(1);

  // detect
  auto* detect = app.add_subcommand("detect", "run coarse and fine detection on a slice manifest");
  std::string manifest;
  std::string config_file;
  bool print_config = false;
  KeyOptions detect_keys;
  Shortcuts shortcuts;
  detect->add_option("manifest", manifest, "manifest file (slice[<TAB>truth[<TAB>brain]] per line)")->required();
  detect->add_option("--config", config_file, "key = value configuration file");
  detect->add_flag("--print-config", print_config, "print the effective configuration and exit");
  detect_keys.attach(*detect);
  shortcuts.attach(*detect);

  // eval
  auto* eval = app.add_subcommand("eval", "score predicted masks against manifest truth");
  std::string eval_manifest;
  std::string pred_dir;
  std::string csv_path;
  eval->add_option("manifest", eval_manifest, "manifest with truth masks")->required();
  eval->add_option("--pred", pred_dir, "directory of predicted masks named like the slices")->required();
  eval->add_option("--csv", csv_path, "write the CSV here instead of stdout");

  // phantom
  auto* phantom = app.add_subcommand("phantom", "write a synthetic slice stack with ground truth");
  wmi::app::PhantomRequest preq;
  std::string phantom_out;
  std::string shape = "simple";
  phantom->add_option("--out", phantom_out, "output directory")->required();
  phantom->add_option("--seed", preq.seed, "random seed");
  phantom->add_option("--slices", preq.slices, "slice count")->check(CLI::PositiveNumber);
  phantom->add_option("--lesions", preq.lesions, "multi-slice lesions")->check(CLI::NonNegativeNumber);
  phantom->add_option("--decoys", preq.decoys, "single-slice decoys")->check(CLI::NonNegativeNumber);
  phantom->add_option("--noise", preq.noise_sigma, "tissue noise sigma")->check(CLI::NonNegativeNumber);
  phantom->add_option("--ventricles", shape, "ventricle shape: simple or lobed");
  phantom->add_option("--width", preq.width, "slice width");
  phantom->add_option("--height", preq.height, "slice height");

  // bench
  auto* bench = app.add_subcommand("bench", "time the pipeline on a generated phantom stack");
  wmi::app::BenchRequest breq;
  KeyOptions bench_keys;
  bench->add_option("--slices", breq.slices, "slice count")->check(CLI::PositiveNumber);
  bench->add_option("--phantom-seed", breq.seed, "phantom seed");
  bench_keys.attach(*bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return wmi::app::kUsage;
  }

  try {
    if (detect->parsed()) {
      wmi::app::DetectRequest req;
      req.manifest = manifest;
      if (!config_file.empty()) wmi::load_config_file(req.config, config_file);
      detect_keys.apply(*detect, req.config);
      shortcuts.apply(req.config);
      req.config.pipeline.validate();
      if (print_config) {
        std::cout << wmi::dump_config(req.config);
        return wmi::app::kOk;
      }
      return wmi::app::run_detect(req, std::cout, std::cerr);
    }
    if (eval->parsed()) {
      wmi::app::EvalRequest req{eval_manifest, pred_dir, std::nullopt};
      if (!csv_path.empty()) req.csv = csv_path;
      return wmi::app::run_eval(req, std::cout, std::cerr);
    }
    if (phantom->parsed()) {
      preq.out = phantom_out;
      preq.shape = parse_shape(shape);
      return wmi::app::run_phantom(preq, std::cout, std::cerr);
    }
    if (bench->parsed()) {
      bench_keys.apply(*bench, breq.config);
      breq.config.pipeline.validate();
      return wmi::app::run_bench(breq, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    return wmi::app::report_error(e, std::cerr);
  }
  return wmi::app::kUsage;
}
