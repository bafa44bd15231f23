// wpcclean: command-line front end for the power-curve image cleaner.
//
//   wpcclean clean  --input data.csv --output labeled.csv [--report r.json] [--render-dir out/]
//   wpcclean sweep  --input data.csv
//   wpcclean synth  --n 30000 --seed 7 --output synth.csv
//   wpcclean bench  --input synth.csv --truth-col truth --methods image,lof,kmeans
//   wpcclean render --input data.csv --output wpc.png
//
// Exit status: 0 ok, 1 bad input or flags, 2 file I/O.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wpcclean/wpcclean.hpp"

namespace fs = std::filesystem;
using namespace wpcclean;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

unsigned env_threads() {
  const char* s = std::getenv("WPC_CLEAN_THREADS");
  if (!s || !*s) return 0;
  char* end = nullptr;
  const long n = std::strtol(s, &end, 10);
  if (*end || n < 0) throw Error(ErrorCode::InvalidConfig, "WPC_CLEAN_THREADS must be a count >= 0");
  return static_cast<unsigned>(n);
}

struct SpecFlags {
  std::string file;
  std::optional<double> cut_in, rated_speed, cut_out, rated_power;

  void attach(CLI::App* app) {
    app->add_option("--spec", file, "turbine spec file (key=value lines)");
    app->add_option("--cut-in", cut_in, "cut-in speed, m/s");
    app->add_option("--rated-speed", rated_speed, "rated speed, m/s");
    app->add_option("--cut-out", cut_out, "cut-out speed, m/s");
    app->add_option("--rated-power", rated_power, "rated power, kW");
  }

  // File first, then individual flags on top; defaults are 3/13/25 m/s, 1500 kW.
  TurbineSpec resolve() const {
    TurbineSpec s;
    if (!file.empty()) {
      auto in = open_in(file);
      s = parse_spec_config(in);
    }
    if (cut_in) s.cut_in = *cut_in;
    if (rated_speed) s.rated_speed = *rated_speed;
    if (cut_out) s.cut_out = *cut_out;
    if (rated_power) s.rated_power = *rated_power;
    if (auto bad = validate_spec(s); !bad.empty()) {
      throw Error(ErrorCode::InvalidSpec, "violated: " + bad.front());
    }
    return s;
  }
};

struct RasterFlags {
  int width = kDefaultWidth, height = kDefaultHeight, stamp = kDefaultStamp, n_max = kDefaultMaxSe;
  std::string reference = "builtin";
  std::string edge_source = "raw";

  void attach(CLI::App* app, bool sweep) {
    app->add_option("--width", width, "canvas width, px")->capture_default_str();
    app->add_option("--height", height, "canvas height, px")->capture_default_str();
    app->add_option("--stamp", stamp, "side of one plotted point, px")->capture_default_str();
    if (!sweep) return;
    app->add_option("--n-max", n_max, "largest structuring element tried")->capture_default_str();
    app->add_option("--reference", reference, "clean reference CSV, or 'builtin'")->capture_default_str();
    app->add_option("--edge-source", edge_source, "edge region from the raw or opened image")
        ->check(CLI::IsMember({"raw", "opened"}))
        ->capture_default_str();
  }

  PipelineConfig pipeline(const TurbineSpec& spec) const {
    PipelineConfig cfg;
    cfg.width = width;
    cfg.height = height;
    cfg.stamp = stamp;
    cfg.n_max = n_max;
    cfg.edge_source = edge_source == "opened" ? EdgeSource::Opened : EdgeSource::Raw;
    cfg.threads = env_threads();
    if (reference != "builtin") {
      auto in = open_in(reference);
      cfg.reference_points = parse_dataset(in, spec, reference).points;
    }
    return cfg;
  }
};

Dataset load(const std::string& path, const TurbineSpec& spec) {
  auto in = open_in(path);
  return parse_dataset(in, spec, path);
}

void save_image(const BinaryImage& img, const fs::path& path) {
  auto out = open_out(path.string());
  write_image(img, out, image_format_for_path(path.string()));
  finish(out, path.string());
}

Rgb label_colour(Label l) {
  switch (l) {
    case Label::Normal: return {40, 40, 40};
    case Label::Type1: return {0, 160, 0};
    case Label::Type2: return {220, 30, 30};
    case Label::Type3: return {240, 150, 0};
    case Label::Unlabeled: break;
  }
  return {128, 128, 128};
}

void render_all(const RunResult& r, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());

  save_image(r.raw, dir / "raw.png");
  save_image(r.reference, dir / "reference.png");
  for (const auto& e : r.sweep.entries) {
    save_image(e.opened, dir / ("opened_n" + std::to_string(e.n) + ".png"));
  }
  BinaryImage border(r.raw.width(), r.raw.height());
  const auto& best = r.sweep.best().opened;
  if (!best.empty_foreground()) {
    for (const auto& p : max_contour(best).points) border.set(p.x, p.y);
  }
  save_image(border, dir / "contour.png");

  RgbImage overlay(r.raw.width(), r.raw.height());
  for (const auto& p : r.labeled.points) {
    const PixelCoord c = map_point(p, r.transform);
    for (int dy = 0; dy < r.transform.stamp; ++dy) {
      for (int dx = 0; dx < r.transform.stamp; ++dx) {
        if (c.x + dx < overlay.width && c.y + dy < overlay.height) {
          overlay.at(c.x + dx, c.y + dy) = label_colour(p.label);
        }
      }
    }
  }
  const std::string path = (dir / "labels.png").string();
  auto out = open_out(path);
  write_image(overlay, out);
  finish(out, path);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Wind power curve abnormal-data cleaner"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand help for every subcommand");

  // clean
  auto* clean = app.add_subcommand("clean", "label every row normal/type1/type2/type3");
  std::string c_input, c_output, c_report, c_render;
  SpecFlags c_spec;
  RasterFlags c_raster;
  clean->add_option("--input", c_input, "SCADA CSV with timestamp,v,P")->required();
  clean->add_option("--output", c_output, "labeled CSV")->required();
  clean->add_option("--report", c_report, "JSON report");
  clean->add_option("--render-dir", c_render, "directory for raw/opened/contour/label images");
  c_spec.attach(clean);
  c_raster.attach(clean, true);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "print the n -> D table and n_best");
  std::string s_input;
  SpecFlags s_spec;
  RasterFlags s_raster;
  sweep->add_option("--input", s_input, "SCADA CSV")->required();
  s_spec.attach(sweep);
  s_raster.attach(sweep, true);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a labeled synthetic dataset");
  std::string y_output;
  SpecFlags y_spec;
  SynthConfig y_cfg;
  std::optional<double> y_sigma;
  std::vector<double> y_levels;
  synth->add_option("--output", y_output, "CSV with a truth column")->required();
  synth->add_option("--n", y_cfg.n_points, "number of points")->capture_default_str();
  synth->add_option("--type1", y_cfg.type1_frac, "fraction of negative-power points")->capture_default_str();
  synth->add_option("--type2", y_cfg.type2_frac, "fraction of scattered points")->capture_default_str();
  synth->add_option("--type3", y_cfg.type3_frac, "fraction of stacked points")->capture_default_str();
  synth->add_option("--noise-sigma", y_sigma, "normal-point noise, kW (default 1.5% of rated)");
  synth->add_option("--levels", y_levels, "curtailment levels, kW (default 40% of rated)");
  synth->add_option("--jitter", y_cfg.type3_jitter, "std-dev around each level, kW")->capture_default_str();
  synth->add_option("--weibull-shape", y_cfg.weibull_shape)->capture_default_str();
  synth->add_option("--weibull-scale", y_cfg.weibull_scale, "m/s")->capture_default_str();
  synth->add_option("--seed", y_cfg.seed)->capture_default_str();
  y_spec.attach(synth);

  // bench
  auto* bench = app.add_subcommand("bench", "compare cleaners, optionally against ground truth");
  std::string b_input, b_truth, b_methods = "image,lof,kmeans", b_output, b_format = "md";
  std::vector<std::string> b_external;
  bool b_parallel = false;
  SpecFlags b_spec;
  RasterFlags b_raster;
  BaselineConfig b_cfg;
  bench->add_option("--input", b_input, "SCADA CSV")->required();
  bench->add_option("--truth-col", b_truth, "column holding ground-truth labels");
  bench->add_option("--methods", b_methods, "comma list of image, lof, kmeans")->capture_default_str();
  bench->add_option("--external", b_external, "extra labeling as name=path.csv (label column)");
  bench->add_option("--lof-k", b_cfg.lof_k)->capture_default_str();
  bench->add_option("--lof-fraction", b_cfg.lof_fraction)->capture_default_str();
  bench->add_option("--kmeans-k", b_cfg.kmeans_k)->capture_default_str();
  bench->add_option("--kmeans-sigma", b_cfg.kmeans_sigma)->capture_default_str();
  bench->add_option("--seed", b_cfg.seed)->capture_default_str();
  bench->add_flag("--parallel", b_parallel, "run methods concurrently (drops timing columns)");
  bench->add_option("--format", b_format, "md or csv")->check(CLI::IsMember({"md", "csv"}))->capture_default_str();
  bench->add_option("--output", b_output, "write the table here instead of stdout");
  b_spec.attach(bench);
  b_raster.attach(bench, true);

  // render
  auto* render = app.add_subcommand("render", "write the binary WPC image");
  std::string r_input, r_output;
  SpecFlags r_spec;
  RasterFlags r_raster;
  render->add_option("--input", r_input, "SCADA CSV")->required();
  render->add_option("--output", r_output, "image path, .png or .pgm")->required();
  r_spec.attach(render);
  r_raster.attach(render, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "wpcclean: " << e.what() << '\n';
    return 1;
  }

  if (clean->parsed()) {
    const auto spec = c_spec.resolve();
    const auto cfg = c_raster.pipeline(spec);
    auto result = run(load(c_input, spec), cfg);
    auto out = open_out(c_output);
    write_labeled(result.labeled, out);
    finish(out, c_output);
    if (!c_report.empty()) {
      auto rep = open_out(c_report);
      rep << to_json(result.report).dump(2) << '\n';
      finish(rep, c_report);
    }
    if (!c_render.empty()) render_all(result, c_render);
    std::cout << summary(result.report) << '\n';
  } else if (sweep->parsed()) {
    const auto spec = s_spec.resolve();
    const auto result = run(load(s_input, spec), s_raster.pipeline(spec));
    std::cout << sweep_table(result.report);
  } else if (synth->parsed()) {
    y_cfg.spec = y_spec.resolve();
    y_cfg.noise_sigma = y_sigma.value_or(0.015 * y_cfg.spec.rated_power);
    y_cfg.type3_levels = y_levels.empty() ? std::vector<double>{0.4 * y_cfg.spec.rated_power} : y_levels;
    auto s = generate(y_cfg);
    std::vector<std::string> truth;
    truth.reserve(s.truth.size());
    for (Label l : s.truth) truth.emplace_back(label_name(l));
    add_extra_column(s.dataset, "truth", truth);
    auto out = open_out(y_output);
    write_dataset(s.dataset, out);
    finish(out, y_output);
  } else if (bench->parsed()) {
    const auto spec = b_spec.resolve();
    const auto ds = load(b_input, spec);
    CompareConfig cfg;
    cfg.pipeline = b_raster.pipeline(spec);
    cfg.baseline = b_cfg;
    cfg.baseline.threads = cfg.pipeline.threads;
    cfg.parallel = b_parallel;
    for (const auto& item : b_external) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorCode::InvalidConfig, "--external expects name=path, got '" + item + "'");
      }
      const std::string path = item.substr(eq + 1);
      auto in = open_in(path);
      cfg.external.emplace_back(item.substr(0, eq), read_labels(in));
    }
    std::optional<std::vector<Label>> truth;
    if (!b_truth.empty()) truth = truth_column(ds, b_truth);
    const auto methods = parse_methods(b_methods);
    const auto report =
        truth ? compare(ds, methods, cfg, std::span<const Label>(*truth)) : compare(ds, methods, cfg);
    const std::string table = b_format == "csv" ? to_csv(report) : to_markdown(report);
    if (b_output.empty()) {
      std::cout << table;
    } else {
      auto out = open_out(b_output);
      out << table;
      finish(out, b_output);
    }
  } else if (render->parsed()) {
    const auto spec = r_spec.resolve();
    auto ds = load(r_input, spec);
    preclean(ds);
    const auto t = build_transform(ds, r_raster.width, r_raster.height, r_raster.stamp);
    save_image(rasterize(ds, t), r_output);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const Error& e) {
    std::cerr << "wpcclean: " << e.what() << '\n';
    return e.code() == ErrorCode::Io ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "wpcclean: " << e.what() << '\n';
    return 1;
  }
}
