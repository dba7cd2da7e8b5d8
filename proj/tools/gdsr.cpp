#include <cmath>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "gdsr/dct.hpp"
#include "gdsr/error.hpp"
#include "gdsr/fit.hpp"
#include "gdsr/harness.hpp"
#include "gdsr/netpbm.hpp"
#include "gdsr/parallel.hpp"

namespace {

using namespace gdsr;

struct GuideOptions {
  std::string edge = "hard";
  double tau_q = 0.9;
  double alpha = 50.0;
  std::string symbol = "derived";

  void add_to(CLI::App* app) {
    app->add_option("--edge", edge, "Edge weight mode")->check(CLI::IsMember({"none", "hard", "soft"}));
    app->add_option("--tau-q", tau_q, "Gradient quantile for the edge threshold");
    app->add_option("--alpha", alpha, "Soft edge slope");
    app->add_option("--symbol", symbol, "Spectral symbol")->check(CLI::IsMember({"derived", "paper"}));
  }

  EdgeWeightConfig edge_config() const {
    EdgeWeightConfig e{parse_edge_mode(edge), tau_q, alpha};
    e.validate();
    return e;
  }
};

struct SrArgs {
  std::string depth, rgb, out, method = "bicubic", params, errmap, gt;
  int scale = 8;
  int bits = 8;
  double unit_scale = 1.0;
  double max_err = 10.0;
  std::optional<double> lambda;
  GuideOptions guide;
};

int run_sr(const SrArgs& a) {
  const ScaleFactor s(a.scale);
  PipelineConfig cfg;
  cfg.method = parse_method(a.method);
  cfg.lambda = a.lambda;
  cfg.edge = a.guide.edge_config();
  cfg.symbol = parse_symbol_mode(a.guide.symbol);
  if (!a.params.empty()) {
    ModelParams p = read_params(a.params);
    if (p.scale != s.value())
      throw InvalidArgument("parameter file was fitted at scale " + std::to_string(p.scale));
    cfg.params[p.scale] = std::move(p);
  }
  cfg.validate();

  const DepthMap lr = io::load_depth(a.depth, a.unit_scale);
  const RgbImage rgb = io::load_rgb(a.rgb);
  if (rgb.height() != lr.height() * a.scale || rgb.width() != lr.width() * a.scale)
    throw DimensionError("rgb is " + shape_string(rgb.red()) + ", expected depth " + shape_string(lr.data()) +
                         " times " + std::to_string(a.scale));
  Image2D pred = super_resolve(bicubic_upsample(lr.data(), s), luminance(rgb), cfg, s);
  for (double& v : pred.samples()) v = std::max(v, 0.0);

  const std::filesystem::path out(a.out);
  if (out.extension() == ".pgm") {
    io::write_file(out, io::encode_pgm(pred, a.bits, false));
  } else {
    io::save_image(pred, out, io::format_from_extension(out));
  }

  if (!a.errmap.empty()) {
    if (a.gt.empty()) throw InvalidArgument("--errmap needs --gt");
    const DepthMap gt = io::load_depth(a.gt, a.unit_scale);
    const DepthMap p(std::move(pred), a.unit_scale);
    io::save_error_map(p, gt, a.errmap, a.max_err);
    std::printf("rmse %.17g\n", rmse(p, gt));
  }
  return 0;
}

struct BenchArgs {
  std::string manifest, config, out, errmaps;
  std::vector<int> scales{4, 8, 16};
  bool timing = false;
  double max_err = 10.0;
};

int run_bench_cmd(const BenchArgs& a) {
  const DatasetManifest manifest = load_manifest(a.manifest);
  const std::vector<PipelineConfig> configs = load_pipeline_configs(a.config);
  BenchOptions options;
  options.record_timing = a.timing;
  options.error_map_max = a.max_err;
  if (!a.errmaps.empty()) {
    std::filesystem::create_directories(a.errmaps);
    options.error_map_dir = a.errmaps;
  }
  const auto records = run_bench(manifest, a.scales, configs, options);
  io::write_file(a.out, format_csv(records));
  int failed = 0;
  for (const auto& r : records)
    if (r.error) {
      ++failed;
      std::cerr << "gdsr bench: " << r.image_id << " x" << r.scale << " " << r.method << ": " << *r.error << "\n";
    }
  std::printf("%zu rows, %d failed\n", records.size(), failed);
  return 0;
}

struct FitArgs {
  std::string manifest, out, mode = "both", split = "train", bank = "default8";
  int scale = 8;
  double gamma = 1e-6;
  SearchOptions search;
  bool antialias = true;
  GuideOptions guide;
};

int run_fit(const FitArgs& a) {
  const ScaleFactor s(a.scale);
  const DatasetManifest manifest = load_manifest(a.manifest);
  const auto entries = manifest.select(a.split);
  if (entries.empty()) throw InvalidArgument("no manifest entries in split '" + a.split + "'");
  a.search.validate();
  const auto pairs = make_train_pairs(entries, s, a.antialias);

  ModelParams p;
  p.bank = a.bank;
  p.scale = s.value();
  p.gamma = a.gamma;
  p.edge = a.guide.edge_config();
  p.symbol = parse_symbol_mode(a.guide.symbol);
  const FilterBank bank = bank_by_id(a.bank);

  if (a.mode == "lambda" || a.mode == "both") {
    const ImageLambdaFit f = fit_image_lambda(pairs, p.edge, p.symbol, a.search);
    p.image_lambda = f.lambda;
    std::printf("image lambda %.6g  rmse %.6g  (lambda=0: %.6g)\n", f.lambda, f.rmse, f.rmse_at_zero);
  }
  if (a.mode == "head") {
    p.lambdas.assign(bank.size(), std::exp(kInitialLogLambda));
    const ReconstructionHead h = fit_head_fixed_lambdas(pairs, bank, p.edge, p.symbol, p.lambdas, a.gamma);
    p.head_weights = h.weights;
    p.head_bias = h.bias;
  } else if (a.mode == "both") {
    const LambdaFit f = fit_lambda(pairs, bank, p.edge, p.symbol, a.gamma, a.search);
    p.lambdas = f.lambdas.values();
    p.head_weights = f.head.weights;
    p.head_bias = f.head.bias;
    std::printf("feature rmse %.6g -> %.6g after %d sweeps\n", f.trace.front(), f.trace.back(), f.sweeps_run);
  }
  p.config_hash = p.fit_config_hash();
  write_params(p, a.out);
  return 0;
}

int run_dct(const std::string& in, const std::string& out, bool inverse) {
  const Image2D img = io::load_gray(in);
  const Image2D res = inverse ? dct2_inverse(img) : dct2_forward(img);
  io::write_file(out, io::encode_pfm(res));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guided depth super-resolution with a spectral screened-Poisson solve"};
  app.require_subcommand(1);
  std::optional<int> threads;
  app.add_option("--threads", threads, "Worker count (overrides GDSR_THREADS)")->check(CLI::PositiveNumber);

  SrArgs sr;
  auto* sr_cmd = app.add_subcommand("sr", "Super-resolve one depth map");
  sr_cmd->add_option("--depth", sr.depth, "Low-resolution depth (PGM or PFM)")->required();
  sr_cmd->add_option("--rgb", sr.rgb, "High-resolution guide (PPM or PGM)")->required();
  sr_cmd->add_option("--scale", sr.scale)->required()->check(CLI::IsMember({2, 4, 8, 16}));
  sr_cmd->add_option("--method", sr.method)->check(CLI::IsMember({"bicubic", "image", "feature"}));
  sr_cmd->add_option("--lambda", sr.lambda, "Image-domain lambda");
  sr_cmd->add_option("--params", sr.params, "Fitted parameter file");
  sr.guide.add_to(sr_cmd);
  sr_cmd->add_option("--out", sr.out, "Output .pgm or .pfm")->required();
  sr_cmd->add_option("--bits", sr.bits, "PGM output depth")->check(CLI::IsMember({8, 16}));
  sr_cmd->add_option("--unit-scale", sr.unit_scale, "Metric units per stored unit");
  sr_cmd->add_option("--errmap", sr.errmap, "Error map output (PGM)");
  sr_cmd->add_option("--gt", sr.gt, "Ground-truth depth for --errmap");
  sr_cmd->add_option("--max-err", sr.max_err, "Error mapped to white");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark configs over a dataset manifest");
  bench_cmd->add_option("--manifest", bench.manifest)->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--scales", bench.scales)->delimiter(',');
  bench_cmd->add_option("--config", bench.config)->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", bench.out, "CSV output")->required();
  bench_cmd->add_flag("--timing", bench.timing, "Record runtime_ms (output is then not reproducible)");
  bench_cmd->add_option("--errmaps", bench.errmaps, "Directory for per-image error maps");
  bench_cmd->add_option("--max-err", bench.max_err, "Error mapped to white");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit lambdas and reconstruction head");
  fit_cmd->add_option("--manifest", fit.manifest)->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--mode", fit.mode)->check(CLI::IsMember({"lambda", "head", "both"}));
  fit_cmd->add_option("--scale", fit.scale)->required()->check(CLI::IsMember({2, 4, 8, 16}));
  fit_cmd->add_option("--out", fit.out, "Parameter file output")->required();
  fit_cmd->add_option("--split", fit.split, "Manifest split to fit on")
      ->check(CLI::IsMember({"train", "val", "test", "all"}));
  fit_cmd->add_option("--bank", fit.bank)->check(CLI::IsMember({"default8", "identity1"}));
  fit_cmd->add_option("--gamma", fit.gamma, "Ridge penalty of the head");
  fit_cmd->add_option("--sweeps", fit.search.sweeps);
  fit_cmd->add_option("--grid-points", fit.search.grid_points);
  fit.guide.add_to(fit_cmd);

  std::string dct_in, dct_out;
  bool dct_inverse = false;
  auto* dct_cmd = app.add_subcommand("dct", "Orthonormal 2-D DCT of a grayscale image");
  dct_cmd->add_option("--in", dct_in)->required()->check(CLI::ExistingFile);
  dct_cmd->add_option("--out", dct_out, "PFM output")->required();
  dct_cmd->add_flag("--inverse", dct_inverse);

  CLI11_PARSE(app, argc, argv);

  try {
    parallel::set_threads(threads ? *threads : parallel::threads_from_environment());
    if (*sr_cmd) return run_sr(sr);
    if (*bench_cmd) return run_bench_cmd(bench);
    if (*fit_cmd) return run_fit(fit);
    if (*dct_cmd) return run_dct(dct_in, dct_out, dct_inverse);
  } catch (const std::exception& e) {
    std::cerr << "gdsr: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
