#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gdsr/fit.hpp"
#include "gdsr/guidance.hpp"
#include "gdsr/image.hpp"
#include "gdsr/pipeline.hpp"
#include "gdsr/resample.hpp"

namespace gdsr {

struct DatasetEntry {
  std::string id;
  std::filesystem::path rgb_path;
  std::filesystem::path depth_path;
  double depth_unit_scale = 1.0;
  std::string split = "test";  ///< train, val or test
};

struct DatasetManifest {
  std::string name;
  std::vector<DatasetEntry> entries;

  /// Entries whose split equals `split`; "all" selects everything.
  std::vector<DatasetEntry> select(const std::string& split) const;
};

/// Parses the manifest JSON. Relative paths resolve against base_dir. When
/// check_paths is set, missing files throw. Duplicate ids always throw.
DatasetManifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                               bool check_paths = true);
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Fitted parameters for one (scale, bank, edge, symbol) configuration.
struct ModelParams {
  std::string bank = "default8";
  int scale = 8;
  std::vector<double> lambdas;
  std::vector<double> head_weights;
  double head_bias = 0.0;
  double gamma = 0.0;
  EdgeWeightConfig edge;
  SymbolMode symbol = SymbolMode::derived;
  std::optional<double> image_lambda;
  std::string config_hash;

  /// Hash of the fitting configuration (bank, scale, edge, symbol, gamma).
  std::string fit_config_hash() const;
  FeatureDomainModel feature_model() const;
};

nlohmann::json to_json(const ModelParams& p);
ModelParams params_from_json(const nlohmann::json& doc);
void write_params(const ModelParams& p, const std::filesystem::path& path);
ModelParams read_params(const std::filesystem::path& path);

enum class Method { bicubic, image_domain, feature_domain };

std::string method_label(Method m);
Method parse_method(const std::string& s);
std::string edge_mode_label(EdgeMode m);
EdgeMode parse_edge_mode(const std::string& s);
std::string symbol_label(SymbolMode m);
SymbolMode parse_symbol_mode(const std::string& s);

struct PipelineConfig {
  Method method = Method::bicubic;
  /// Image-domain lambda; when unset the image method takes image_lambda
  /// from the parameter set for the run's scale.
  std::optional<double> lambda;
  EdgeWeightConfig edge;
  SymbolMode symbol = SymbolMode::derived;
  int crop_border = 0;
  bool antialias = true;
  /// Parameter sets keyed by scale factor.
  std::map<int, ModelParams> params;

  nlohmann::json canonical() const;
  /// 16 hex digits of FNV-1a over canonical().dump().
  std::string hash() const;
  void validate() const;
};

/// Accepts {"method": ..., "lambda": ..., "edge": ..., "tau_q": ..., "alpha": ...,
/// "symbol": ..., "crop_border": ..., "antialias": ..., "params": "<file>" | {"8": "<file>"}}.
PipelineConfig parse_pipeline_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
/// A bench config file holds either one config object, an array of them, or
/// {"configs": [...]}.
std::vector<PipelineConfig> load_pipeline_configs(const std::filesystem::path& path);

struct BenchRecord {
  std::string dataset;
  std::string image_id;
  int scale = 0;
  std::string method;
  std::string config_hash;
  double rmse = 0.0;
  double runtime_ms = 0.0;
  std::optional<std::string> error;
};

/// sqrt(mean((pred - gt)^2)) in metric units (stored value * unit_scale),
/// excluding a border of b pixels. Requires 2b < min(M, N).
double rmse(const DepthMap& pred, const DepthMap& gt, int crop_border = 0);

struct RunOutput {
  DepthMap pred;
  DepthMap gt;  ///< ground truth after the protocol crop
  BenchRecord record;
};

/// Loads the entry, crops it to a multiple of s, degrades, super-resolves
/// with cfg.method and scores the result. Errors carry the entry id.
RunOutput run_image(const DatasetEntry& entry, const std::string& dataset, const PipelineConfig& cfg,
                    ScaleFactor s);

/// Super-resolves already loaded data: `upsampled` and `guide` on the HR grid.
Image2D super_resolve(const Image2D& upsampled, const Image2D& guide, const PipelineConfig& cfg, ScaleFactor s);

struct BenchOptions {
  bool record_timing = false;
  std::optional<std::filesystem::path> error_map_dir;
  double error_map_max = 10.0;
};

/// Detail rows in manifest x scales x configs order, followed by one
/// "__mean__" row per (scale, config). Failed entries become rows with an
/// error and are left out of the means. Entries run on parallel workers;
/// output order and bytes do not depend on the worker count.
std::vector<BenchRecord> run_bench(const DatasetManifest& manifest, const std::vector<int>& scales,
                                   const std::vector<PipelineConfig>& configs, const BenchOptions& options = {});

inline constexpr const char* kCsvHeader = "dataset,image_id,scale,method,config_hash,rmse,runtime_ms";

/// CSV text with kCsvHeader. Numbers use %.17g; failed rows carry "ERROR" as
/// rmse. runtime_ms is written as 0 unless timing was recorded.
std::string format_csv(const std::vector<BenchRecord>& records);

/// Builds training pairs (bicubic degradation at scale s) from manifest entries.
std::vector<TrainPair> make_train_pairs(const std::vector<DatasetEntry>& entries, ScaleFactor s,
                                        bool antialias = true);

/// 64-bit FNV-1a, formatted as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace gdsr
