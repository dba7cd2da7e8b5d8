#include "gdsr/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "gdsr/netpbm.hpp"

namespace gdsr {

using nlohmann::json;

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<DatasetEntry> DatasetManifest::select(const std::string& split) const {
  if (split == "all") return entries;
  std::vector<DatasetEntry> out;
  for (const auto& e : entries)
    if (e.split == split) out.push_back(e);
  return out;
}

namespace {

template <typename T>
T require(const json& doc, const char* key, const char* where) {
  if (!doc.contains(key)) throw FormatError(std::string(where) + ": missing field '" + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string(where) + ": field '" + key + "' has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

json parse_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

json edge_json(const EdgeWeightConfig& e) {
  return json{{"edge", edge_mode_label(e.mode)}, {"tau_q", e.tau_quantile}, {"alpha", e.alpha}};
}

EdgeWeightConfig edge_from_json(const json& doc, EdgeWeightConfig base = {}) {
  if (doc.contains("edge")) base.mode = parse_edge_mode(doc.at("edge").get<std::string>());
  if (doc.contains("tau_q")) base.tau_quantile = doc.at("tau_q").get<double>();
  if (doc.contains("alpha")) base.alpha = doc.at("alpha").get<double>();
  base.validate();
  return base;
}

}  // namespace

DatasetManifest parse_manifest(const json& doc, const std::filesystem::path& base_dir, bool check_paths) {
  DatasetManifest m;
  m.name = require<std::string>(doc, "name", "manifest");
  if (!doc.contains("entries") || !doc.at("entries").is_array())
    throw FormatError("manifest: 'entries' must be an array");
  std::set<std::string> ids;
  for (const auto& e : doc.at("entries")) {
    DatasetEntry entry;
    entry.id = require<std::string>(e, "id", "manifest entry");
    entry.rgb_path = resolve(base_dir, require<std::string>(e, "rgb_path", "manifest entry"));
    entry.depth_path = resolve(base_dir, require<std::string>(e, "depth_path", "manifest entry"));
    entry.depth_unit_scale = e.value("depth_unit_scale", 1.0);
    entry.split = e.value("split", std::string("test"));
    if (entry.split != "train" && entry.split != "val" && entry.split != "test")
      throw FormatError("manifest entry '" + entry.id + "': split must be train, val or test");
    if (!(entry.depth_unit_scale > 0.0))
      throw FormatError("manifest entry '" + entry.id + "': depth_unit_scale must be positive");
    if (!ids.insert(entry.id).second) throw FormatError("manifest: duplicate id '" + entry.id + "'");
    if (check_paths) {
      for (const auto& p : {entry.rgb_path, entry.depth_path})
        if (!std::filesystem::exists(p))
          throw FormatError("manifest entry '" + entry.id + "': missing file " + p.string());
    }
    m.entries.push_back(std::move(entry));
  }
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(parse_json_file(path), path.parent_path());
}

std::string method_label(Method m) {
  switch (m) {
    case Method::bicubic:
      return "bicubic";
    case Method::image_domain:
      return "image";
    case Method::feature_domain:
      return "feature";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "bicubic") return Method::bicubic;
  if (s == "image" || s == "image_domain") return Method::image_domain;
  if (s == "feature" || s == "feature_domain") return Method::feature_domain;
  throw InvalidArgument("unknown method '" + s + "'");
}

std::string edge_mode_label(EdgeMode m) {
  switch (m) {
    case EdgeMode::none:
      return "none";
    case EdgeMode::hard:
      return "hard";
    case EdgeMode::soft:
      return "soft";
  }
  return "?";
}

EdgeMode parse_edge_mode(const std::string& s) {
  if (s == "none") return EdgeMode::none;
  if (s == "hard") return EdgeMode::hard;
  if (s == "soft") return EdgeMode::soft;
  throw InvalidArgument("unknown edge mode '" + s + "'");
}

std::string symbol_label(SymbolMode m) { return m == SymbolMode::derived ? "derived" : "paper"; }

SymbolMode parse_symbol_mode(const std::string& s) {
  if (s == "derived") return SymbolMode::derived;
  if (s == "paper") return SymbolMode::paper;
  throw InvalidArgument("unknown symbol mode '" + s + "'");
}

std::string ModelParams::fit_config_hash() const {
  json doc = edge_json(edge);
  doc["bank"] = bank;
  doc["scale"] = scale;
  doc["symbol"] = symbol_label(symbol);
  doc["gamma"] = gamma;
  return fnv1a_hex(doc.dump());
}

FeatureDomainModel ModelParams::feature_model() const {
  FeatureDomainModel m;
  m.bank = bank_by_id(bank);
  m.lambdas = lambdas;
  m.head.weights = head_weights;
  m.head.bias = head_bias;
  m.head.gamma = gamma;
  m.edge = edge;
  m.symbol = symbol;
  m.validate();
  return m;
}

json to_json(const ModelParams& p) {
  json doc = edge_json(p.edge);
  doc["bank"] = p.bank;
  doc["scale"] = p.scale;
  doc["lambdas"] = p.lambdas;
  doc["head_weights"] = p.head_weights;
  doc["head_bias"] = p.head_bias;
  doc["gamma"] = p.gamma;
  doc["symbol"] = symbol_label(p.symbol);
  doc["config_hash"] = p.config_hash.empty() ? p.fit_config_hash() : p.config_hash;
  if (p.image_lambda) doc["image_lambda"] = *p.image_lambda;
  return doc;
}

ModelParams params_from_json(const json& doc) {
  ModelParams p;
  try {
    p.bank = doc.value("bank", std::string("default8"));
    p.scale = doc.value("scale", 8);
    p.lambdas = doc.value("lambdas", std::vector<double>{});
    p.head_weights = doc.value("head_weights", std::vector<double>{});
    p.head_bias = doc.value("head_bias", 0.0);
    p.gamma = doc.value("gamma", 0.0);
    p.edge = edge_from_json(doc);
    p.symbol = parse_symbol_mode(doc.value("symbol", std::string("derived")));
    if (doc.contains("image_lambda")) p.image_lambda = doc.at("image_lambda").get<double>();
    p.config_hash = doc.value("config_hash", std::string());
  } catch (const json::exception& e) {
    throw FormatError(std::string("parameter file: ") + e.what());
  }
  ScaleFactor{p.scale};
  if (p.lambdas.size() != p.head_weights.size())
    throw FormatError("parameter file: lambdas and head_weights differ in length");
  if (p.image_lambda) validate_lambda(*p.image_lambda);
  return p;
}

void write_params(const ModelParams& p, const std::filesystem::path& path) {
  io::write_file(path, to_json(p).dump(2) + "\n");
}

ModelParams read_params(const std::filesystem::path& path) { return params_from_json(parse_json_file(path)); }

json PipelineConfig::canonical() const {
  json doc = edge_json(edge);
  doc["method"] = method_label(method);
  doc["symbol"] = symbol_label(symbol);
  doc["crop_border"] = crop_border;
  doc["antialias"] = antialias;
  if (lambda) doc["lambda"] = *lambda;
  if (!params.empty()) {
    json ps = json::object();
    for (const auto& [scale, p] : params) ps[std::to_string(scale)] = to_json(p);
    doc["params"] = ps;
  }
  return doc;
}

std::string PipelineConfig::hash() const { return fnv1a_hex(canonical().dump()); }

void PipelineConfig::validate() const {
  edge.validate();
  if (lambda) validate_lambda(*lambda);
  if (crop_border < 0) throw InvalidArgument("crop_border must be >= 0");
  if (method == Method::feature_domain && params.empty())
    throw InvalidArgument("feature method requires a parameter file");
  if (method == Method::image_domain && !lambda && params.empty())
    throw InvalidArgument("image method requires a lambda or a parameter file with image_lambda");
}

PipelineConfig parse_pipeline_config(const json& doc, const std::filesystem::path& base_dir) {
  PipelineConfig cfg;
  try {
    cfg.method = parse_method(require<std::string>(doc, "method", "pipeline config"));
    if (doc.contains("lambda")) cfg.lambda = doc.at("lambda").get<double>();
    cfg.edge = edge_from_json(doc);
    cfg.symbol = parse_symbol_mode(doc.value("symbol", std::string("derived")));
    cfg.crop_border = doc.value("crop_border", 0);
    cfg.antialias = doc.value("antialias", true);
    if (doc.contains("params")) {
      const json& p = doc.at("params");
      if (p.is_string()) {
        ModelParams mp = read_params(resolve(base_dir, p.get<std::string>()));
        cfg.params[mp.scale] = std::move(mp);
      } else if (p.is_object()) {
        for (const auto& [key, file] : p.items()) {
          ModelParams mp = read_params(resolve(base_dir, file.get<std::string>()));
          if (std::to_string(mp.scale) != key)
            throw FormatError("pipeline config: parameter file for scale " + key + " was fitted at scale " +
                              std::to_string(mp.scale));
          cfg.params[mp.scale] = std::move(mp);
        }
      } else {
        throw FormatError("pipeline config: 'params' must be a file name or a scale -> file map");
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("pipeline config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::vector<PipelineConfig> load_pipeline_configs(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  const json* list = &doc;
  if (doc.is_object() && doc.contains("configs")) list = &doc.at("configs");
  std::vector<PipelineConfig> out;
  if (list->is_array()) {
    for (const auto& c : *list) out.push_back(parse_pipeline_config(c, path.parent_path()));
  } else {
    out.push_back(parse_pipeline_config(*list, path.parent_path()));
  }
  if (out.empty()) throw FormatError(path.string() + ": no pipeline configs");
  return out;
}

double rmse(const DepthMap& pred, const DepthMap& gt, int crop_border) {
  require_same_shape(pred.data(), gt.data(), "rmse");
  if (crop_border < 0) throw InvalidArgument("rmse: crop border must be >= 0");
  const auto b = static_cast<std::size_t>(crop_border);
  if (2 * b >= std::min(gt.height(), gt.width())) throw InvalidArgument("rmse: crop border leaves no pixels");
  double sse = 0.0;
  std::size_t count = 0;
  for (std::size_t r = b; r < gt.height() - b; ++r) {
    const auto p = pred.data().row(r);
    const auto g = gt.data().row(r);
    for (std::size_t c = b; c < gt.width() - b; ++c) {
      const double d = p[c] * pred.unit_scale() - g[c] * gt.unit_scale();
      sse += d * d;
      ++count;
    }
  }
  return std::sqrt(sse / static_cast<double>(count));
}

namespace {

const ModelParams& params_for_scale(const PipelineConfig& cfg, ScaleFactor s) {
  auto it = cfg.params.find(s.value());
  if (it == cfg.params.end())
    throw InvalidArgument("no parameter set fitted for scale " + std::to_string(s.value()));
  return it->second;
}

Image2D clamp_nonnegative(Image2D img) {
  for (double& v : img.samples()) v = std::max(v, 0.0);
  return img;
}

}  // namespace

Image2D super_resolve(const Image2D& upsampled, const Image2D& guide, const PipelineConfig& cfg, ScaleFactor s) {
  switch (cfg.method) {
    case Method::bicubic:
      return upsampled;
    case Method::image_domain: {
      ImageDomainConfig ic;
      if (cfg.lambda) {
        ic.lambda = *cfg.lambda;
        ic.edge = cfg.edge;
        ic.symbol = cfg.symbol;
      } else {
        const ModelParams& p = params_for_scale(cfg, s);
        if (!p.image_lambda) throw InvalidArgument("parameter file has no image_lambda");
        ic.lambda = *p.image_lambda;
        ic.edge = p.edge;
        ic.symbol = p.symbol;
      }
      return image_domain_sr(upsampled, guide, ic);
    }
    case Method::feature_domain:
      return feature_domain_sr(upsampled, guide, params_for_scale(cfg, s).feature_model());
  }
  throw InvalidArgument("unknown method");
}

RunOutput run_image(const DatasetEntry& entry, const std::string& dataset, const PipelineConfig& cfg,
                    ScaleFactor s) {
  try {
    const DepthMap full = io::load_depth(entry.depth_path, entry.depth_unit_scale);
    const RgbImage rgb = io::load_rgb(entry.rgb_path);
    if (rgb.height() != full.height() || rgb.width() != full.width())
      throw DimensionError("rgb " + shape_string(rgb.red()) + " and depth " + shape_string(full.data()) +
                           " sizes differ");
    DepthMap gt(crop_to_multiple(full.data(), s), full.unit_scale());
    const Image2D guide = luminance(rgb.crop(gt.height(), gt.width()));

    const auto t0 = std::chrono::steady_clock::now();
    const Degraded d = degrade(gt, s, cfg.antialias);
    DepthMap pred(clamp_nonnegative(super_resolve(d.up.data(), guide, cfg, s)), gt.unit_scale());
    const auto t1 = std::chrono::steady_clock::now();

    BenchRecord rec;
    rec.dataset = dataset;
    rec.image_id = entry.id;
    rec.scale = s.value();
    rec.method = method_label(cfg.method);
    rec.config_hash = cfg.hash();
    rec.rmse = rmse(pred, gt, cfg.crop_border);
    rec.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return {std::move(pred), std::move(gt), std::move(rec)};
  } catch (const Error& e) {
    throw Error("entry '" + entry.id + "': " + e.what());
  }
}

std::vector<BenchRecord> run_bench(const DatasetManifest& manifest, const std::vector<int>& scales,
                                   const std::vector<PipelineConfig>& configs, const BenchOptions& options) {
  if (manifest.entries.empty()) throw InvalidArgument("run_bench: empty manifest");
  if (scales.empty() || configs.empty()) throw InvalidArgument("run_bench: no scales or configs");
  std::vector<ScaleFactor> factors;
  for (int s : scales) factors.emplace_back(s);
  std::vector<std::string> hashes;
  for (const auto& c : configs) hashes.push_back(c.hash());

  const std::size_t per_entry = factors.size() * configs.size();
  std::vector<BenchRecord> detail(manifest.entries.size() * per_entry);
  const auto tasks = static_cast<std::ptrdiff_t>(detail.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < tasks; ++t) {
    const auto idx = static_cast<std::size_t>(t);
    const auto& entry = manifest.entries[idx / per_entry];
    const std::size_t si = (idx % per_entry) / configs.size();
    const std::size_t ci = idx % configs.size();
    BenchRecord& rec = detail[idx];
    try {
      RunOutput out = run_image(entry, manifest.name, configs[ci], factors[si]);
      rec = std::move(out.record);
      if (!options.record_timing) rec.runtime_ms = 0.0;
      if (options.error_map_dir) {
        const auto name = manifest.name + "_" + entry.id + "_x" + std::to_string(factors[si].value()) + "_" +
                          hashes[ci] + ".pgm";
        io::save_error_map(out.pred, out.gt, *options.error_map_dir / name, options.error_map_max);
      }
    } catch (const std::exception& e) {
      rec = BenchRecord{manifest.name, entry.id,  factors[si].value(), method_label(configs[ci].method),
                        hashes[ci],    0.0,       0.0,                 std::string(e.what())};
    }
  }

  std::vector<BenchRecord> out = detail;
  for (std::size_t si = 0; si < factors.size(); ++si)
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
      BenchRecord agg{manifest.name, "__mean__", factors[si].value(), method_label(configs[ci].method),
                      hashes[ci],    0.0,        0.0,                 std::nullopt};
      double total = 0.0;
      double time = 0.0;
      std::size_t ok = 0;
      for (std::size_t e = 0; e < manifest.entries.size(); ++e) {
        const BenchRecord& r = detail[e * per_entry + si * configs.size() + ci];
        if (r.error) continue;
        total += r.rmse;
        time += r.runtime_ms;
        ++ok;
      }
      if (ok == 0) {
        agg.error = "no successful entries";
      } else {
        agg.rmse = total / static_cast<double>(ok);
        agg.runtime_ms = time / static_cast<double>(ok);
      }
      out.push_back(std::move(agg));
    }
  return out;
}

std::string format_csv(const std::vector<BenchRecord>& records) {
  std::string out = std::string(kCsvHeader) + "\n";
  char num[64];
  for (const auto& r : records) {
    out += r.dataset + "," + r.image_id + "," + std::to_string(r.scale) + "," + r.method + "," + r.config_hash + ",";
    if (r.error) {
      out += "ERROR,0\n";
      continue;
    }
    std::snprintf(num, sizeof num, "%.17g", r.rmse);
    out += num;
    out += ",";
    std::snprintf(num, sizeof num, "%.17g", r.runtime_ms);
    out += num;
    out += "\n";
  }
  return out;
}

std::vector<TrainPair> make_train_pairs(const std::vector<DatasetEntry>& entries, ScaleFactor s, bool antialias) {
  if (entries.empty()) throw InvalidArgument("make_train_pairs: no entries");
  std::vector<TrainPair> pairs(entries.size());
  const auto n = static_cast<std::ptrdiff_t>(entries.size());
  std::vector<std::string> errors(entries.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& entry = entries[static_cast<std::size_t>(i)];
    try {
      const DepthMap full = io::load_depth(entry.depth_path, entry.depth_unit_scale);
      const RgbImage rgb = io::load_rgb(entry.rgb_path);
      if (rgb.height() != full.height() || rgb.width() != full.width())
        throw DimensionError("rgb and depth sizes differ");
      DepthMap gt(crop_to_multiple(full.data(), s), full.unit_scale());
      const Degraded d = degrade(gt, s, antialias);
      pairs[static_cast<std::size_t>(i)] = {d.up.data(), luminance(rgb.crop(gt.height(), gt.width())), gt.data()};
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = "entry '" + entry.id + "': " + e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw Error(e);
  return pairs;
}

}  // namespace gdsr
