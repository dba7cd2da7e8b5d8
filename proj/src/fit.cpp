#include "gdsr/fit.hpp"

#include <cmath>
#include <limits>

#include "gdsr/dct.hpp"
#include "gdsr/pipeline.hpp"

namespace gdsr {

LambdaVector LambdaVector::from_values(std::span<const double> values) {
  std::vector<double> logs;
  logs.reserve(values.size());
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("LambdaVector: values must be positive and finite");
    logs.push_back(std::log(v));
  }
  return from_logs(std::move(logs));
}

LambdaVector LambdaVector::from_logs(std::vector<double> logs) {
  for (double l : logs)
    if (!std::isfinite(l)) throw InvalidArgument("LambdaVector: log value is not finite");
  LambdaVector v;
  v.logs_ = std::move(logs);
  return v;
}

LambdaVector LambdaVector::constant(std::size_t channels, double value) {
  return from_values(std::vector<double>(channels, value));
}

double LambdaVector::value(std::size_t c) const { return std::exp(logs_.at(c)); }

void LambdaVector::set_log(std::size_t c, double log_value) {
  if (!std::isfinite(log_value)) throw InvalidArgument("LambdaVector: log value is not finite");
  logs_.at(c) = log_value;
}

std::vector<double> LambdaVector::values() const {
  std::vector<double> out(logs_.size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = std::exp(logs_[c]);
  return out;
}

void SearchOptions::validate() const {
  if (sweeps < 1) throw InvalidArgument("SearchOptions: sweeps must be >= 1");
  if (!(log_max > log_min)) throw InvalidArgument("SearchOptions: empty log-lambda interval");
  if (!(log_tol > 0.0)) throw InvalidArgument("SearchOptions: log_tol must be positive");
}

LineSearchResult golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                         int grid_points, double tol) {
  LineSearchResult best{lo, std::numeric_limits<double>::infinity(), 0};
  auto eval = [&](double x) {
    const double v = f(x);
    ++best.evaluations;
    if (v < best.value) {
      best.value = v;
      best.x = x;
    }
    return v;
  };

  double a = lo;
  double b = hi;
  if (grid_points >= 3) {
    const double step = (hi - lo) / (grid_points - 1);
    int arg = 0;
    double arg_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
      const double v = eval(lo + step * i);
      if (v < arg_value) {
        arg_value = v;
        arg = i;
      }
    }
    a = lo + step * std::max(arg - 1, 0);
    b = lo + step * std::min(arg + 1, grid_points - 1);
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  return best;
}

double pooled_rmse(std::span<const Image2D> predictions, std::span<const Image2D> targets) {
  if (predictions.size() != targets.size() || predictions.empty())
    throw DimensionError("pooled_rmse: prediction/target count mismatch");
  double sse = 0.0;
  std::size_t count = 0;
  for (std::size_t p = 0; p < predictions.size(); ++p) {
    require_same_shape(predictions[p], targets[p], "pooled_rmse");
    auto x = predictions[p].samples();
    auto y = targets[p].samples();
    for (std::size_t i = 0; i < x.size(); ++i) sse += (x[i] - y[i]) * (x[i] - y[i]);
    count += x.size();
  }
  return std::sqrt(sse / static_cast<double>(count));
}

namespace {

void check_pairs(std::span<const TrainPair> pairs) {
  if (pairs.empty()) throw InvalidArgument("fit: empty training set");
  for (const auto& p : pairs) {
    require_same_shape(p.upsampled, p.guide, "fit");
    require_same_shape(p.upsampled, p.target, "fit");
  }
}

// DCT-domain pieces of one channel of one training pair. By linearity
//   DCT(E) = DCT(depth) + lambda * DCT(L(L(guide) o W)),
// so a new lambda costs one inverse transform.
struct ChannelSpectra {
  Image2D depth;
  Image2D guide;
};

Image2D solve_from_spectra(const ChannelSpectra& s, const Image2D& symbol, double lambda) {
  Image2D coeffs(s.depth.height(), s.depth.width());
  auto out = coeffs.samples();
  auto d = s.depth.samples();
  auto g = s.guide.samples();
  auto k = symbol.samples();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (d[i] + lambda * g[i]) / (1.0 + lambda * k[i] * k[i]);
  return dct2_inverse(coeffs);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sum(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

class FeatureSearchState {
 public:
  FeatureSearchState(std::span<const TrainPair> pairs, const FilterBank& bank, const EdgeWeightConfig& edge,
                     SymbolMode symbol, double gamma, const LaplacianKernel& kernel, const LambdaVector& start)
      : pairs_(pairs), channels_(bank.size()), gamma_(gamma) {
    const std::size_t k = channels_ + 1;
    spectra_.resize(pairs.size());
    current_.resize(pairs.size());
    symbols_.resize(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto& pair = pairs[p];
      const MultiChannelImage depth = extract(pair.upsampled, bank, FeatureSide::depth);
      const MultiChannelImage guide = extract(pair.guide, bank, FeatureSide::guide);
      const MultiChannelImage weights = multichannel_edge_weight(guide, edge, kernel);
      symbols_[p] = make_symbol(symbol, kernel, pair.upsampled.height(), pair.upsampled.width()).values;
      spectra_[p].resize(channels_);
      current_[p].resize(channels_);
      for (std::size_t c = 0; c < channels_; ++c) {
        const Image2D masked = elementwise_combine(laplacian_apply(guide[c], kernel), weights[c], BinaryOp::mul);
        spectra_[p][c] = {dct2_forward(depth[c]), dct2_forward(laplacian_apply(masked, kernel))};
        current_[p][c] = solve_from_spectra(spectra_[p][c], symbols_[p], start.value(c));
      }
      pixels_ += pair.target.size();
    }
    gram_.assign(k * k, 0.0);
    moment_.assign(k, 0.0);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto y = pairs[p].target.samples();
      for (std::size_t a = 0; a < channels_; ++a) {
        const auto ha = current_[p][a].samples();
        for (std::size_t b = a; b < channels_; ++b) gram_[a * k + b] += dot(ha, current_[p][b].samples());
        gram_[a * k + channels_] += sum(ha);
        moment_[a] += dot(ha, y);
      }
      moment_[channels_] += sum(y);
    }
    gram_[channels_ * k + channels_] = static_cast<double>(pixels_);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < a; ++b) gram_[a * k + b] = gram_[b * k + a];
  }

  struct Candidate {
    std::vector<Image2D> channel;  // per pair
    std::vector<double> gram;
    std::vector<double> moment;
    ReconstructionHead head;
    double rmse = 0.0;
  };

  Candidate evaluate(std::size_t c, double lambda) const {
    const std::size_t k = channels_ + 1;
    Candidate cand;
    cand.channel.resize(pairs_.size());
    std::vector<std::vector<double>> row(pairs_.size(), std::vector<double>(k + 1, 0.0));
    const auto np = static_cast<std::ptrdiff_t>(pairs_.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t pi = 0; pi < np; ++pi) {
      const auto p = static_cast<std::size_t>(pi);
      cand.channel[p] = solve_from_spectra(spectra_[p][c], symbols_[p], lambda);
      const auto h = cand.channel[p].samples();
      for (std::size_t a = 0; a < channels_; ++a)
        row[p][a] = dot(h, a == c ? h : current_[p][a].samples());
      row[p][channels_] = sum(h);
      row[p][k] = dot(h, pairs_[p].target.samples());
    }
    cand.gram = gram_;
    cand.moment = moment_;
    for (std::size_t a = 0; a < k; ++a) {
      double v = 0.0;
      for (std::size_t p = 0; p < pairs_.size(); ++p) v += row[p][a];
      cand.gram[c * k + a] = v;
      cand.gram[a * k + c] = v;
    }
    double m = 0.0;
    for (std::size_t p = 0; p < pairs_.size(); ++p) m += row[p][k];
    cand.moment[c] = m;
    cand.head = solve_head_normal_equations(cand.gram, cand.moment, gamma_);

    std::vector<double> sse(pairs_.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t pi = 0; pi < np; ++pi) {
      const auto p = static_cast<std::size_t>(pi);
      const auto y = pairs_[p].target.samples();
      std::vector<double> pred(y.size(), cand.head.bias);
      for (std::size_t a = 0; a < channels_; ++a) {
        const auto h = a == c ? cand.channel[p].samples() : current_[p][a].samples();
        const double w = cand.head.weights[a];
        for (std::size_t i = 0; i < pred.size(); ++i) pred[i] += w * h[i];
      }
      double s = 0.0;
      for (std::size_t i = 0; i < pred.size(); ++i) s += (pred[i] - y[i]) * (pred[i] - y[i]);
      sse[p] = s;
    }
    double total = 0.0;
    for (double s : sse) total += s;
    cand.rmse = std::sqrt(total / static_cast<double>(pixels_));
    return cand;
  }

  void commit(std::size_t c, Candidate cand) {
    for (std::size_t p = 0; p < pairs_.size(); ++p) current_[p][c] = std::move(cand.channel[p]);
    gram_ = std::move(cand.gram);
    moment_ = std::move(cand.moment);
  }

 private:
  std::span<const TrainPair> pairs_;
  std::size_t channels_;
  double gamma_;
  std::size_t pixels_ = 0;
  std::vector<std::vector<ChannelSpectra>> spectra_;
  std::vector<std::vector<Image2D>> current_;
  std::vector<Image2D> symbols_;
  std::vector<double> gram_;
  std::vector<double> moment_;
};

}  // namespace

LambdaFit fit_lambda(std::span<const TrainPair> pairs, const FilterBank& bank, const EdgeWeightConfig& edge,
                     SymbolMode symbol, double head_gamma, const SearchOptions& search,
                     const LaplacianKernel& kernel) {
  check_pairs(pairs);
  search.validate();
  edge.validate();
  LambdaFit fit;
  fit.lambdas = LambdaVector::from_logs(std::vector<double>(bank.size(), kInitialLogLambda));
  FeatureSearchState state(pairs, bank, edge, symbol, head_gamma, kernel, fit.lambdas);

  // Channel 0 re-evaluated at its current value gives the starting objective.
  auto start = state.evaluate(0, fit.lambdas.value(0));
  double current = start.rmse;
  fit.head = start.head;
  fit.trace.push_back(current);

  for (int sweep = 0; sweep < search.sweeps; ++sweep) {
    ++fit.sweeps_run;
    bool accepted = false;
    for (std::size_t c = 0; c < bank.size(); ++c) {
      const auto best = golden_section_minimize(
          [&](double x) { return state.evaluate(c, std::exp(x)).rmse; }, search.log_min, search.log_max,
          search.grid_points, search.log_tol);
      if (best.value < current) {
        auto cand = state.evaluate(c, std::exp(best.x));
        fit.head = cand.head;
        current = cand.rmse;
        state.commit(c, std::move(cand));
        fit.lambdas.set_log(c, best.x);
        fit.trace.push_back(current);
        accepted = true;
      }
    }
    if (!accepted) break;
  }
  return fit;
}

ReconstructionHead fit_head_fixed_lambdas(std::span<const TrainPair> pairs, const FilterBank& bank,
                                          const EdgeWeightConfig& edge, SymbolMode symbol,
                                          std::span<const double> lambdas, double head_gamma,
                                          const LaplacianKernel& kernel) {
  check_pairs(pairs);
  std::vector<MultiChannelImage> features;
  std::vector<Image2D> targets;
  for (const auto& pair : pairs) {
    const MultiChannelImage depth = extract(pair.upsampled, bank, FeatureSide::depth);
    const MultiChannelImage guide = extract(pair.guide, bank, FeatureSide::guide);
    const MultiChannelImage weights = multichannel_edge_weight(guide, edge, kernel);
    const SpectralSymbol sym = make_symbol(symbol, kernel, pair.upsampled.height(), pair.upsampled.width());
    features.push_back(channel_solve(depth, guide, weights, lambdas, sym, kernel));
    targets.push_back(pair.target);
  }
  return fit_head(features, targets, head_gamma);
}

ImageLambdaFit fit_image_lambda(std::span<const TrainPair> pairs, const EdgeWeightConfig& edge, SymbolMode symbol,
                                const SearchOptions& search, const LaplacianKernel& kernel) {
  check_pairs(pairs);
  search.validate();
  edge.validate();
  std::vector<ChannelSpectra> spectra(pairs.size());
  std::vector<Image2D> symbols(pairs.size());
  std::size_t pixels = 0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& pair = pairs[p];
    const Image2D masked = masked_guide_laplacian(pair.guide, edge, kernel);
    spectra[p] = {dct2_forward(pair.upsampled), dct2_forward(laplacian_apply(masked, kernel))};
    symbols[p] = make_symbol(symbol, kernel, pair.upsampled.height(), pair.upsampled.width()).values;
    pixels += pair.target.size();
  }
  auto rmse_at = [&](double lambda) {
    std::vector<double> sse(pairs.size(), 0.0);
    const auto np = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t pi = 0; pi < np; ++pi) {
      const auto p = static_cast<std::size_t>(pi);
      const Image2D h = lambda == 0.0 ? pairs[p].upsampled : solve_from_spectra(spectra[p], symbols[p], lambda);
      auto x = h.samples();
      auto y = pairs[p].target.samples();
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
      sse[p] = s;
    }
    double total = 0.0;
    for (double s : sse) total += s;
    return std::sqrt(total / static_cast<double>(pixels));
  };

  ImageLambdaFit fit;
  fit.lambda = std::exp(kInitialLogLambda);
  fit.rmse = rmse_at(fit.lambda);
  fit.trace.push_back(fit.rmse);
  const auto best = golden_section_minimize([&](double x) { return rmse_at(std::exp(x)); }, search.log_min,
                                            search.log_max, search.grid_points, search.log_tol);
  if (best.value < fit.rmse) {
    fit.lambda = std::exp(best.x);
    fit.rmse = best.value;
    fit.trace.push_back(fit.rmse);
  }
  fit.rmse_at_zero = rmse_at(0.0);
  if (fit.rmse_at_zero < fit.rmse) {
    fit.lambda = 0.0;
    fit.rmse = fit.rmse_at_zero;
    fit.trace.push_back(fit.rmse);
  }
  return fit;
}

}  // namespace gdsr
