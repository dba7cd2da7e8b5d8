#include "gdsr/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gdsr {

Image2D luminance(const RgbImage& rgb) {
  Image2D out(rgb.height(), rgb.width());
  auto r = rgb.red().samples();
  auto g = rgb.green().samples();
  auto b = rgb.blue().samples();
  auto y = out.samples();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::clamp(0.299 * r[i] + (0.587 * g[i] + 0.114 * b[i]), 0.0, 1.0);
  return out;
}

void EdgeWeightConfig::validate() const {
  if (!(tau_quantile > 0.0 && tau_quantile < 1.0))
    throw InvalidArgument("EdgeWeightConfig: tau quantile must lie in (0, 1)");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("EdgeWeightConfig: alpha must be positive");
}

double nearest_rank_quantile(std::span<const double> values, double q) {
  if (values.empty()) throw InvalidArgument("nearest_rank_quantile: empty input");
  std::vector<double> v(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  rank = std::clamp<std::size_t>(rank, 1, v.size());
  auto nth = v.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(v.begin(), nth, v.end());
  return *nth;
}

Image2D edge_weight(const Image2D& guide, const EdgeWeightConfig& cfg, const LaplacianKernel& kernel) {
  cfg.validate();
  if (cfg.mode == EdgeMode::none) return Image2D(guide.height(), guide.width(), 1.0);
  Image2D mag = laplacian_apply(guide, kernel);
  for (double& v : mag.samples()) v = std::abs(v);
  const double tau = nearest_rank_quantile(mag.samples(), cfg.tau_quantile);
  Image2D w(guide.height(), guide.width());
  auto g = mag.samples();
  auto out = w.samples();
  if (cfg.mode == EdgeMode::hard) {
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = (g[i] >= tau && g[i] > 0.0) ? 1.0 : 0.0;
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-cfg.alpha * (g[i] - tau)));
  }
  return w;
}

MultiChannelImage multichannel_edge_weight(const MultiChannelImage& guide_features, const EdgeWeightConfig& cfg,
                                           const LaplacianKernel& kernel) {
  cfg.validate();
  std::vector<Image2D> weights(guide_features.channel_count());
  const auto channels = static_cast<std::ptrdiff_t>(weights.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < channels; ++c)
    weights[static_cast<std::size_t>(c)] = edge_weight(guide_features[static_cast<std::size_t>(c)], cfg, kernel);
  return MultiChannelImage(std::move(weights));
}

}  // namespace gdsr
