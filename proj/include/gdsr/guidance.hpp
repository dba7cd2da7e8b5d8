#pragma once

#include "gdsr/image.hpp"
#include "gdsr/spectral.hpp"

namespace gdsr {

/// BT.601 luma: 0.299 r + 0.587 g + 0.114 b.
Image2D luminance(const RgbImage& rgb);

enum class EdgeMode { none, hard, soft };

/// Edge selection on the guide Laplacian magnitude g = |L(guide)|.
///  none: all ones
///  hard: 1 where g >= tau and g > 0, else 0
///  soft: 1 / (1 + exp(-alpha (g - tau)))
/// where tau is the nearest-rank q-quantile of g over the image.
struct EdgeWeightConfig {
  EdgeMode mode = EdgeMode::hard;
  double tau_quantile = 0.9;
  double alpha = 50.0;

  /// Throws InvalidArgument unless 0 < q < 1 and alpha > 0.
  void validate() const;
};

/// Nearest-rank quantile: the ceil(q n)-th smallest value (1-based).
double nearest_rank_quantile(std::span<const double> values, double q);

Image2D edge_weight(const Image2D& guide, const EdgeWeightConfig& cfg, const LaplacianKernel& kernel = {});

/// edge_weight on each channel independently; channels run in parallel.
MultiChannelImage multichannel_edge_weight(const MultiChannelImage& guide_features, const EdgeWeightConfig& cfg,
                                           const LaplacianKernel& kernel = {});

}  // namespace gdsr
