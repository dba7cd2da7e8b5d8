#pragma once

#include <vector>

#include "gdsr/feature_bank.hpp"
#include "gdsr/guidance.hpp"
#include "gdsr/image.hpp"
#include "gdsr/spectral.hpp"

namespace gdsr {

struct ImageDomainConfig {
  double lambda = 1.0;
  EdgeWeightConfig edge;
  SymbolMode symbol = SymbolMode::derived;
  LaplacianKernel kernel;
};

/// Guide Laplacian masked by its edge weight: L(guide) o W(guide).
Image2D masked_guide_laplacian(const Image2D& guide, const EdgeWeightConfig& edge, const LaplacianKernel& kernel);

/// Single-channel closed-form solve: edge_weight -> build_rhs -> solve_screened.
Image2D image_domain_sr(const Image2D& upsampled, const Image2D& guide, const ImageDomainConfig& cfg);

struct FeatureDomainModel {
  FilterBank bank = default_bank();
  std::vector<double> lambdas;  ///< one per bank channel, >= 0
  ReconstructionHead head;
  EdgeWeightConfig edge;
  SymbolMode symbol = SymbolMode::derived;
  LaplacianKernel kernel;

  /// Throws when lambdas or head do not match the bank size.
  void validate() const;
};

/// extract (both sides) -> multichannel_edge_weight -> channel_solve -> apply_head.
Image2D feature_domain_sr(const Image2D& upsampled, const Image2D& guide, const FeatureDomainModel& model);

/// Multi-channel depth features after the spectral solve, before the head.
MultiChannelImage feature_domain_features(const Image2D& upsampled, const Image2D& guide,
                                          const FeatureDomainModel& model);

}  // namespace gdsr
