#include "gdsr/pipeline.hpp"

namespace gdsr {

Image2D masked_guide_laplacian(const Image2D& guide, const EdgeWeightConfig& edge, const LaplacianKernel& kernel) {
  return elementwise_combine(laplacian_apply(guide, kernel), edge_weight(guide, edge, kernel), BinaryOp::mul);
}

Image2D image_domain_sr(const Image2D& upsampled, const Image2D& guide, const ImageDomainConfig& cfg) {
  require_same_shape(upsampled, guide, "image_domain_sr");
  validate_lambda(cfg.lambda);
  if (cfg.lambda == 0.0) return upsampled;
  const Image2D rhs = build_rhs(upsampled, masked_guide_laplacian(guide, cfg.edge, cfg.kernel), cfg.lambda, cfg.kernel);
  return solve_screened(rhs, cfg.lambda, make_symbol(cfg.symbol, cfg.kernel, rhs.height(), rhs.width()));
}

void FeatureDomainModel::validate() const {
  if (lambdas.size() != bank.size())
    throw InvalidArgument("FeatureDomainModel: " + std::to_string(lambdas.size()) + " lambdas for a bank of " +
                          std::to_string(bank.size()));
  if (head.channel_count() != bank.size())
    throw InvalidArgument("FeatureDomainModel: head has " + std::to_string(head.channel_count()) +
                          " weights for a bank of " + std::to_string(bank.size()));
  for (double l : lambdas) validate_lambda(l);
  edge.validate();
}

MultiChannelImage feature_domain_features(const Image2D& upsampled, const Image2D& guide,
                                          const FeatureDomainModel& model) {
  require_same_shape(upsampled, guide, "feature_domain_sr");
  model.validate();
  const MultiChannelImage depth = extract(upsampled, model.bank, FeatureSide::depth);
  const MultiChannelImage guide_features = extract(guide, model.bank, FeatureSide::guide);
  const MultiChannelImage weights = multichannel_edge_weight(guide_features, model.edge, model.kernel);
  const SpectralSymbol symbol = make_symbol(model.symbol, model.kernel, upsampled.height(), upsampled.width());
  return channel_solve(depth, guide_features, weights, model.lambdas, symbol, model.kernel);
}

Image2D feature_domain_sr(const Image2D& upsampled, const Image2D& guide, const FeatureDomainModel& model) {
  return apply_head(feature_domain_features(upsampled, guide, model), model.head);
}

}  // namespace gdsr
