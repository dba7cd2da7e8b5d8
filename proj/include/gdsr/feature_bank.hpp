#pragma once

#include <span>
#include <string>
#include <vector>

#include "gdsr/convolve.hpp"
#include "gdsr/image.hpp"
#include "gdsr/spectral.hpp"

namespace gdsr {

/// One channel of the semi-coupled bank: the stencil applied to the depth
/// input and the one applied to the guide. Shared pairs use the same stencil
/// on both sides.
struct FilterPair {
  std::string name;
  Stencil depth_filter;
  Stencil guide_filter;
  bool shared = false;

  static FilterPair make_shared(std::string name, Stencil s);
  static FilterPair make_private(std::string name, Stencil depth, Stencil guide);
};

/// Ordered filter pairs; channel c of both feature stacks comes from pair c.
class FilterBank {
 public:
  /// Throws on an empty pair list or a shared pair with differing stencils.
  FilterBank(std::string id, std::vector<FilterPair> pairs);

  const std::string& id() const noexcept { return id_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  const FilterPair& operator[](std::size_t c) const { return pairs_.at(c); }
  const std::vector<FilterPair>& pairs() const noexcept { return pairs_; }

 private:
  std::string id_;
  std::vector<FilterPair> pairs_;
};

namespace stencils {
Stencil gaussian(double sigma, std::size_t radius);
Stencil laplacian_of_gaussian(double sigma, std::size_t radius);
Stencil five_point_laplacian();
/// [-1/2, 0, 1/2] along columns / rows.
Stencil horizontal_derivative();
Stencil vertical_derivative();
}  // namespace stencils

/// Eight pairs, id "default8":
///   shared:  identity, gauss(1) 5x5, gauss(2) 7x7, 5-point laplacian
///   private: (gauss(1), d/dx), (gauss(1), d/dy), (identity, LoG(1) 7x7), (gauss(2), identity)
/// Smoothing stencils sum to 1, derivative stencils to 0.
FilterBank default_bank();

/// A single shared identity pair, id "identity1". Reduces the feature-domain
/// pipeline to the image-domain one.
FilterBank identity_bank();

/// Looks a bank up by id; throws InvalidArgument for unknown ids.
FilterBank bank_by_id(const std::string& id);

enum class FeatureSide { depth, guide };

/// Channel c = convolve_reflect(img, side-appropriate stencil of pair c).
MultiChannelImage extract(const Image2D& img, const FilterBank& bank, FeatureSide side);

/// Per channel:
///   E[c] = lambda_c L( L(guide[c]) o weight[c] ) + depth[c]
///   H[c] = solve_screened(E[c], lambda_c, symbol)
/// lambda_c >= 0; lambda_c == 0 passes depth[c] through unchanged.
MultiChannelImage channel_solve(const MultiChannelImage& depth_features, const MultiChannelImage& guide_features,
                                const MultiChannelImage& weights, std::span<const double> lambdas,
                                const SpectralSymbol& symbol, const LaplacianKernel& kernel = {});

/// Linear per-pixel read-out: sum_c w_c H[c] + bias.
struct ReconstructionHead {
  std::vector<double> weights;  ///< one per channel
  double bias = 0.0;
  double gamma = 0.0;           ///< ridge penalty used when fitting

  std::size_t channel_count() const noexcept { return weights.size(); }
  /// Identity read-out of channel `c` out of `channels`.
  static ReconstructionHead select(std::size_t channels, std::size_t c = 0);
};

/// Ridge regression over every pixel of every pair:
///   min_w  sum ||[H | 1] w - target||^2 + gamma ||w_channels||^2
/// The bias is not penalized. Throws SolverError when gamma == 0 and the
/// normal matrix is singular.
ReconstructionHead fit_head(std::span<const MultiChannelImage> features, std::span<const Image2D> targets,
                            double gamma);

/// Lower-level entry used by the lambda search: solves the ridge system from an
/// accumulated Gram matrix [H|1]^T [H|1] ((C+1)^2, row-major, bias last) and
/// moment vector [H|1]^T y. gamma is added to the channel diagonal here.
ReconstructionHead solve_head_normal_equations(std::span<const double> gram, std::span<const double> moment,
                                               double gamma);

Image2D apply_head(const MultiChannelImage& features, const ReconstructionHead& head);

}  // namespace gdsr
