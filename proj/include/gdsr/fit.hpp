#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gdsr/feature_bank.hpp"
#include "gdsr/guidance.hpp"
#include "gdsr/image.hpp"
#include "gdsr/spectral.hpp"

namespace gdsr {

/// Channel-wise solve weights, kept as natural logarithms so every value is
/// positive by construction.
class LambdaVector {
 public:
  LambdaVector() = default;
  /// Throws InvalidArgument for any value <= 0 or non-finite.
  static LambdaVector from_values(std::span<const double> values);
  static LambdaVector from_logs(std::vector<double> logs);
  static LambdaVector constant(std::size_t channels, double value);

  std::size_t size() const noexcept { return logs_.size(); }
  double log_value(std::size_t c) const { return logs_.at(c); }
  double value(std::size_t c) const;
  void set_log(std::size_t c, double log_value);
  std::vector<double> values() const;

 private:
  std::vector<double> logs_;
};

/// Initial value of every channel-wise lambda: e^{0.1}.
inline constexpr double kInitialLogLambda = 0.1;

/// One training example on the HR grid.
struct TrainPair {
  Image2D upsampled;  ///< bicubic-upsampled LR depth
  Image2D guide;      ///< luminance of the RGB guide
  Image2D target;     ///< ground-truth HR depth
};

struct SearchOptions {
  /// Uniform log-grid samples used to bracket the minimum before the
  /// golden-section refinement; values below 3 search the whole interval.
  int grid_points = 9;
  /// Maximum number of full coordinate passes.
  int sweeps = 3;
  double log_min = -4.0;
  double log_max = 4.0;
  /// Golden-section stops once the bracket is narrower than this (log units).
  double log_tol = 1e-2;

  void validate() const;
};

struct LineSearchResult {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Minimizes f on [lo, hi]: optional uniform grid scan, then golden-section
/// refinement of the cell pair around the best grid point. Returns the best
/// point that was actually evaluated.
LineSearchResult golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                         int grid_points, double tol);

struct LambdaFit {
  LambdaVector lambdas;
  ReconstructionHead head;
  /// Training RMSE at the start and after every accepted move.
  std::vector<double> trace;
  int sweeps_run = 0;
};

/// Coordinate descent over channels. For each channel a golden-section search
/// on log lambda_c in [log_min, log_max] minimizes the training RMSE of
/// extract -> channel_solve -> fit_head -> apply_head; a move is kept only if
/// the RMSE strictly decreases. Starts at lambda_c = e^{0.1} and stops after
/// `sweeps` passes or a pass with no accepted move.
LambdaFit fit_lambda(std::span<const TrainPair> pairs, const FilterBank& bank, const EdgeWeightConfig& edge,
                     SymbolMode symbol, double head_gamma, const SearchOptions& search,
                     const LaplacianKernel& kernel = {});

/// Head fit with lambdas held fixed.
ReconstructionHead fit_head_fixed_lambdas(std::span<const TrainPair> pairs, const FilterBank& bank,
                                          const EdgeWeightConfig& edge, SymbolMode symbol,
                                          std::span<const double> lambdas, double head_gamma,
                                          const LaplacianKernel& kernel = {});

struct ImageLambdaFit {
  double lambda = 0.0;
  double rmse = 0.0;
  double rmse_at_zero = 0.0;
  std::vector<double> trace;
};

/// Single lambda for the image-domain solve. Starts at e^{0.1}, searches
/// log lambda like fit_lambda, then compares against the lambda = 0 endpoint
/// (plain bicubic) and keeps whichever has the lower training RMSE.
ImageLambdaFit fit_image_lambda(std::span<const TrainPair> pairs, const EdgeWeightConfig& edge, SymbolMode symbol,
                                const SearchOptions& search, const LaplacianKernel& kernel = {});

/// Pooled sqrt(sum of squared errors / total pixels) over all pairs.
double pooled_rmse(std::span<const Image2D> predictions, std::span<const Image2D> targets);

}  // namespace gdsr
