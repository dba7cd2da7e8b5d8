#include "gdsr/feature_bank.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace gdsr {

FilterPair FilterPair::make_shared(std::string name, Stencil s) {
  return FilterPair{std::move(name), s, s, true};
}

FilterPair FilterPair::make_private(std::string name, Stencil depth, Stencil guide) {
  return FilterPair{std::move(name), std::move(depth), std::move(guide), false};
}

FilterBank::FilterBank(std::string id, std::vector<FilterPair> pairs) : id_(std::move(id)), pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw InvalidArgument("FilterBank: at least one pair required");
  for (const auto& p : pairs_)
    if (p.shared && !(p.depth_filter == p.guide_filter))
      throw InvalidArgument("FilterBank: shared pair '" + p.name + "' has different stencils");
}

namespace stencils {

Stencil gaussian(double sigma, std::size_t radius) {
  const std::size_t n = 2 * radius + 1;
  std::vector<double> w(n * n);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double y = static_cast<double>(r) - static_cast<double>(radius);
      const double x = static_cast<double>(c) - static_cast<double>(radius);
      w[r * n + c] = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
      total += w[r * n + c];
    }
  for (double& v : w) v /= total;
  return Stencil(n, n, std::move(w));
}

Stencil laplacian_of_gaussian(double sigma, std::size_t radius) {
  const std::size_t n = 2 * radius + 1;
  std::vector<double> w(n * n);
  const double s2 = sigma * sigma;
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double y = static_cast<double>(r) - static_cast<double>(radius);
      const double x = static_cast<double>(c) - static_cast<double>(radius);
      const double q = x * x + y * y;
      w[r * n + c] = (q - 2.0 * s2) / (s2 * s2) * std::exp(-q / (2.0 * s2));
      total += w[r * n + c];
    }
  // Truncation leaves a small DC response; remove it.
  const double offset = total / static_cast<double>(n * n);
  for (double& v : w) v -= offset;
  return Stencil(n, n, std::move(w));
}

Stencil five_point_laplacian() { return Stencil(3, 3, {0, 1, 0, 1, -4, 1, 0, 1, 0}); }

Stencil horizontal_derivative() { return Stencil(1, 3, {-0.5, 0.0, 0.5}); }

Stencil vertical_derivative() { return Stencil(3, 1, {-0.5, 0.0, 0.5}); }

}  // namespace stencils

FilterBank default_bank() {
  using namespace stencils;
  const Stencil g1 = gaussian(1.0, 2);
  const Stencil g2 = gaussian(2.0, 3);
  return FilterBank("default8", {
                                    FilterPair::make_shared("identity", Stencil::identity()),
                                    FilterPair::make_shared("gauss1", g1),
                                    FilterPair::make_shared("gauss2", g2),
                                    FilterPair::make_shared("laplacian", five_point_laplacian()),
                                    FilterPair::make_private("gauss1|dx", g1, horizontal_derivative()),
                                    FilterPair::make_private("gauss1|dy", g1, vertical_derivative()),
                                    FilterPair::make_private("identity|log1", Stencil::identity(),
                                                             laplacian_of_gaussian(1.0, 3)),
                                    FilterPair::make_private("gauss2|identity", g2, Stencil::identity()),
                                });
}

FilterBank identity_bank() {
  return FilterBank("identity1", {FilterPair::make_shared("identity", Stencil::identity())});
}

FilterBank bank_by_id(const std::string& id) {
  if (id == "default8") return default_bank();
  if (id == "identity1") return identity_bank();
  throw InvalidArgument("unknown filter bank '" + id + "'");
}

MultiChannelImage extract(const Image2D& img, const FilterBank& bank, FeatureSide side) {
  std::vector<Image2D> out(bank.size());
  const auto channels = static_cast<std::ptrdiff_t>(bank.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < channels; ++c) {
    const auto& pair = bank[static_cast<std::size_t>(c)];
    const Stencil& s = side == FeatureSide::depth ? pair.depth_filter : pair.guide_filter;
    out[static_cast<std::size_t>(c)] = convolve_reflect(img, s);
  }
  return MultiChannelImage(std::move(out));
}

MultiChannelImage channel_solve(const MultiChannelImage& depth_features, const MultiChannelImage& guide_features,
                                const MultiChannelImage& weights, std::span<const double> lambdas,
                                const SpectralSymbol& symbol, const LaplacianKernel& kernel) {
  if (!depth_features.same_shape(guide_features) || !depth_features.same_shape(weights))
    throw DimensionError("channel_solve: feature stacks disagree on shape or channel count");
  if (lambdas.size() != depth_features.channel_count())
    throw DimensionError("channel_solve: expected " + std::to_string(depth_features.channel_count()) +
                         " lambdas, got " + std::to_string(lambdas.size()));
  for (double l : lambdas) validate_lambda(l);
  std::vector<Image2D> out(depth_features.channel_count());
  const auto channels = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ci = 0; ci < channels; ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    const Image2D masked =
        elementwise_combine(laplacian_apply(guide_features[c], kernel), weights[c], BinaryOp::mul);
    out[c] = solve_screened(build_rhs(depth_features[c], masked, lambdas[c], kernel), lambdas[c], symbol);
  }
  return MultiChannelImage(std::move(out));
}

ReconstructionHead ReconstructionHead::select(std::size_t channels, std::size_t c) {
  if (c >= channels) throw InvalidArgument("ReconstructionHead::select: channel out of range");
  ReconstructionHead head;
  head.weights.assign(channels, 0.0);
  head.weights[c] = 1.0;
  return head;
}

ReconstructionHead fit_head(std::span<const MultiChannelImage> features, std::span<const Image2D> targets,
                            double gamma) {
  if (features.empty()) throw InvalidArgument("fit_head: at least one training pair required");
  if (features.size() != targets.size()) throw DimensionError("fit_head: features/targets count mismatch");
  if (!std::isfinite(gamma) || gamma < 0.0) throw InvalidArgument("fit_head: gamma must be >= 0");
  const std::size_t channels = features.front().channel_count();
  const std::size_t k = channels + 1;
  std::vector<double> gram(k * k, 0.0);
  std::vector<double> moment(k, 0.0);
  std::vector<double> row(k);
  for (std::size_t p = 0; p < features.size(); ++p) {
    const auto& f = features[p];
    if (f.channel_count() != channels) throw DimensionError("fit_head: channel count differs between pairs");
    if (f.height() != targets[p].height() || f.width() != targets[p].width())
      throw DimensionError("fit_head: features and target disagree on shape");
    const auto y = targets[p].samples();
    for (std::size_t i = 0; i < y.size(); ++i) {
      for (std::size_t c = 0; c < channels; ++c) row[c] = f[c].samples()[i];
      row[channels] = 1.0;
      for (std::size_t a = 0; a < k; ++a) {
        moment[a] += row[a] * y[i];
        for (std::size_t b = a; b < k; ++b) gram[a * k + b] += row[a] * row[b];
      }
    }
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < a; ++b) gram[a * k + b] = gram[b * k + a];
  return solve_head_normal_equations(gram, moment, gamma);
}

ReconstructionHead solve_head_normal_equations(std::span<const double> gram, std::span<const double> moment,
                                               double gamma) {
  const std::size_t k = moment.size();
  if (k < 2 || gram.size() != k * k) throw DimensionError("solve_head_normal_equations: inconsistent sizes");
  if (!std::isfinite(gamma) || gamma < 0.0) throw InvalidArgument("fit_head: gamma must be >= 0");
  const std::size_t channels = k - 1;
  const auto n = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd normal(n, n);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    rhs(a) = moment[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < n; ++b) normal(a, b) = gram[static_cast<std::size_t>(a) * k + static_cast<std::size_t>(b)];
  }
  for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(channels); ++a) normal(a, a) += gamma;

  // Jacobi scaling keeps the conditioning check independent of feature units.
  Eigen::VectorXd d = normal.diagonal();
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = d(i) > 0.0 ? 1.0 / std::sqrt(d(i)) : 1.0;
  const Eigen::MatrixXd scaled = d.asDiagonal() * normal * d.asDiagonal();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(scaled);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() >= 1e-14))
    throw SolverError("fit_head: singular normal matrix (gamma = " + std::to_string(gamma) +
                      "); retry with gamma > 0");
  const Eigen::VectorXd w = d.asDiagonal() * ldlt.solve(d.asDiagonal() * rhs);

  ReconstructionHead head;
  head.weights.resize(channels);
  for (std::size_t c = 0; c < channels; ++c) head.weights[c] = w(static_cast<Eigen::Index>(c));
  head.bias = w(static_cast<Eigen::Index>(channels));
  head.gamma = gamma;
  return head;
}

Image2D apply_head(const MultiChannelImage& features, const ReconstructionHead& head) {
  if (features.channel_count() != head.channel_count())
    throw DimensionError("apply_head: head expects " + std::to_string(head.channel_count()) + " channels, got " +
                         std::to_string(features.channel_count()));
  Image2D out(features.height(), features.width(), head.bias);
  auto o = out.samples();
  for (std::size_t c = 0; c < features.channel_count(); ++c) {
    const double w = head.weights[c];
    if (w == 0.0) continue;
    auto f = features[c].samples();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += w * f[i];
  }
  return out;
}

}  // namespace gdsr
