#include "gdsr/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gdsr/dct.hpp"

namespace gdsr {

namespace {

constexpr double kKernelTol = 1e-12;

Stencil five_point_stencil() { return Stencil(3, 3, {0, 1, 0, 1, -4, 1, 0, 1, 0}); }

double dot(const Image2D& a, const Image2D& b) {
  double s = 0.0;
  auto x = a.samples();
  auto y = b.samples();
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

LaplacianKernel::LaplacianKernel() : stencil_(five_point_stencil()) {}

LaplacianKernel::LaplacianKernel(Stencil stencil) : stencil_(std::move(stencil)) {
  if (stencil_.height() != 3 || stencil_.width() != 3)
    throw InvalidArgument("LaplacianKernel: stencil must be 3x3");
  if (!stencil_.flip_symmetric(kKernelTol))
    throw InvalidArgument("LaplacianKernel: stencil must be symmetric under horizontal and vertical flips");
  if (std::abs(stencil_.sum()) > kKernelTol) throw InvalidArgument("LaplacianKernel: weights must sum to zero");
}

Image2D laplacian_apply(const Image2D& img, const LaplacianKernel& kernel) {
  return convolve_reflect(img, kernel.stencil());
}

SpectralSymbol derived_symbol(const LaplacianKernel& kernel, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw InvalidArgument("derived_symbol: dimensions must be positive");
  const Stencil& s = kernel.stencil();
  const double center = s(1, 1);
  const double vertical = s(0, 1);
  const double horizontal = s(1, 0);
  const double corner = s(0, 0);
  Image2D values(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const double ci = std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(rows));
    for (std::size_t j = 0; j < cols; ++j) {
      const double cj = std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(cols));
      values(i, j) = center + 2.0 * vertical * ci + 2.0 * horizontal * cj + 4.0 * corner * ci * cj;
    }
  }
  // cos(0) terms cancel against the zero-sum constraint only up to rounding.
  values(0, 0) = 0.0;
  return {std::move(values), SymbolMode::derived};
}

SpectralSymbol paper_symbol(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw InvalidArgument("paper_symbol: dimensions must be positive");
  Image2D values(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      values(i, j) = std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(rows)) +
                     std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(cols));
  return {std::move(values), SymbolMode::paper};
}

SpectralSymbol make_symbol(SymbolMode mode, const LaplacianKernel& kernel, std::size_t rows, std::size_t cols) {
  return mode == SymbolMode::derived ? derived_symbol(kernel, rows, cols) : paper_symbol(rows, cols);
}

void validate_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw InvalidArgument("lambda must be finite and >= 0, got " + std::to_string(lambda));
}

Image2D build_rhs(const Image2D& upsampled, const Image2D& guide_lap_masked, double lambda,
                  const LaplacianKernel& kernel) {
  require_same_shape(upsampled, guide_lap_masked, "build_rhs");
  validate_lambda(lambda);
  if (lambda == 0.0) return upsampled;
  Image2D rhs = laplacian_apply(guide_lap_masked, kernel);
  auto e = rhs.samples();
  auto l = upsampled.samples();
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = lambda * e[i] + l[i];
  return rhs;
}

Image2D solve_screened(const Image2D& rhs, double lambda, const SpectralSymbol& symbol) {
  require_same_shape(rhs, symbol.values, "solve_screened");
  validate_lambda(lambda);
  if (lambda == 0.0) return rhs;
  Image2D coeffs = dct2_forward(rhs);
  auto c = coeffs.samples();
  auto k = symbol.values.samples();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double denom = 1.0 + lambda * k[i] * k[i];
    if (!(denom > 0.0)) throw SolverError("solve_screened: non-positive denominator");
    c[i] /= denom;
  }
  return dct2_inverse(coeffs);
}

double energy(const Image2D& h, const Image2D& upsampled, const Image2D& target_lap, double lambda,
              const LaplacianKernel& kernel) {
  require_same_shape(h, upsampled, "energy");
  require_same_shape(h, target_lap, "energy");
  validate_lambda(lambda);
  double fidelity = 0.0;
  auto x = h.samples();
  auto l = upsampled.samples();
  for (std::size_t i = 0; i < x.size(); ++i) fidelity += (x[i] - l[i]) * (x[i] - l[i]);
  double smooth = 0.0;
  if (lambda != 0.0) {
    const Image2D lap = laplacian_apply(h, kernel);
    auto g = lap.samples();
    auto t = target_lap.samples();
    for (std::size_t i = 0; i < g.size(); ++i) smooth += (g[i] - t[i]) * (g[i] - t[i]);
  }
  return 0.5 * fidelity + 0.5 * lambda * smooth;
}

Image2D screened_operator(const Image2D& x, double lambda, const LaplacianKernel& kernel) {
  if (lambda == 0.0) return x;
  Image2D out = laplacian_apply(laplacian_apply(x, kernel), kernel);
  auto o = out.samples();
  auto v = x.samples();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = v[i] + lambda * o[i];
  return out;
}

CgResult cg_solve(const Image2D& rhs, double lambda, const LaplacianKernel& kernel, double tol, int max_iter) {
  validate_lambda(lambda);
  if (!(tol > 0.0)) throw InvalidArgument("cg_solve: tol must be positive");
  if (max_iter < 1) throw InvalidArgument("cg_solve: max_iter must be >= 1");
  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  Image2D x(rhs.height(), rhs.width(), 0.0);
  if (rhs_norm == 0.0) return {std::move(x), 0, 0.0};

  Image2D r = rhs;
  Image2D p = r;
  double rr = dot(r, r);
  for (int it = 1; it <= max_iter; ++it) {
    const Image2D ap = screened_operator(p, lambda, kernel);
    const double alpha = rr / dot(p, ap);
    auto xs = x.samples();
    auto rs = r.samples();
    auto ps = p.samples();
    auto aps = ap.samples();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] += alpha * ps[i];
      rs[i] -= alpha * aps[i];
    }
    const double rr_next = dot(r, r);
    const double rel = std::sqrt(rr_next) / rhs_norm;
    if (rel <= tol) return {std::move(x), it, rel};
    const double beta = rr_next / rr;
    for (std::size_t i = 0; i < ps.size(); ++i) ps[i] = rs[i] + beta * ps[i];
    rr = rr_next;
  }
  // The recursive residual drifts; report the true one.
  const Image2D ax = screened_operator(x, lambda, kernel);
  const double true_rel = std::sqrt(sum_squares(elementwise_combine(rhs, ax, BinaryOp::sub))) / rhs_norm;
  std::ostringstream os;
  os << "cg_solve: no convergence in " << max_iter << " iterations, relative residual " << true_rel;
  throw SolverError(os.str());
}

}  // namespace gdsr
