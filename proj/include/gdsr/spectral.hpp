#pragma once

#include <cstddef>

#include "gdsr/convolve.hpp"
#include "gdsr/image.hpp"

namespace gdsr {

/// 3x3 discrete Laplacian. Must be symmetric under horizontal and vertical
/// flips (so the DCT diagonalizes it under half-sample reflection) and must
/// annihilate constants.
class LaplacianKernel {
 public:
  /// [[0,1,0],[1,-4,1],[0,1,0]]
  LaplacianKernel();
  /// Throws InvalidArgument for a non-3x3, non-symmetric or non-zero-sum stencil.
  explicit LaplacianKernel(Stencil stencil);

  static LaplacianKernel five_point() { return LaplacianKernel(); }

  const Stencil& stencil() const noexcept { return stencil_; }

 private:
  Stencil stencil_;
};

enum class SymbolMode { derived, paper };

/// Per-frequency multiplier grid for the screened solve.
struct SpectralSymbol {
  Image2D values;
  SymbolMode mode = SymbolMode::derived;
};

/// Reflection-padded 3x3 Laplacian.
Image2D laplacian_apply(const Image2D& img, const LaplacianKernel& kernel = {});

/// Eigenvalue grid of `kernel` under the orthonormal DCT-II. For a symmetric
/// 3x3 stencil with center z, vertical neighbor v, horizontal neighbor h and
/// corner d:  z + 2v cos(pi i/M) + 2h cos(pi j/N) + 4d cos(pi i/M) cos(pi j/N).
SpectralSymbol derived_symbol(const LaplacianKernel& kernel, std::size_t rows, std::size_t cols);

/// K[i,j] = cos(pi i/M) + cos(pi j/N), zero-based, as printed in the method's
/// closed form. Not the eigenvalues of any 5-point Laplacian; see README.
SpectralSymbol paper_symbol(std::size_t rows, std::size_t cols);

SpectralSymbol make_symbol(SymbolMode mode, const LaplacianKernel& kernel, std::size_t rows, std::size_t cols);

/// Throws InvalidArgument unless lambda is finite and >= 0.
void validate_lambda(double lambda);

/// E = lambda * L(guide_lap_masked) + L_up, where guide_lap_masked is the
/// already masked guide Laplacian L(R) o W.
Image2D build_rhs(const Image2D& upsampled, const Image2D& guide_lap_masked, double lambda,
                  const LaplacianKernel& kernel = {});

/// H = IDCT( DCT(E) / (1 + lambda * symbol^2) ). lambda == 0 returns E unchanged.
Image2D solve_screened(const Image2D& rhs, double lambda, const SpectralSymbol& symbol);

/// 1/2 ||H - L||^2 + lambda/2 ||L(H) - T||^2
double energy(const Image2D& h, const Image2D& upsampled, const Image2D& target_lap, double lambda,
              const LaplacianKernel& kernel = {});

/// Applies (Id + lambda L L).
Image2D screened_operator(const Image2D& x, double lambda, const LaplacianKernel& kernel = {});

struct CgResult {
  Image2D solution;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Matrix-free conjugate gradient on (Id + lambda L L) H = E. Stops when
/// ||r||_2 <= tol ||E||_2. Throws SolverError (with the final residual in the
/// message) if that does not happen within max_iter iterations.
CgResult cg_solve(const Image2D& rhs, double lambda, const LaplacianKernel& kernel, double tol, int max_iter);

}  // namespace gdsr
