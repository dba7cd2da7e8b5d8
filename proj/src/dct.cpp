#include "gdsr/dct.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

namespace gdsr {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (length, kind) and kept for the
// lifetime of the process.
class PlanCache {
 public:
  fftw_plan get(std::size_t n, fftw_r2r_kind kind) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, static_cast<int>(kind));
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second.get();
    std::vector<double> in(n), out(n);
    fftw_plan p = fftw_plan_r2r_1d(static_cast<int>(n), in.data(), out.data(), kind,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (p == nullptr) throw Error("fftw_plan_r2r_1d failed");
    plans_.emplace(key, PlanPtr(p));
    return p;
  }

 private:
  struct PlanDeleter {
    void operator()(fftw_plan p) const noexcept { fftw_destroy_plan(p); }
  };
  using PlanPtr = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, PlanPtr> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// Transforms every row of a rows x n row-major buffer in place.
void transform_rows(std::vector<double>& data, std::size_t rows, std::size_t n, DctDirection dir) {
  const fftw_plan plan = plan_cache().get(n, dir == DctDirection::forward ? FFTW_REDFT10 : FFTW_REDFT01);
  const double dc_scale = dir == DctDirection::forward ? std::sqrt(1.0 / (4.0 * n)) : std::sqrt(1.0 / n);
  const double ac_scale = 1.0 / std::sqrt(2.0 * n);
  const auto nrows = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel
  {
    std::vector<double> in(n), out(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < nrows; ++r) {
      double* row = data.data() + static_cast<std::size_t>(r) * n;
      if (dir == DctDirection::forward) {
        std::copy(row, row + n, in.begin());
        fftw_execute_r2r(plan, in.data(), out.data());
        row[0] = out[0] * dc_scale;
        for (std::size_t k = 1; k < n; ++k) row[k] = out[k] * ac_scale;
      } else {
        in[0] = row[0] * dc_scale;
        for (std::size_t k = 1; k < n; ++k) in[k] = row[k] * ac_scale;
        fftw_execute_r2r(plan, in.data(), out.data());
        std::copy(out.begin(), out.end(), row);
      }
    }
  }
}

void transpose(const std::vector<double>& src, std::vector<double>& dst, std::size_t rows, std::size_t cols) {
  dst.resize(src.size());
  const auto nrows = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < nrows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      dst[c * rows + static_cast<std::size_t>(r)] = src[static_cast<std::size_t>(r) * cols + c];
}

Image2D fast_dct2(const Image2D& img, DctDirection dir) {
  const std::size_t m = img.height();
  const std::size_t n = img.width();
  std::vector<double> a(img.samples().begin(), img.samples().end());
  std::vector<double> t;
  transform_rows(a, m, n, dir);
  transpose(a, t, m, n);
  transform_rows(t, n, m, dir);
  transpose(t, a, n, m);
  Image2D out(m, n);
  std::copy(a.begin(), a.end(), out.samples().begin());
  return out;
}

// cos(pi * (2i+1) * k / (2n)) for all (i, k), via the index (2i+1)k mod 4n.
std::vector<double> cosine_table(std::size_t n) {
  std::vector<double> table(4 * n);
  for (std::size_t q = 0; q < 4 * n; ++q)
    table[q] = std::cos(std::numbers::pi * static_cast<double>(q) / (2.0 * static_cast<double>(n)));
  return table;
}

void naive_1d(const double* x, double* y, std::size_t stride, std::size_t n, const std::vector<double>& table,
              DctDirection dir, std::vector<double>& scratch) {
  scratch.assign(n, 0.0);
  const double c0 = std::sqrt(1.0 / n);
  const double ck = std::sqrt(2.0 / n);
  for (std::size_t out = 0; out < n; ++out) {
    double acc = 0.0;
    for (std::size_t in = 0; in < n; ++in) {
      if (dir == DctDirection::forward) {
        // X_k = c_k * sum_i x_i cos(pi (2i+1) k / 2n)
        acc += x[in * stride] * table[((2 * in + 1) * out) % (4 * n)];
      } else {
        // x_i = sum_k c_k X_k cos(pi (2i+1) k / 2n)
        acc += (in == 0 ? c0 : ck) * x[in * stride] * table[((2 * out + 1) * in) % (4 * n)];
      }
    }
    scratch[out] = dir == DctDirection::forward ? (out == 0 ? c0 : ck) * acc : acc;
  }
  for (std::size_t k = 0; k < n; ++k) y[k * stride] = scratch[k];
}

}  // namespace

DctPlan::DctPlan(std::size_t rows, std::size_t cols, DctDirection direction, DctPath path)
    : rows_(rows), cols_(cols), direction_(direction), path_(path) {
  if (rows == 0 || cols == 0) throw InvalidArgument("DctPlan: dimensions must be positive");
  if (path == DctPath::naive && rows * cols > kNaiveDctMaxSamples)
    throw InvalidArgument("DctPlan: naive path limited to 2^20 samples");
}

Image2D DctPlan::execute(const Image2D& img) const {
  if (img.height() != rows_ || img.width() != cols_)
    throw DimensionError("DctPlan: plan built for " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                         ", got " + shape_string(img));
  return path_ == DctPath::fast ? fast_dct2(img, direction_) : dct2_naive(img, direction_);
}

Image2D dct2_forward(const Image2D& img) { return fast_dct2(img, DctDirection::forward); }

Image2D dct2_inverse(const Image2D& coeffs) { return fast_dct2(coeffs, DctDirection::inverse); }

Image2D dct2_naive(const Image2D& img, DctDirection direction) {
  const std::size_t m = img.height();
  const std::size_t n = img.width();
  if (m * n > kNaiveDctMaxSamples) throw InvalidArgument("dct2_naive: image exceeds 2^20 samples");
  Image2D out = img;
  double* d = out.samples().data();
  std::vector<double> scratch;
  const auto row_table = cosine_table(n);
  for (std::size_t r = 0; r < m; ++r) naive_1d(d + r * n, d + r * n, 1, n, row_table, direction, scratch);
  const auto col_table = cosine_table(m);
  for (std::size_t c = 0; c < n; ++c) naive_1d(d + c, d + c, n, m, col_table, direction, scratch);
  return out;
}

}  // namespace gdsr
