#include "doctest.h"
#include "gdsr/convolve.hpp"
#include "gdsr/error.hpp"
#include "oracles.hpp"

using namespace gdsr;

TEST_CASE("reflect_index repeats the edge sample") {
  CHECK(reflect_index(-1, 5) == 0);
  CHECK(reflect_index(-2, 5) == 1);
  CHECK(reflect_index(5, 5) == 4);
  CHECK(reflect_index(6, 5) == 3);
  CHECK(reflect_index(-1, 1) == 0);
  CHECK(reflect_index(7, 1) == 0);
  for (long i = -40; i < 40; ++i)
    for (std::size_t n : {1, 2, 3, 7}) CHECK(reflect_index(i, n) == static_cast<std::size_t>(oracle::mirror(i, n)));
}

TEST_CASE("stencil validation") {
  CHECK_THROWS(Stencil(2, 3, std::vector<double>(6, 0.0)));
  CHECK_THROWS(Stencil(3, 3, std::vector<double>(8, 0.0)));
  CHECK(Stencil(1, 3, {1, 2, 1}).flip_symmetric());
  CHECK_FALSE(Stencil(1, 3, {1, 2, 3}).flip_symmetric());
  CHECK(Stencil(1, 3, {1, 2, 3}).sum() == 6);
}

TEST_CASE("identity stencil is exact") {
  const Image2D x = oracle::random_image(6, 9, 10);
  CHECK(convolve_reflect(x, Stencil::identity()) == x);
}

TEST_CASE("parallel and serial convolution match the padded oracle") {
  const std::vector<std::pair<std::size_t, std::size_t>> shapes{{1, 1}, {1, 9}, {8, 1}, {2, 3}, {17, 23}, {64, 48}};
  std::uint64_t seed = 100;
  for (auto [m, n] : shapes)
    for (auto [kh, kw] : {std::pair<std::size_t, std::size_t>{3, 3}, {5, 5}, {7, 7}, {1, 3}, {3, 1}, {5, 3}}) {
      const Image2D x = oracle::random_image(m, n, seed++);
      const Image2D kimg = oracle::random_image(kh, kw, seed++);
      const std::vector<double> k(kimg.samples().begin(), kimg.samples().end());
      const Stencil st(kh, kw, k);
      const Image2D ref = oracle::padded_correlate(x, kh, kw, k);
      const Image2D par = convolve_reflect(x, st);
      CHECK(max_abs_diff(par, ref) < 1e-13);
      CHECK(convolve_reflect_serial(x, st) == par);
    }
}

TEST_CASE("stencil is applied without flipping") {
  const Image2D x(1, 3, std::vector<double>{0, 1, 0});
  const Image2D y = convolve_reflect(x, Stencil(1, 3, {1, 0, 0}));
  // out[j] = x[j - 1]
  CHECK(y == Image2D(1, 3, std::vector<double>{0, 0, 1}));
}
