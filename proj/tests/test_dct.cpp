#include <cmath>

#include "doctest.h"
#include "gdsr/dct.hpp"
#include "gdsr/error.hpp"
#include "oracles.hpp"

using namespace gdsr;

TEST_CASE("constant image has a single DC coefficient") {
  const Image2D c = dct2_forward(Image2D(4, 4, 1.0));
  CHECK(c(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
  double rest = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) rest = std::max(rest, std::abs(c.samples()[i]));
  CHECK(rest < 1e-15);

  Image2D dc(4, 4, 0.0);
  dc(0, 0) = 4.0;
  CHECK(max_abs_diff(dct2_inverse(dc), Image2D(4, 4, 1.0)) < 1e-15);
  CHECK(max_abs_diff(dct2_naive(dc, DctDirection::inverse), Image2D(4, 4, 1.0)) < 1e-15);
  const Image2D n = dct2_naive(Image2D(5, 3, 2.0), DctDirection::forward);
  CHECK(n(0, 0) == doctest::Approx(2.0 * std::sqrt(15.0)));
}

TEST_CASE("zeros map to zeros") {
  CHECK(dct2_forward(Image2D(3, 5, 0.0)) == Image2D(3, 5, 0.0));
  CHECK(dct2_inverse(Image2D(3, 5, 0.0)) == Image2D(3, 5, 0.0));
}

TEST_CASE("fast and naive paths agree with the basis-matrix oracle") {
  std::uint64_t seed = 7;
  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{8, 8}, {1, 1}, {1, 7}, {6, 1}, {13, 2}, {64, 48}}) {
    const Image2D x = oracle::random_image(m, n, seed++);
    const Image2D ref = oracle::dct(x);
    CHECK(max_abs_diff(dct2_forward(x), ref) < 1e-12);
    CHECK(max_abs_diff(dct2_naive(x, DctDirection::forward), ref) < 1e-12);
    const Image2D iref = oracle::dct(x, true);
    CHECK(max_abs_diff(dct2_inverse(x), iref) < 1e-12);
    CHECK(max_abs_diff(dct2_naive(x, DctDirection::inverse), iref) < 1e-12);
  }
  const Image2D x = oracle::random_image(64, 48, 99);
  CHECK(max_abs_diff(dct2_forward(x), dct2_naive(x, DctDirection::forward)) < 1e-9);
}

TEST_CASE("round trip on an odd size") {
  const Image2D x = oracle::random_image(37, 53, 3);
  CHECK(max_abs_diff(dct2_inverse(dct2_forward(x)), x) < 1e-10);
}

TEST_CASE("parseval") {
  const Image2D x = oracle::random_image(31, 20, 4, -5.0, 5.0);
  const double a = sum_squares(x), b = sum_squares(dct2_forward(x));
  CHECK(std::abs(a - b) < 1e-10 * a);
}

TEST_CASE("linearity of both directions and both paths") {
  const Image2D x = oracle::random_image(12, 9, 5), y = oracle::random_image(12, 9, 6);
  const double a = 1.7, b = -0.3;
  const Image2D axby = elementwise_combine(scale(x, a), scale(y, b), BinaryOp::add);
  for (auto dir : {DctDirection::forward, DctDirection::inverse})
    for (auto path : {DctPath::naive, DctPath::fast}) {
      const DctPlan plan(12, 9, dir, path);
      const Image2D lhs = plan.execute(axby);
      const Image2D rhs = elementwise_combine(scale(plan.execute(x), a), scale(plan.execute(y), b), BinaryOp::add);
      CHECK(max_abs_diff(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("plans reject other sizes") {
  const DctPlan p(4, 6, DctDirection::forward);
  CHECK_THROWS_AS(p.execute(Image2D(6, 4)), DimensionError);
  CHECK_THROWS_AS(DctPlan(4, 6, DctDirection::inverse, DctPath::naive).execute(Image2D(4, 5)), DimensionError);
}

TEST_CASE("naive size guard") {
  CHECK_THROWS(DctPlan(1025, 1024, DctDirection::forward, DctPath::naive));
  CHECK_THROWS(dct2_naive(Image2D(2049, 512), DctDirection::forward));
  CHECK_NOTHROW(DctPlan(1024, 1024, DctDirection::forward, DctPath::naive));
}

TEST_CASE("plans execute concurrently") {
  const DctPlan p(33, 17, DctDirection::forward);
  const Image2D x = oracle::random_image(33, 17, 8);
  const Image2D ref = p.execute(x);
  std::vector<Image2D> out(8);
#pragma omp parallel for
  for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = p.execute(x);
  for (const auto& o : out) CHECK(o == ref);
}
