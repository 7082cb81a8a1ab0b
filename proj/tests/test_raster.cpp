#include <doctest.h>

#include "mattekit/raster.hpp"
#include "mattekit/resize.hpp"

using namespace mattekit;

TEST_CASE("plane indexing is row-major") {
  Plane<int> p(3, 2);
  p.at(2, 1) = 7;
  CHECK(p[5] == 7);
  CHECK(p.row(1)[2] == 7);
  CHECK(p.size() == Size{3, 2});
}

TEST_CASE("mask set algebra") {
  BinaryMask a(2, 1), b(2, 1);
  a.set(0, 0);
  b.set(0, 0);
  b.set(1, 0);
  CHECK((a & b).count() == 1);
  CHECK((a | b).count() == 2);
  CHECK((b - a).test(1, 0));
  CHECK_FALSE((b - a).test(0, 0));
  CHECK(a.complement().count() == 1);
  CHECK_THROWS_AS(a & BinaryMask(3, 1), Error);
}

TEST_CASE("trimap validity and regions") {
  Trimap t(3, 1);
  t[0] = Trimap::kBackground;
  t[1] = Trimap::kUnknown;
  t[2] = Trimap::kForeground;
  CHECK(t.valid());
  CHECK(t.unknown().count() == 1);
  t[0] = 7;
  CHECK_FALSE(t.valid());
}

TEST_CASE("alpha clamping") {
  Plane<float> p(3, 1);
  p[0] = -0.5f;
  p[1] = 0.25f;
  p[2] = 3.0f;
  const AlphaMatte a = AlphaMatte::clamped(p);
  CHECK(a[0] == 0.0f);
  CHECK(a[1] == 0.25f);
  CHECK(a[2] == 1.0f);
}

TEST_CASE("image channels must agree") {
  CHECK_THROWS_AS(Image(Plane<float>(2, 2), Plane<float>(2, 2), Plane<float>(3, 2)), Error);
}

TEST_CASE("resize keeps constants") {
  GrayMap g(7, 5, 0.7f);
  for (auto [w, h] : {std::pair{1, 1}, {3, 9}, {20, 11}}) {
    const GrayMap r = resize_bilinear(g, w, h);
    for (float v : r.pixels()) CHECK(v == doctest::Approx(0.7f).epsilon(1e-6));
  }
}

TEST_CASE("identity resize is bit-identical") {
  GrayMap g(4, 3);
  for (std::size_t i = 0; i < g.pixel_count(); ++i) g[i] = 0.1f * static_cast<float>(i);
  CHECK(resize_bilinear(g, 4, 3) == g);
}

TEST_CASE("bilinear 2x1 -> 4x1 matches weights and is monotone") {
  GrayMap g(2, 1);
  g[0] = 0.0f;
  g[1] = 1.0f;
  const GrayMap r = resize_bilinear(g, 4, 1);
  // Pixel-center mapping: dst x -> src (x + 0.5) / 2 - 0.5, clamped to [0, 1].
  const float expected[4] = {0.0f, 0.25f, 0.75f, 1.0f};
  for (int x = 0; x < 4; ++x) CHECK(r[x] == doctest::Approx(expected[x]));
  for (int x = 1; x < 4; ++x) CHECK(r[x] >= r[x - 1]);
}

TEST_CASE("resize stays within the source range") {
  GrayMap g(5, 4);
  for (std::size_t i = 0; i < g.pixel_count(); ++i) g[i] = 0.2f + 0.03f * static_cast<float>(i % 7);
  const auto [lo, hi] = std::minmax_element(g.pixels().begin(), g.pixels().end());
  const GrayMap r = resize_bilinear(g, 13, 17);
  for (float v : r.pixels()) {
    CHECK(v >= *lo);
    CHECK(v <= *hi);
  }
  CHECK_THROWS_AS(resize_bilinear(g, 0, 3), Error);
}

TEST_CASE("nearest trimap resize maps the window center to the source center") {
  for (int size : {320, 480, 640}) {
    Trimap t(size, size, Trimap::kBackground);
    t.at(size / 2, size / 2) = Trimap::kUnknown;
    const Trimap r = resize_nearest(t, 320, 320);
    CHECK(r.at(160, 160) == Trimap::kUnknown);
  }
}

TEST_CASE("crop and flip") {
  Plane<int> p(4, 2);
  for (std::size_t i = 0; i < p.pixel_count(); ++i) p[i] = static_cast<int>(i);
  const Plane<int> c = crop(p, 1, 1, 2, 1);
  CHECK(c[0] == 5);
  CHECK(c[1] == 6);
  const Plane<int> f = flip_horizontal(p);
  CHECK(f.at(0, 0) == 3);
  CHECK(flip_horizontal(f) == p);
  CHECK_THROWS_AS(crop(p, 3, 0, 2, 1), Error);
}
