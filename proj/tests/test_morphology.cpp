#include <doctest.h>

#include <cmath>
#include <random>

#include "mattekit/morphology.hpp"
#include "oracles.hpp"

using namespace mattekit;

TEST_CASE("single pixel dilated by 1 gives the plus shape") {
  BinaryMask m(5, 5);
  m.set(2, 2);
  const BinaryMask d = dilate(m, 1);
  CHECK(d.count() == 5);
  CHECK(d.test(2, 1));
  CHECK(d.test(1, 2));
  CHECK(d.test(3, 2));
  CHECK(d.test(2, 3));
  CHECK_FALSE(d.test(1, 1));
}

TEST_CASE("radius 0 is the identity") {
  std::mt19937 rng(3);
  const BinaryMask m = oracle::random_mask(9, 7, 0.5, rng);
  CHECK(dilate(m, 0) == m);
  CHECK(erode(m, 0) == m);
}

TEST_CASE("dilate and erode match brute-force definitions") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const BinaryMask m = oracle::random_mask(16, 16, trial % 2 ? 0.15 : 0.6, rng);
    for (int r = 0; r <= 4; ++r) {
      CHECK(dilate(m, r) == oracle::dilate(m, r));
      CHECK(erode(m, r) == oracle::erode_by_duality(m, r));
    }
  }
}

TEST_CASE("frame acts as background for erosion") {
  BinaryMask full(7, 7, 1);
  const BinaryMask e = erode(full, 2);
  CHECK_FALSE(e.test(0, 3));
  CHECK_FALSE(e.test(1, 3));
  CHECK(e.test(2, 3));
  CHECK(e.test(3, 3));
  CHECK(dilate(full, 3) == full);
}

TEST_CASE("distance transform matches brute force") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const BinaryMask m = oracle::random_mask(13 + trial, 11, 0.7, rng);
    const GrayMap d = distance_transform(m);
    const auto ref = oracle::distance(m);
    for (std::size_t i = 0; i < m.pixel_count(); ++i)
      CHECK(d[i] == doctest::Approx(ref[i]).epsilon(1e-6));
  }
}

TEST_CASE("squared distance without seeds is infinite") {
  const auto d = squared_distance_to(BinaryMask(4, 3), Frame::kIgnore);
  for (double v : d) CHECK(std::isinf(v));
  const auto framed = squared_distance_to(BinaryMask(4, 3), Frame::kSeed);
  CHECK(framed[0] == 1.0);
}

TEST_CASE("disk of radius 50 peaks near 50") {
  const BinaryMask m = oracle::disk(151, 151, 75, 75, 50);
  const GrayMap d = distance_transform(m);
  const float peak = *std::max_element(d.pixels().begin(), d.pixels().end());
  CHECK(peak >= 49.0f);
  CHECK(peak <= 51.0f);
  CHECK(d.at(75, 75) == peak);
}

TEST_CASE("boundary pixels are true with a false 4-neighbor") {
  std::mt19937 rng(1);
  const BinaryMask m = oracle::random_mask(12, 10, 0.6, rng);
  const BinaryMask b = boundary(m);
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      auto off = [&](int qx, int qy) {
        return qx < 0 || qy < 0 || qx >= m.width() || qy >= m.height() || !m.test(qx, qy);
      };
      const bool expected =
          m.test(x, y) && (off(x - 1, y) || off(x + 1, y) || off(x, y - 1) || off(x, y + 1));
      CHECK(b.test(x, y) == expected);
    }
  CHECK(boundary(BinaryMask(5, 5)).count() == 0);
}

TEST_CASE("small cases") {
  BinaryMask dot(5, 5);
  dot.set(2, 2);
  CHECK(erode(dot, 1).count() == 0);
  CHECK(distance_transform(dot).at(2, 2) == 1.0f);
  CHECK(boundary(dot) == dot);
  const GrayMap empty_dt = distance_transform(BinaryMask(6, 4));
  for (float v : empty_dt.pixels()) CHECK(v == 0.0f);

  BinaryMask square(5, 5);
  for (int y = 1; y <= 3; ++y)
    for (int x = 1; x <= 3; ++x) square.set(x, y);
  const BinaryMask b = boundary(square);
  CHECK(b.count() == 8);
  CHECK_FALSE(b.test(2, 2));
}

TEST_CASE("closing contains a convex blob") {
  const BinaryMask m = oracle::disk(40, 40, 20, 20, 9);
  for (int r = 1; r <= 5; ++r) {
    const BinaryMask closed = erode(dilate(m, r), r);
    CHECK((m - closed).count() == 0);
  }
}
