#include <doctest.h>

#include <png.h>

#include <cstdio>
#include <random>

#include "mattekit/png_io.hpp"
#include "oracles.hpp"

using namespace mattekit;

namespace {

// Writes raw bytes with libpng directly, independent of save_png.
void write_raw(const std::filesystem::path& path, int w, int h, int color_type, int depth,
               const std::vector<unsigned char>& bytes) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  REQUIRE(f);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, f);
  png_set_IHDR(png, info, w, h, depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3
                       : color_type == PNG_COLOR_TYPE_RGBA ? 4
                       : color_type == PNG_COLOR_TYPE_GRAY_ALPHA ? 2 : 1;
  const std::size_t stride = static_cast<std::size_t>(w) * channels * (depth / 8);
  for (int y = 0; y < h; ++y) png_write_row(png, bytes.data() + stride * y);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
}

}  // namespace

TEST_CASE("full-scale gray byte loads as 1.0") {
  oracle::TempDir dir("png");
  write_raw(dir / "one.png", 1, 1, PNG_COLOR_TYPE_GRAY, 8, {255});
  const GrayMap g = load_gray(dir / "one.png");
  REQUIRE(g.size() == Size{1, 1});
  CHECK(g[0] == 1.0f);
}

TEST_CASE("trimap byte 127 snaps to 128 and sets the flag") {
  oracle::TempDir dir("png");
  write_raw(dir / "t.png", 1, 1, PNG_COLOR_TYPE_GRAY, 8, {127});
  const LoadedTrimap t = load_trimap(dir / "t.png");
  CHECK(t.trimap[0] == 128);
  CHECK(t.snapped);

  write_raw(dir / "exact.png", 3, 1, PNG_COLOR_TYPE_GRAY, 8, {0, 128, 255});
  CHECK_FALSE(load_trimap(dir / "exact.png").snapped);
}

TEST_CASE("snap rule: nearest value, ties go to 128") {
  CHECK(snap_trimap_byte(63) == 0);
  CHECK(snap_trimap_byte(64) == 128);
  CHECK(snap_trimap_byte(191) == 128);
  CHECK(snap_trimap_byte(192) == 255);
}

TEST_CASE("gray bytes normalize by 255") {
  oracle::TempDir dir("png");
  write_raw(dir / "g.png", 2, 2, PNG_COLOR_TYPE_GRAY, 8, {0, 64, 128, 255});
  const GrayMap g = load_gray(dir / "g.png");
  const float expected[4] = {0.0f, 64.0f / 255.0f, 128.0f / 255.0f, 1.0f};
  for (int i = 0; i < 4; ++i) CHECK(g[i] == doctest::Approx(expected[i]).epsilon(1e-7));
}

TEST_CASE("16-bit gray is accepted") {
  oracle::TempDir dir("png");
  // Big-endian samples 0x0000, 0x8000, 0xFFFF.
  write_raw(dir / "g16.png", 3, 1, PNG_COLOR_TYPE_GRAY, 16, {0x00, 0x00, 0x80, 0x00, 0xFF, 0xFF});
  const GrayMap g = load_gray(dir / "g16.png");
  CHECK(g[0] == 0.0f);
  CHECK(g[1] == doctest::Approx(32768.0 / 65535.0));
  CHECK(g[2] == 1.0f);
}

TEST_CASE("channel count is enforced per kind") {
  oracle::TempDir dir("png");
  write_raw(dir / "rgb.png", 1, 1, PNG_COLOR_TYPE_RGB, 8, {1, 2, 3});
  write_raw(dir / "gray.png", 1, 1, PNG_COLOR_TYPE_GRAY, 8, {9});
  CHECK_THROWS_AS(load_gray(dir / "rgb.png"), Error);
  CHECK_THROWS_AS(load_trimap(dir / "rgb.png"), Error);
  CHECK_THROWS_AS(load_image(dir / "gray.png"), Error);
  CHECK_THROWS_AS(load_gray(dir / "missing.png"), Error);
}

TEST_CASE("alpha channel of RGBA cut-outs") {
  oracle::TempDir dir("png");
  write_raw(dir / "cut.png", 2, 1, PNG_COLOR_TYPE_RGBA, 8, {10, 20, 30, 0, 40, 50, 60, 255});
  const AlphaMatte a = load_alpha(dir / "cut.png");
  CHECK(a[0] == 0.0f);
  CHECK(a[1] == 1.0f);
}

TEST_CASE("unreadable file is reported") {
  oracle::TempDir dir("png");
  {
    std::FILE* f = std::fopen((dir / "junk.png").c_str(), "wb");
    std::fputs("definitely not a png", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_gray(dir / "junk.png"), Error);
}

TEST_CASE("round trips") {
  oracle::TempDir dir("png");
  std::mt19937 rng(11);

  Trimap t(5, 4);
  std::uniform_int_distribution<int> pick(0, 2);
  const std::uint8_t values[3] = {0, 128, 255};
  for (auto& v : t.pixels()) v = values[pick(rng)];
  save_png(t, dir / "t.png");
  CHECK(load_trimap(dir / "t.png").trimap == t);

  GrayMap half(6, 3, 0.5f);
  save_png(half, dir / "half.png");
  const GrayMap half_back = load_gray(dir / "half.png");
  for (float v : half_back.pixels()) CHECK(std::abs(v - 0.5f) <= 1.0f / 255.0f);

  // Rounding to the nearest byte bounds the error by half a step.
  Image img(9, 7);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (int c = 0; c < 3; ++c)
    for (auto& v : img.channel(c).pixels()) v = u(rng);
  save_png(img, dir / "img.png");
  const Image back = load_image(dir / "img.png");
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < back.channel(c).pixel_count(); ++i)
      CHECK(std::abs(back.channel(c)[i] - img.channel(c)[i]) <= 1.0f / 510.0f + 1e-7f);

  BinaryMask m = oracle::random_mask(8, 8, 0.4, rng);
  save_png(m, dir / "m.png");
  CHECK(load_mask(dir / "m.png") == m);
}

TEST_CASE("writing into a missing directory fails") {
  CHECK_THROWS_AS(save_png(GrayMap(2, 2), "/nonexistent_dir_xyz/out.png"), Error);
}
