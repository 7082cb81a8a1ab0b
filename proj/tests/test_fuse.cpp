#include <doctest.h>

#include <cstring>
#include <fstream>
#include <random>

#include "mattekit/fuse.hpp"
#include "mattekit/log.hpp"
#include "oracles.hpp"

using namespace mattekit;

namespace {

ProbTrimap random_prob(int w, int h, std::mt19937& rng) {
  std::uniform_real_distribution<float> u(0.01f, 1.0f);
  ProbTrimap p(w, h);
  for (std::size_t i = 0; i < p.bg.pixel_count(); ++i) {
    const float b = u(rng), k = u(rng), f = u(rng), s = b + k + f;
    p.bg[i] = b / s;
    p.unknown[i] = k / s;
    p.fg[i] = f / s;
  }
  return p;
}

ProbTrimap constant_prob(int w, int h, float b, float u, float f) {
  ProbTrimap p(w, h);
  p.bg.fill(b);
  p.unknown.fill(u);
  p.fg.fill(f);
  return p;
}

/// Captures library warnings for the lifetime of the object.
struct WarningCapture {
  std::vector<std::string> messages;
  WarningCapture() {
    set_warning_handler([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~WarningCapture() { set_warning_handler(nullptr); }
};

}  // namespace

TEST_CASE("fusion identities") {
  std::mt19937 rng(1);
  const AlphaMatte am = oracle::random_alpha(6, 6, rng);
  const AlphaMatte solid = fuse(constant_prob(6, 6, 0, 0, 1), am);
  for (float v : solid.pixels()) CHECK(v == 1.0f);
  CHECK(fuse(constant_prob(6, 6, 0, 1, 0), am) == am);
  const AlphaMatte mixed = fuse(constant_prob(1, 1, 0.3f, 0.5f, 0.2f), AlphaMatte(1, 1, 0.6f));
  CHECK(mixed[0] == doctest::Approx(0.5f).epsilon(1e-6));
  CHECK_THROWS_AS(fuse(ProbTrimap(2, 2), AlphaMatte(3, 2)), Error);
}

TEST_CASE("harden: argmax with ties going to unknown") {
  CHECK(harden(constant_prob(2, 2, 1.0f / 3, 1.0f / 3, 1.0f / 3))[0] == Trimap::kUnknown);
  CHECK(harden(constant_prob(1, 1, 0.45f, 0.1f, 0.45f))[0] == Trimap::kUnknown);
  CHECK(harden(constant_prob(1, 1, 0.2f, 0.4f, 0.4f))[0] == Trimap::kUnknown);
  CHECK(harden(constant_prob(1, 1, 0.5f, 0.2f, 0.3f))[0] == Trimap::kBackground);
  CHECK(harden(constant_prob(1, 1, 0.1f, 0.2f, 0.7f))[0] == Trimap::kForeground);

  std::mt19937 rng(2);
  const ProbTrimap p = random_prob(20, 20, rng);
  const Trimap t = harden(p);
  for (std::size_t i = 0; i < t.pixel_count(); ++i) {
    const float b = p.bg[i], u = p.unknown[i], f = p.fg[i];
    const std::uint8_t expected = (b > u && b > f) ? 0 : (f > u && f > b) ? 255 : 128;
    CHECK(t[i] == expected);
  }
}

TEST_CASE("soften is inverted by harden") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pick(0, 2);
  const std::uint8_t v[3] = {0, 128, 255};
  Trimap t(9, 7);
  for (auto& x : t.pixels()) x = v[pick(rng)];
  const ProbTrimap p = soften(t);
  CHECK(p.valid());
  CHECK(harden(p) == t);
  const ProbTrimap solid = soften(Trimap(3, 3, 255));
  for (float f : solid.fg.pixels()) CHECK(f == 1.0f);

  const AlphaMatte am = oracle::random_alpha(9, 7, rng);
  const AlphaMatte fused = fuse(p, am);
  for (std::size_t i = 0; i < t.pixel_count(); ++i) {
    if (t[i] == Trimap::kUnknown) CHECK(fused[i] == am[i]);
    if (t[i] == Trimap::kForeground) CHECK(fused[i] == 1.0f);
    if (t[i] == Trimap::kBackground) CHECK(fused[i] == 0.0f);
  }
}

TEST_CASE("PTM round trip is bitwise") {
  oracle::TempDir dir("ptm");
  std::mt19937 rng(4);
  const ProbTrimap p = random_prob(13, 8, rng);
  write_ptm(p, dir / "p.ptm");
  const PtmReadResult r = read_ptm(dir / "p.ptm");
  CHECK(r.renormalized == 0);
  CHECK(r.prob.size() == p.size());
  CHECK(std::memcmp(r.prob.fg.pixels().data(), p.fg.pixels().data(), 13 * 8 * 4) == 0);
  CHECK(std::memcmp(r.prob.unknown.pixels().data(), p.unknown.pixels().data(), 13 * 8 * 4) == 0);
  CHECK(std::memcmp(r.prob.bg.pixels().data(), p.bg.pixels().data(), 13 * 8 * 4) == 0);
}

TEST_CASE("PTM header layout") {
  oracle::TempDir dir("ptm");
  write_ptm(constant_prob(3, 2, 0, 0, 1), dir / "p.ptm");
  std::ifstream in(dir / "p.ptm", std::ios::binary);
  std::vector<unsigned char> b((std::istreambuf_iterator<char>(in)), {});
  REQUIRE(b.size() == 16 + 3 * 6 * 4);
  CHECK(std::memcmp(b.data(), "PTMAP\0\0\1", 8) == 0);
  CHECK(b[8] == 3);
  CHECK(b[12] == 2);
  // First foreground float (1.0f = 0x3F800000, little-endian).
  const std::size_t fg0 = 16 + 2 * 6 * 4;
  CHECK(b[fg0 + 3] == 0x3F);
  CHECK(b[fg0 + 2] == 0x80);
}

TEST_CASE("PTM read errors") {
  oracle::TempDir dir("ptm");
  std::mt19937 rng(5);
  write_ptm(random_prob(4, 4, rng), dir / "p.ptm");
  std::filesystem::resize_file(dir / "p.ptm", 16 + 4 * 4 * 4 * 3 - 2);
  CHECK_THROWS_AS(read_ptm(dir / "p.ptm"), Error);
  std::filesystem::resize_file(dir / "p.ptm", 10);
  CHECK_THROWS_AS(read_ptm(dir / "p.ptm"), Error);

  write_ptm(random_prob(4, 4, rng), dir / "m.ptm");
  {
    std::fstream f(dir / "m.ptm", std::ios::in | std::ios::out | std::ios::binary);
    f.put('X');
  }
  CHECK_THROWS_AS(read_ptm(dir / "m.ptm"), Error);

  write_ptm(constant_prob(2, 2, -0.5f, 0.5f, 1.0f), dir / "neg.ptm");
  CHECK_THROWS_AS(read_ptm(dir / "neg.ptm"), Error);
  write_ptm(constant_prob(2, 2, 0, 0, 0), dir / "zero.ptm");
  CHECK_THROWS_AS(read_ptm(dir / "zero.ptm"), Error);
  CHECK_THROWS_AS(read_ptm(dir / "missing.ptm"), Error);
}

TEST_CASE("PTM planes off by 5e-4 are renormalized with a warning") {
  oracle::TempDir dir("ptm");
  write_ptm(constant_prob(3, 3, 0.2001f, 0.3002f, 0.5002f), dir / "p.ptm");
  WarningCapture capture;
  const PtmReadResult r = read_ptm(dir / "p.ptm");
  CHECK(r.renormalized == 9);
  REQUIRE(capture.messages.size() == 1);
  for (std::size_t i = 0; i < 9; ++i) {
    const double s = double(r.prob.bg[i]) + r.prob.unknown[i] + r.prob.fg[i];
    CHECK(std::abs(s - 1.0) <= 1e-6);
  }
  CHECK(r.prob.valid());
}
