#include "mattekit/fuse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "mattekit/log.hpp"

namespace mattekit {
namespace {

constexpr float kSumTolerance = 1e-4f;

void put_u32(std::vector<char>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

ProbTrimap::ProbTrimap(int width, int height)
    : bg(width, height), unknown(width, height), fg(width, height) {}

bool ProbTrimap::valid(float tolerance) const {
  if (bg.size() != unknown.size() || bg.size() != fg.size()) return false;
  auto b = bg.pixels();
  auto u = unknown.pixels();
  auto f = fg.pixels();
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (float v : {b[i], u[i], f[i]}) {
      if (!(v >= 0.0f && v <= 1.0f)) return false;
    }
    if (std::abs(b[i] + u[i] + f[i] - 1.0f) > tolerance) return false;
  }
  return true;
}

AlphaMatte fuse(const ProbTrimap& prob, const AlphaMatte& alpha_m) {
  require_same_size(prob, alpha_m, "fuse");
  AlphaMatte out(alpha_m.size());
  auto f = prob.fg.pixels();
  auto u = prob.unknown.pixels();
  auto a = alpha_m.pixels();
  auto d = out.pixels();
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = std::clamp(f[i] + u[i] * a[i], 0.0f, 1.0f);
  }
  return out;
}

Trimap harden(const ProbTrimap& prob) {
  Trimap out(prob.size());
  auto b = prob.bg.pixels();
  auto u = prob.unknown.pixels();
  auto f = prob.fg.pixels();
  auto d = out.pixels();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (b[i] > u[i] && b[i] > f[i]) {
      d[i] = Trimap::kBackground;
    } else if (f[i] > u[i] && f[i] > b[i]) {
      d[i] = Trimap::kForeground;
    } else {
      d[i] = Trimap::kUnknown;
    }
  }
  return out;
}

ProbTrimap soften(const Trimap& trimap) {
  ProbTrimap out(trimap.size());
  auto t = trimap.pixels();
  auto b = out.bg.pixels();
  auto u = out.unknown.pixels();
  auto f = out.fg.pixels();
  for (std::size_t i = 0; i < t.size(); ++i) {
    b[i] = t[i] == Trimap::kBackground ? 1.0f : 0.0f;
    u[i] = t[i] == Trimap::kUnknown ? 1.0f : 0.0f;
    f[i] = t[i] == Trimap::kForeground ? 1.0f : 0.0f;
  }
  return out;
}

void write_ptm(const ProbTrimap& prob, const std::filesystem::path& path) {
  if (prob.bg.size() != prob.unknown.size() || prob.bg.size() != prob.fg.size()) {
    throw Error("write_ptm: planes differ in size");
  }
  std::vector<char> buf(kPtmMagic.begin(), kPtmMagic.end());
  put_u32(buf, static_cast<std::uint32_t>(prob.width()));
  put_u32(buf, static_cast<std::uint32_t>(prob.height()));
  for (const Plane<float>* plane : {&prob.bg, &prob.unknown, &prob.fg}) {
    for (float v : plane->pixels()) put_u32(buf, std::bit_cast<std::uint32_t>(v));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("write failed: " + path.string());
}

PtmReadResult read_ptm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  constexpr std::size_t kHeader = 16;
  if (buf.size() < kHeader) throw Error(path.string() + ": truncated PTM header");
  if (!std::equal(kPtmMagic.begin(), kPtmMagic.end(), buf.begin(),
                  [](char a, unsigned char b) { return static_cast<unsigned char>(a) == b; })) {
    throw Error(path.string() + ": bad PTM magic");
  }
  const std::uint32_t w = get_u32(buf.data() + 8);
  const std::uint32_t h = get_u32(buf.data() + 12);
  const std::uint64_t n = static_cast<std::uint64_t>(w) * h;
  if (w > 1u << 20 || h > 1u << 20 || buf.size() != kHeader + 12 * n) {
    throw Error(path.string() + ": PTM payload does not match header " +
                std::to_string(w) + "x" + std::to_string(h));
  }

  PtmReadResult result{ProbTrimap(static_cast<int>(w), static_cast<int>(h)), 0};
  const unsigned char* p = buf.data() + kHeader;
  for (Plane<float>* plane : {&result.prob.bg, &result.prob.unknown, &result.prob.fg}) {
    for (float& v : plane->pixels()) {
      v = std::bit_cast<float>(get_u32(p));
      p += 4;
    }
  }

  auto b = result.prob.bg.pixels();
  auto u = result.prob.unknown.pixels();
  auto f = result.prob.fg.pixels();
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i] >= 0.0f && u[i] >= 0.0f && f[i] >= 0.0f)) {
      throw Error(path.string() + ": negative or NaN probability at pixel " +
                  std::to_string(i));
    }
    const double sum = static_cast<double>(b[i]) + u[i] + f[i];
    if (sum <= 0.0) {
      throw Error(path.string() + ": all-zero distribution at pixel " + std::to_string(i));
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      b[i] = static_cast<float>(b[i] / sum);
      u[i] = static_cast<float>(u[i] / sum);
      f[i] = static_cast<float>(f[i] / sum);
      ++result.renormalized;
    }
  }
  if (result.renormalized > 0) {
    warn(path.string() + ": renormalized " + std::to_string(result.renormalized) +
         " pixel(s) whose probabilities did not sum to 1");
  }
  return result;
}

}  // namespace mattekit
