#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mattekit {

/// Raised for every contract violation in the library (bad dimensions,
/// unreadable files, malformed interchange data).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Size {
  int width = 0;
  int height = 0;

  friend bool operator==(const Size&, const Size&) = default;
};

std::string to_string(Size s);

/// Row-major single-channel raster.
template <typename T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;
  Plane(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) {
      throw Error("negative raster dimensions");
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  explicit Plane(Size s, T fill = T{}) : Plane(s.width, s.height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  Size size() const { return {width_, height_}; }
  std::size_t pixel_count() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }
  const T* row(int y) const {
    return data_.data() + static_cast<std::size_t>(y) * width_;
  }

  std::span<T> pixels() { return data_; }
  std::span<const T> pixels() const { return data_; }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Unbounded float samples: distance maps, pyramid levels, loss intermediates.
class GrayMap : public Plane<float> {
 public:
  using Plane::Plane;
  explicit GrayMap(Plane<float> p) : Plane(std::move(p)) {}
};

/// Opacity in [0,1].
class AlphaMatte : public Plane<float> {
 public:
  using Plane::Plane;

  /// Copies `p`, clamping every sample into [0,1].
  static AlphaMatte clamped(const Plane<float>& p);
};

/// Two-valued mask stored as 0/1 bytes.
class BinaryMask : public Plane<std::uint8_t> {
 public:
  using Plane::Plane;

  bool test(int x, int y) const { return at(x, y) != 0; }
  void set(int x, int y, bool v = true) { at(x, y) = v ? 1 : 0; }
  std::size_t count() const;
  BinaryMask complement() const;
};

BinaryMask operator&(const BinaryMask& a, const BinaryMask& b);
BinaryMask operator|(const BinaryMask& a, const BinaryMask& b);
/// Set difference a \ b.
BinaryMask operator-(const BinaryMask& a, const BinaryMask& b);

/// Hard trimap with samples in {0, 128, 255}.
class Trimap : public Plane<std::uint8_t> {
 public:
  static constexpr std::uint8_t kBackground = 0;
  static constexpr std::uint8_t kUnknown = 128;
  static constexpr std::uint8_t kForeground = 255;

  using Plane::Plane;

  BinaryMask region(std::uint8_t value) const;
  BinaryMask unknown() const { return region(kUnknown); }
  /// True when every sample is one of the three trimap values.
  bool valid() const;
};

/// Three float planes (R, G, B) in [0,1] sharing one size.
class Image {
 public:
  Image() = default;
  Image(int width, int height, float fill = 0.0f);
  explicit Image(Size s, float fill = 0.0f) : Image(s.width, s.height, fill) {}
  Image(Plane<float> r, Plane<float> g, Plane<float> b);

  int width() const { return channels_[0].width(); }
  int height() const { return channels_[0].height(); }
  Size size() const { return channels_[0].size(); }

  Plane<float>& channel(int c) { return channels_[c]; }
  const Plane<float>& channel(int c) const { return channels_[c]; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::array<Plane<float>, 3> channels_;
};

template <typename A, typename B>
void require_same_size(const A& a, const B& b, const char* what) {
  if (a.size() != b.size()) {
    throw Error(std::string(what) + ": dimension mismatch (" +
                to_string(a.size()) + " vs " + to_string(b.size()) + ")");
  }
}

}  // namespace mattekit
