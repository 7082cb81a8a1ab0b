#include "mattekit/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>

namespace mattekit {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) {
    throw Error("cannot open " + path.string());
  }
  return f;
}

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  if (what) *what = msg;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

/// Decoded samples before normalization: interleaved, `channels` per pixel,
/// each normalized to [0,1].
struct Decoded {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> samples;
};

Decoded decode(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw Error(path.string() + ": not a PNG file");
  }

  std::string err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err,
                                           png_error_fn, png_warning_fn);
  if (!png) throw Error("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("libpng init failed");
  }

  Decoded out;
  std::vector<png_bytep> rows;
  std::vector<png_byte> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(path.string() + ": " + (err.empty() ? "decode error" : err));
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  const int depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  buffer.resize(rowbytes * out.height);
  rows.resize(out.height);
  for (int y = 0; y < out.height; ++y) rows[y] = buffer.data() + rowbytes * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const std::size_t n = static_cast<std::size_t>(out.width) * out.height * out.channels;
  out.samples.resize(n);
  if (depth == 16) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<std::uint16_t>((buffer[2 * i] << 8) | buffer[2 * i + 1]);
      out.samples[i] = static_cast<float>(v) / 65535.0f;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      out.samples[i] = static_cast<float>(buffer[i]) / 255.0f;
    }
  }
  return out;
}

Plane<float> channel_plane(const Decoded& d, int c) {
  Plane<float> p(d.width, d.height);
  auto dst = p.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = d.samples[i * d.channels + c];
  }
  return p;
}

Plane<float> single_channel(const std::filesystem::path& path) {
  Decoded d = decode(path);
  if (d.channels != 1) {
    throw Error(path.string() + ": expected a single-channel PNG, found " +
                std::to_string(d.channels) + " channels");
  }
  return channel_plane(d, 0);
}

std::uint8_t to_byte(float v) {
  if (!(v > 0.0f)) return 0;
  if (v >= 1.0f) return 255;
  return static_cast<std::uint8_t>(std::lround(v * 255.0f));
}

void encode(const std::filesystem::path& path, int width, int height,
            int channels, const std::vector<png_byte>& bytes) {
  FilePtr file = open_file(path, "wb");
  std::string err;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err,
                                            png_error_fn, png_warning_fn);
  if (!png) throw Error("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("libpng init failed");
  }
  std::vector<png_const_bytep> rows(height);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(path.string() + ": " + (err.empty() ? "encode error" : err));
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y) rows[y] = bytes.data() + stride * y;
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) {
    throw Error("write failed: " + path.string());
  }
}

void require_nonempty(Size s, const std::filesystem::path& path) {
  if (s.width <= 0 || s.height <= 0) {
    throw Error("refusing to write empty raster to " + path.string());
  }
}

}  // namespace

std::uint8_t snap_trimap_byte(std::uint8_t b) {
  const int d0 = b;
  const int d128 = std::abs(static_cast<int>(b) - 128);
  const int d255 = 255 - b;
  if (d128 <= d0 && d128 <= d255) return Trimap::kUnknown;
  return d0 < d255 ? Trimap::kBackground : Trimap::kForeground;
}

Image load_image(const std::filesystem::path& path) {
  Decoded d = decode(path);
  if (d.channels != 3 && d.channels != 4) {
    throw Error(path.string() + ": expected an RGB PNG, found " +
                std::to_string(d.channels) + " channels");
  }
  return Image(channel_plane(d, 0), channel_plane(d, 1), channel_plane(d, 2));
}

GrayMap load_gray(const std::filesystem::path& path) {
  return GrayMap(single_channel(path));
}

BinaryMask load_mask(const std::filesystem::path& path) {
  Plane<float> p = single_channel(path);
  BinaryMask m(p.size());
  auto src = p.pixels();
  auto dst = m.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] >= 0.5f ? 1 : 0;
  return m;
}

LoadedTrimap load_trimap(const std::filesystem::path& path) {
  Plane<float> p = single_channel(path);
  LoadedTrimap out{Trimap(p.size()), false};
  auto src = p.pixels();
  auto dst = out.trimap.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const std::uint8_t b = to_byte(src[i]);
    dst[i] = snap_trimap_byte(b);
    out.snapped |= dst[i] != b;
  }
  return out;
}

AlphaMatte load_alpha(const std::filesystem::path& path) {
  Decoded d = decode(path);
  int c = 0;
  switch (d.channels) {
    case 1: c = 0; break;
    case 2: c = 1; break;
    case 4: c = 3; break;
    default:
      throw Error(path.string() + ": no alpha or gray channel in a " +
                  std::to_string(d.channels) + "-channel PNG");
  }
  return AlphaMatte::clamped(channel_plane(d, c));
}

void save_png(const Image& image, const std::filesystem::path& path) {
  require_nonempty(image.size(), path);
  const std::size_t n = static_cast<std::size_t>(image.width()) * image.height();
  std::vector<png_byte> bytes(n * 3);
  for (int c = 0; c < 3; ++c) {
    auto src = image.channel(c).pixels();
    for (std::size_t i = 0; i < n; ++i) bytes[i * 3 + c] = to_byte(src[i]);
  }
  encode(path, image.width(), image.height(), 3, bytes);
}

void save_png(const Plane<float>& plane, const std::filesystem::path& path) {
  require_nonempty(plane.size(), path);
  auto src = plane.pixels();
  std::vector<png_byte> bytes(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) bytes[i] = to_byte(src[i]);
  encode(path, plane.width(), plane.height(), 1, bytes);
}

void save_png(const BinaryMask& mask, const std::filesystem::path& path) {
  require_nonempty(mask.size(), path);
  auto src = mask.pixels();
  std::vector<png_byte> bytes(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) bytes[i] = src[i] ? 255 : 0;
  encode(path, mask.width(), mask.height(), 1, bytes);
}

void save_png(const Trimap& trimap, const std::filesystem::path& path) {
  require_nonempty(trimap.size(), path);
  auto src = trimap.pixels();
  std::vector<png_byte> bytes(src.begin(), src.end());
  encode(path, trimap.width(), trimap.height(), 1, bytes);
}

}  // namespace mattekit
