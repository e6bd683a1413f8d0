#include "fairlens/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstring>

#include "byte_io.hpp"
#include "fairlens/error.hpp"

namespace fairlens {
namespace {

void on_png_error(png_structp png, png_const_charp msg) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text != nullptr) *text = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

void write_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void read_from_span(png_structp png, png_bytep data, png_size_t length) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->bytes.size() - cur->pos < length) png_error(png, "unexpected end of PNG data");
  std::memcpy(data, cur->bytes.data() + cur->pos, length);
  cur->pos += length;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
  if (image.width == 0 || image.height == 0 ||
      image.pixels.size() != image.width * image.height * 3) {
    throw Error(ErrorCode::kInvalidArgument, "cannot encode an empty or inconsistent raster");
  }
  std::string message;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, on_png_error, on_png_warning);
  if (png == nullptr) throw Error(ErrorCode::kIo, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<std::uint8_t> out;
  std::vector<png_bytep> rows(image.height);

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "PNG encoding failed: " + message);
  }
  png_set_write_fn(png, &out, write_to_vector, nullptr);
  png_set_compression_level(png, 9);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t y = 0; y < image.height; ++y) {
    rows[y] = const_cast<png_bytep>(image.pixels.data() + y * image.width * 3);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

RgbImage decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw Error(ErrorCode::kUnsupported, "unsupported format: not a PNG file");
  }
  std::string message;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, on_png_error, on_png_warning);
  if (png == nullptr) throw Error(ErrorCode::kIo, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  ReadCursor cursor{bytes, 0};
  RgbImage image;
  std::vector<png_bytep> rows;
  // Set inside the protected region; the error path reports it.
  volatile bool bad_format = false;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    if (bad_format) {
      throw Error(ErrorCode::kUnsupported, "unsupported format: expected 8-bit RGB PNG");
    }
    throw Error(ErrorCode::kMalformedInput, "PNG decoding failed: " + message);
  }
  png_set_read_fn(png, &cursor, read_from_span);
  png_read_info(png, info);
  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  if (png_get_bit_depth(png, info) != 8 || png_get_color_type(png, info) != PNG_COLOR_TYPE_RGB ||
      png_get_interlace_type(png, info) != PNG_INTERLACE_NONE) {
    bad_format = true;
    png_error(png, "format");
  }
  image = RgbImage(w, h);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = image.pixels.data() + y * w * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

ImageTensor to_image_tensor(const RgbImage& image) {
  Tensor3 t(Shape3{3, image.height, image.width});
  for (std::size_t y = 0; y < image.height; ++y) {
    for (std::size_t x = 0; x < image.width; ++x) {
      const std::uint8_t* px = image.at(x, y);
      for (std::size_t c = 0; c < 3; ++c) t.at(c, y, x) = px[c] / 255.0;
    }
  }
  return ImageTensor(std::move(t));
}

RgbImage to_rgb_image(const ImageTensor& image) {
  RgbImage out(image.width(), image.height());
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      std::uint8_t* px = out.at(x, y);
      for (std::size_t c = 0; c < 3; ++c) {
        px[c] = static_cast<std::uint8_t>(std::lround(std::clamp(image(c, y, x), 0.0, 1.0) * 255.0));
      }
    }
  }
  return out;
}

ImageTensor load_face_image(const std::string& path) {
  try {
    const RgbImage rgb = decode_png(detail::read_file_bytes(path));
    if (rgb.width != kFaceSize || rgb.height != kFaceSize) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "wrong dimensions " + std::to_string(rgb.width) + "x" +
                      std::to_string(rgb.height) + ", expected 112x112");
    }
    return to_image_tensor(rgb);
  } catch (const Error& err) {
    throw Error(err.code(), path + ": " + err.what());
  }
}

}  // namespace fairlens
