#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairlens/forward.hpp"

namespace fairlens {

// 8-bit interleaved RGB raster.
struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // height * width * 3

  RgbImage() = default;
  RgbImage(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h * 3, 0) {}

  std::uint8_t* at(std::size_t x, std::size_t y) { return &pixels[(y * width + x) * 3]; }
  const std::uint8_t* at(std::size_t x, std::size_t y) const {
    return &pixels[(y * width + x) * 3];
  }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// Deterministic encoding: fixed compression settings and no time or text
// chunks, so equal rasters give equal bytes.
std::vector<std::uint8_t> encode_png(const RgbImage& image);

// Accepts 8-bit RGB PNGs only.
RgbImage decode_png(std::span<const std::uint8_t> bytes);

ImageTensor to_image_tensor(const RgbImage& image);
RgbImage to_rgb_image(const ImageTensor& image);

// Loads an aligned face crop: 8-bit RGB, exactly 112x112, scaled by 1/255.
ImageTensor load_face_image(const std::string& path);

}  // namespace fairlens
