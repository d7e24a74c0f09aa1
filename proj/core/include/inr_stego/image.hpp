#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace inr_stego {

/// 8-bit RGB image, pixels interleaved row-major (r, g, b, r, g, b, ...).
struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  static constexpr std::size_t channels = 3;

  Image() = default;
  Image(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h * channels, 0) {}

  std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c) {
    return pixels[(y * width + x) * channels + c];
  }
  std::uint8_t at(std::size_t x, std::size_t y, std::size_t c) const {
    return pixels[(y * width + x) * channels + c];
  }

  friend bool operator==(const Image&, const Image&) = default;
};

/// Reads a PNG as 8-bit RGB. Gray and palette images are expanded; images
/// with alpha or 16-bit samples are rejected (FormatError) because the
/// conversion would be lossy. Missing files raise NotFoundError.
Image load_png(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG. Output bytes depend only on the pixels.
void save_png(const Image& image, const std::filesystem::path& path);

}  // namespace inr_stego
