#include "inr_stego/image.hpp"

#include <png.h>

#include <cstring>
#include <string>

#include "inr_stego/error.hpp"

namespace inr_stego {

Image load_png(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw NotFoundError("no such image: " + path.string());
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&png, path.c_str()) == 0) {
    throw FormatError(path.string() + ": " + png.message);
  }
  if ((png.format & PNG_FORMAT_FLAG_ALPHA) != 0 || (png.format & PNG_FORMAT_FLAG_LINEAR) != 0) {
    png_image_free(&png);
    throw FormatError(path.string() + ": expected 8-bit RGB without alpha");
  }
  png.format = PNG_FORMAT_RGB;
  Image image(png.width, png.height);
  if (png_image_finish_read(&png, nullptr, image.pixels.data(), 0, nullptr) == 0) {
    const std::string message = png.message;
    png_image_free(&png);
    throw FormatError(path.string() + ": " + message);
  }
  return image;
}

void save_png(const Image& image, const std::filesystem::path& path) {
  if (image.pixels.size() != image.width * image.height * Image::channels) {
    throw ShapeError("save_png: pixel buffer does not match dimensions");
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGB;
  if (png_image_write_to_file(&png, path.c_str(), 0, image.pixels.data(), 0, nullptr) == 0) {
    const std::string message = png.message;
    png_image_free(&png);
    throw IoError("cannot write " + path.string() + ": " + message);
  }
}

}  // namespace inr_stego
