#include "inr_stego/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "inr_stego/error.hpp"

namespace inr_stego {

namespace {

double axis(std::size_t j, std::size_t n) {
  return n > 1 ? -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n - 1) : 0.0;
}

std::uint8_t level(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Image make_landscape_cover(std::size_t side) {
  if (side == 0) throw DomainError("make_landscape_cover: zero side");
  Image img(side, side);
  for (std::size_t r = 0; r < side; ++r) {
    const double cy = side > 1 ? static_cast<double>(r) / static_cast<double>(side - 1) : 0.0;
    for (std::size_t c = 0; c < side; ++c) {
      const double cx = side > 1 ? static_cast<double>(c) / static_cast<double>(side - 1) : 0.0;
      double rgb[3] = {70 + 120 * cy, 140 + 90 * cy, 230 - 20 * cy};
      if (cy > 0.6 + 0.15 * std::sin(cx * 9)) {
        rgb[0] = 40 + 60 * cy + 25 * std::sin(37 * cx) * std::sin(23 * cy);
        rgb[1] = 90 + 70 * cy;
        rgb[2] = 30 + 20 * std::cos(41 * cx * cy);
      }
      if ((cx - 0.75) * (cx - 0.75) + (cy - 0.25) * (cy - 0.25) < 0.012) {
        rgb[0] = 255;
        rgb[1] = 245;
        rgb[2] = 200;
      }
      for (std::size_t ch = 0; ch < 3; ++ch) img.at(c, r, ch) = level(rgb[ch]);
    }
  }
  return img;
}

SecretSignal make_moving_shapes_video(std::size_t frames, std::size_t height, std::size_t width) {
  if (frames == 0 || height == 0 || width == 0) throw DomainError("video fixture: zero dimension");
  SecretSignal signal;
  signal.kind = Modality::video;
  signal.channels = 3;
  signal.dims = {frames, height, width};
  signal.samples.reserve(frames * height * width * 3);
  for (std::size_t f = 0; f < frames; ++f) {
    const double t = axis(f, frames);
    for (std::size_t i = 0; i < height; ++i) {
      const double y = axis(i, height);
      for (std::size_t j = 0; j < width; ++j) {
        const double x = axis(j, width);
        const double dx = x - 0.4 * t;
        const double dy = y + 0.2;
        const double disc = sigmoid((0.35 - std::sqrt(dx * dx + dy * dy)) * 25);
        const double square =
            (std::abs(x + 0.5) < 0.25 && std::abs(y - 0.3 * t - 0.1) < 0.25) ? 1.0 : 0.0;
        const double rgb[3] = {
            0.6 * x + 1.2 * disc - 0.3,
            0.5 * std::sin(4 * y + t) + 0.9 * square - 0.4,
            0.4 * std::cos(3 * (x - y)) + 0.6 * disc - 0.6 * square,
        };
        for (const double v : rgb) {
          signal.samples.push_back(pixel_to_value(value_to_pixel(static_cast<float>(std::clamp(v, -1.0, 1.0)))));
        }
      }
    }
  }
  return signal;
}

SecretSignal make_test_image(std::size_t height, std::size_t width) {
  SecretSignal video = make_moving_shapes_video(1, height, width);
  video.kind = Modality::image;
  video.dims = {height, width};
  return video;
}

SecretSignal make_tone_audio(std::size_t samples, std::uint32_t sample_rate) {
  if (samples == 0 || sample_rate == 0) throw DomainError("tone fixture: zero length or rate");
  SecretSignal signal;
  signal.kind = Modality::audio;
  signal.channels = 1;
  signal.dims = {samples};
  signal.meta = SourceMeta{16, sample_rate};
  signal.samples.reserve(samples);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t n = 0; n < samples; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    const double v = std::exp(-3.0 * t) * (0.5 * std::sin(two_pi * 220.0 * t) +
                                           0.25 * std::sin(two_pi * 330.0 * t + 0.5));
    signal.samples.push_back(pcm_to_value(value_to_pcm(static_cast<float>(v))));
  }
  return signal;
}

void write_fixture_set(const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());
  save_png(make_landscape_cover(64), directory / "cover.png");
  emit_signal(make_moving_shapes_video(4, 32, 32), directory / "video");
  emit_signal(make_test_image(32, 32), directory / "image.png");
  emit_signal(make_tone_audio(2048, 8000), directory / "tone.wav");
}

}  // namespace inr_stego
