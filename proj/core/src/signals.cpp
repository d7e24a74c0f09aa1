#include "inr_stego/signals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>

#include "inr_stego/error.hpp"

namespace inr_stego {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void append_frame(const Image& frame, std::vector<float>& samples) {
  for (const std::uint8_t p : frame.pixels) samples.push_back(pixel_to_value(p));
}

void require_finite(const SecretSignal& signal) {
  for (const float v : signal.samples) {
    if (!std::isfinite(v)) throw NumericError("emit_signal: non-finite sample value");
  }
}

}  // namespace

std::string_view to_string(Modality modality) {
  switch (modality) {
    case Modality::video:
      return "video";
    case Modality::audio:
      return "audio";
    case Modality::image:
      return "image";
  }
  return "unknown";
}

Modality parse_modality(std::string_view text) {
  if (text == "video") return Modality::video;
  if (text == "audio") return Modality::audio;
  if (text == "image") return Modality::image;
  throw UsageError("unknown modality '" + std::string(text) + "' (expected video, audio or image)");
}

std::size_t coordinate_dim(Modality modality) {
  switch (modality) {
    case Modality::video:
      return 3;
    case Modality::image:
      return 2;
    case Modality::audio:
      return 1;
  }
  return 0;
}

std::size_t sample_channels(Modality modality) {
  return modality == Modality::audio ? 1 : 3;
}

std::size_t SecretSignal::point_count() const noexcept {
  return dims.empty() ? 0 : product(dims);
}

void SecretSignal::validate() const {
  if (dims.size() != coordinate_dim(kind)) {
    throw ShapeError(std::string(to_string(kind)) + " signal needs " +
                     std::to_string(coordinate_dim(kind)) + " dims, got " +
                     std::to_string(dims.size()));
  }
  if (channels != sample_channels(kind)) throw ShapeError("channel count does not match modality");
  if (samples.size() != point_count() * channels) {
    throw ShapeError("sample count " + std::to_string(samples.size()) + " != " +
                     std::to_string(point_count()) + " x " + std::to_string(channels));
  }
  for (const float v : samples) {
    if (!(v >= -1.0f && v <= 1.0f)) throw DomainError("secret samples must lie in [-1, 1]");
  }
}

CoordinateBatch make_grid(std::span<const std::size_t> dims) {
  if (dims.empty()) throw DomainError("make_grid: no axes");
  for (const std::size_t n : dims) {
    if (n == 0) throw DomainError("make_grid: zero-length axis");
  }
  std::vector<std::vector<float>> axes;
  for (const std::size_t n : dims) {
    std::vector<float> axis(n, 0.0f);
    if (n > 1) {
      for (std::size_t j = 0; j < n; ++j) {
        axis[j] = static_cast<float>(-1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n - 1));
      }
    }
    axes.push_back(std::move(axis));
  }
  const std::size_t k = dims.size();
  const std::size_t count = product(dims);
  CoordinateBatch batch{k, std::vector<float>(count * k)};
  std::vector<std::size_t> index(k, 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t d = 0; d < k; ++d) batch.coords[i * k + d] = axes[d][index[d]];
    for (std::size_t d = k; d-- > 0;) {
      if (++index[d] < dims[d]) break;
      index[d] = 0;
    }
  }
  return batch;
}

float pixel_to_value(std::uint8_t pixel) {
  return static_cast<float>(2.0 * pixel / 255.0 - 1.0);
}

std::uint8_t value_to_pixel(float value) {
  const double scaled = std::round(255.0 * (static_cast<double>(value) + 1.0) / 2.0);
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

float pcm_to_value(std::int16_t sample) {
  return static_cast<float>(sample) / 32768.0f;
}

std::int16_t value_to_pcm(float value) {
  const double scaled = std::round(32768.0 * static_cast<double>(value));
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

SecretSignal load_video_frames(const std::filesystem::path& directory) {
  std::error_code ec;
  if (!std::filesystem::is_directory(directory, ec)) {
    throw NotFoundError("no such frame directory: " + directory.string());
  }
  std::vector<std::filesystem::path> frames;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") frames.push_back(entry.path());
  }
  if (frames.empty()) throw NotFoundError("no .png frames in " + directory.string());
  std::sort(frames.begin(), frames.end());

  SecretSignal signal;
  signal.kind = Modality::video;
  signal.channels = 3;
  std::size_t width = 0;
  std::size_t height = 0;
  for (const auto& path : frames) {
    const Image frame = load_png(path);
    if (signal.samples.empty()) {
      width = frame.width;
      height = frame.height;
      signal.samples.reserve(frames.size() * width * height * 3);
    } else if (frame.width != width || frame.height != height) {
      throw FormatError(path.string() + " is " + std::to_string(frame.width) + "x" +
                        std::to_string(frame.height) + ", expected " + std::to_string(width) +
                        "x" + std::to_string(height));
    }
    append_frame(frame, signal.samples);
  }
  signal.dims = {frames.size(), height, width};
  return signal;
}

SecretSignal load_image(const std::filesystem::path& path) {
  const Image image = load_png(path);
  SecretSignal signal;
  signal.kind = Modality::image;
  signal.channels = 3;
  signal.dims = {image.height, image.width};
  append_frame(image, signal.samples);
  return signal;
}

SecretSignal load_wav(const std::filesystem::path& path) {
  const PcmAudio audio = read_wav(path);
  SecretSignal signal;
  signal.kind = Modality::audio;
  signal.channels = 1;
  signal.dims = {audio.samples.size()};
  signal.meta = SourceMeta{16, audio.sample_rate};
  signal.samples.reserve(audio.samples.size());
  for (const std::int16_t s : audio.samples) signal.samples.push_back(pcm_to_value(s));
  return signal;
}

SecretSignal load_secret(Modality modality, const std::filesystem::path& path) {
  switch (modality) {
    case Modality::video:
      return load_video_frames(path);
    case Modality::image:
      return load_image(path);
    case Modality::audio:
      return load_wav(path);
  }
  throw UsageError("unknown modality");
}

SecretSignal signal_from_batch(const SignalBatch& batch, Modality kind,
                               std::vector<std::size_t> dims, SourceMeta meta) {
  SecretSignal signal;
  signal.kind = kind;
  signal.channels = batch.dim;
  signal.dims = std::move(dims);
  signal.samples = batch.values;
  signal.meta = meta;
  if (signal.dims.size() != coordinate_dim(kind) || signal.channels != sample_channels(kind) ||
      signal.samples.size() != signal.point_count() * signal.channels) {
    throw ShapeError("reconstruction does not match " + std::string(to_string(kind)) + " layout");
  }
  return signal;
}

std::vector<Image> to_frames(const SecretSignal& signal) {
  if (signal.kind == Modality::audio) throw UsageError("to_frames: audio has no frames");
  const std::size_t frames = signal.kind == Modality::video ? signal.dims.at(0) : 1;
  const std::size_t height = signal.dims.at(signal.dims.size() - 2);
  const std::size_t width = signal.dims.back();
  std::vector<Image> out;
  std::size_t offset = 0;
  for (std::size_t t = 0; t < frames; ++t) {
    Image frame(width, height);
    for (std::uint8_t& p : frame.pixels) p = value_to_pixel(signal.samples.at(offset++));
    out.push_back(std::move(frame));
  }
  return out;
}

PcmAudio to_pcm(const SecretSignal& signal) {
  if (signal.kind != Modality::audio) throw UsageError("to_pcm: not an audio signal");
  PcmAudio audio;
  audio.sample_rate = signal.meta.sample_rate;
  audio.samples.reserve(signal.samples.size());
  for (const float v : signal.samples) audio.samples.push_back(value_to_pcm(v));
  return audio;
}

void emit_signal(const SecretSignal& signal, const std::filesystem::path& path) {
  require_finite(signal);
  switch (signal.kind) {
    case Modality::audio:
      write_wav(to_pcm(signal), path);
      return;
    case Modality::image:
      save_png(to_frames(signal).front(), path);
      return;
    case Modality::video: {
      std::error_code ec;
      std::filesystem::create_directories(path, ec);
      if (ec) throw IoError("cannot create " + path.string() + ": " + ec.message());
      const std::vector<Image> frames = to_frames(signal);
      for (std::size_t t = 0; t < frames.size(); ++t) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%04zu.png", t);
        save_png(frames[t], path / name);
      }
      return;
    }
  }
}

}  // namespace inr_stego
