#pragma once

// Secret-signal ingestion and emission plus the coordinate grid that pairs
// every sample d_i with its input coordinate x_i.
//
// Sample values are normalized to [-1, 1]:
//   8-bit pixel p   -> 2p/255 - 1,      emitted as round(255 (v+1)/2)
//   16-bit sample s -> s/32768,         emitted as round(32768 v)
// Both maps are exact inverses on their lattices, so load/emit round trips
// are bit-exact. Emission clamps out-of-range network output.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inr_stego/image.hpp"
#include "inr_stego/inr.hpp"
#include "inr_stego/wav.hpp"

namespace inr_stego {

enum class Modality { video, audio, image };

std::string_view to_string(Modality modality);
/// Throws UsageError for anything other than "video", "audio" or "image".
Modality parse_modality(std::string_view text);

/// Coordinate dimension k: video (t, y, x) = 3, image (y, x) = 2, audio 1.
std::size_t coordinate_dim(Modality modality);
/// Sample dimension m: RGB = 3 for video and image, 1 for audio.
std::size_t sample_channels(Modality modality);

struct SourceMeta {
  unsigned bit_depth = 8;
  std::uint32_t sample_rate = 0;

  friend bool operator==(const SourceMeta&, const SourceMeta&) = default;
};

struct SecretSignal {
  Modality kind = Modality::image;
  /// video [T, H, W], image [H, W], audio [S]
  std::vector<std::size_t> dims;
  std::size_t channels = 0;
  /// Grid order (slowest axis first), channels interleaved.
  std::vector<float> samples;
  SourceMeta meta;

  std::size_t point_count() const noexcept;
  /// Checks length bookkeeping and that every sample lies in [-1, 1].
  void validate() const;
  SignalBatch as_batch() const { return SignalBatch{channels, samples}; }

  friend bool operator==(const SecretSignal&, const SecretSignal&) = default;
};

/// Axis with n samples -> -1 + 2j/(n-1); n = 1 -> {0}. Lexicographic order,
/// first axis slowest. Throws DomainError on an empty dims list or a zero dim.
CoordinateBatch make_grid(std::span<const std::size_t> dims);

float pixel_to_value(std::uint8_t pixel);
std::uint8_t value_to_pixel(float value);
float pcm_to_value(std::int16_t sample);
std::int16_t value_to_pcm(float value);

/// Lexicographically ordered *.png frames of equal size.
SecretSignal load_video_frames(const std::filesystem::path& directory);
SecretSignal load_image(const std::filesystem::path& path);
/// 16-bit mono PCM WAV.
SecretSignal load_wav(const std::filesystem::path& path);
/// Dispatches on modality: video expects a directory, the others a file.
SecretSignal load_secret(Modality modality, const std::filesystem::path& path);

/// Wraps a network reconstruction as a signal; values are not range-checked.
SecretSignal signal_from_batch(const SignalBatch& batch, Modality kind,
                               std::vector<std::size_t> dims, SourceMeta meta = {});

/// Video frames (8-bit RGB) of a video or image signal, in time order.
std::vector<Image> to_frames(const SecretSignal& signal);
PcmAudio to_pcm(const SecretSignal& signal);

/// Video -> directory of frame_NNNN.png (created if missing); image -> PNG;
/// audio -> WAV. Throws NumericError on non-finite values, IoError on
/// write failures.
void emit_signal(const SecretSignal& signal, const std::filesystem::path& path);

}  // namespace inr_stego
