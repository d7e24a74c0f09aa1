#pragma once

// RIFF/WAVE reader and writer restricted to 16-bit little-endian mono PCM.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace inr_stego {

struct PcmAudio {
  std::uint32_t sample_rate = 0;
  std::vector<std::int16_t> samples;

  friend bool operator==(const PcmAudio&, const PcmAudio&) = default;
};

/// Strict parser. Structural problems raise ParseError with the byte offset
/// of the offending field; valid headers describing anything other than
/// 16-bit mono PCM raise UnsupportedFormatError naming the field.
PcmAudio parse_wav(std::span<const std::uint8_t> bytes);

/// Canonical 44-byte header followed by the samples.
std::vector<std::uint8_t> encode_wav(const PcmAudio& audio);

PcmAudio read_wav(const std::filesystem::path& path);
void write_wav(const PcmAudio& audio, const std::filesystem::path& path);

}  // namespace inr_stego
