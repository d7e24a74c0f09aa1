#include "inr_stego/wav.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "inr_stego/error.hpp"

namespace inr_stego {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void need(std::size_t offset, std::size_t count, std::string_view what) const {
    if (offset > bytes_.size() || bytes_.size() - offset < count) {
      throw ParseError("truncated " + std::string(what), offset);
    }
  }
  bool tag_is(std::size_t offset, std::string_view tag) const {
    return std::memcmp(bytes_.data() + offset, tag.data(), 4) == 0;
  }
  std::string tag(std::size_t offset) const {
    std::string out(reinterpret_cast<const char*>(bytes_.data() + offset), 4);
    for (char& c : out) {
      if (c < 0x20 || c > 0x7e) c = '?';
    }
    return out;
  }
  std::uint16_t u16(std::size_t offset) const {
    return static_cast<std::uint16_t>(bytes_[offset] | (bytes_[offset + 1] << 8));
  }
  std::uint32_t u32(std::size_t offset) const {
    return static_cast<std::uint32_t>(bytes_[offset]) |
           (static_cast<std::uint32_t>(bytes_[offset + 1]) << 8) |
           (static_cast<std::uint32_t>(bytes_[offset + 2]) << 16) |
           (static_cast<std::uint32_t>(bytes_[offset + 3]) << 24);
  }
  std::size_t size() const noexcept { return bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
};

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_tag(std::vector<std::uint8_t>& out, std::string_view tag) {
  out.insert(out.end(), tag.begin(), tag.end());
}

}  // namespace

PcmAudio parse_wav(std::span<const std::uint8_t> bytes) {
  const Reader in(bytes);
  in.need(0, 4, "RIFF magic");
  if (!in.tag_is(0, "RIFF")) throw ParseError("bad RIFF magic", 0);
  in.need(4, 4, "RIFF size");
  const std::uint32_t riff_size = in.u32(4);
  if (static_cast<std::uint64_t>(riff_size) + 8 != in.size()) {
    throw ParseError("RIFF size " + std::to_string(riff_size) + " inconsistent with file length " +
                         std::to_string(in.size()),
                     4);
  }
  in.need(8, 4, "WAVE magic");
  if (!in.tag_is(8, "WAVE")) throw ParseError("bad WAVE magic", 8);

  const std::size_t end = in.size();
  bool have_format = false;
  bool have_data = false;
  PcmAudio audio;
  std::size_t pos = 12;
  while (pos < end) {
    if (end - pos < 8) throw ParseError("truncated chunk header", pos);
    const std::uint32_t chunk_size = in.u32(pos + 4);
    const std::size_t body = pos + 8;
    if (chunk_size > end - body) {
      throw ParseError("chunk '" + in.tag(pos) + "' size " + std::to_string(chunk_size) +
                           " overruns the file",
                       pos + 4);
    }
    if (in.tag_is(pos, "fmt ")) {
      if (have_format) throw ParseError("duplicate fmt chunk", pos);
      if (chunk_size < 16) throw ParseError("fmt chunk shorter than 16 bytes", pos + 4);
      const std::uint16_t format = in.u16(body);
      if (format != kFormatPcm) {
        throw UnsupportedFormatError("audio_format",
                                     std::to_string(format) + " (only PCM = 1 is supported)", body);
      }
      const std::uint16_t channels = in.u16(body + 2);
      if (channels != 1) {
        throw UnsupportedFormatError("num_channels",
                                     std::to_string(channels) + " (only mono is supported)",
                                     body + 2);
      }
      const std::uint32_t sample_rate = in.u32(body + 4);
      const std::uint32_t byte_rate = in.u32(body + 8);
      const std::uint16_t block_align = in.u16(body + 12);
      const std::uint16_t bits = in.u16(body + 14);
      if (bits != 16) {
        throw UnsupportedFormatError("bits_per_sample",
                                     std::to_string(bits) + " (only 16-bit is supported)",
                                     body + 14);
      }
      if (sample_rate == 0) throw ParseError("sample_rate is zero", body + 4);
      if (block_align != 2) throw ParseError("block_align inconsistent with 16-bit mono", body + 12);
      if (static_cast<std::uint64_t>(byte_rate) != static_cast<std::uint64_t>(sample_rate) * 2) {
        throw ParseError("byte_rate inconsistent with sample_rate", body + 8);
      }
      audio.sample_rate = sample_rate;
      have_format = true;
    } else if (in.tag_is(pos, "data")) {
      if (!have_format) throw ParseError("data chunk before fmt chunk", pos);
      if (have_data) throw ParseError("duplicate data chunk", pos);
      if (chunk_size % 2 != 0) throw ParseError("data size not a multiple of block_align", pos + 4);
      audio.samples.resize(chunk_size / 2);
      for (std::size_t i = 0; i < audio.samples.size(); ++i) {
        audio.samples[i] = static_cast<std::int16_t>(in.u16(body + 2 * i));
      }
      have_data = true;
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!have_format) throw ParseError("missing fmt chunk", 12);
  if (!have_data) throw ParseError("missing data chunk", end);
  return audio;
}

std::vector<std::uint8_t> encode_wav(const PcmAudio& audio) {
  const std::uint64_t data_bytes = static_cast<std::uint64_t>(audio.samples.size()) * 2;
  if (data_bytes + 36 > 0xffffffffull) throw FormatError("encode_wav: audio too long for RIFF");
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, static_cast<std::uint32_t>(36 + data_bytes));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, audio.sample_rate);
  put_u32(out, audio.sample_rate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, static_cast<std::uint32_t>(data_bytes));
  for (const std::int16_t s : audio.samples) put_u16(out, static_cast<std::uint16_t>(s));
  return out;
}

PcmAudio read_wav(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw NotFoundError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                        std::istreambuf_iterator<char>());
  return parse_wav(bytes);
}

void write_wav(const PcmAudio& audio, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_wav(audio);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + path.string());
  file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw IoError("short write to " + path.string());
}

}  // namespace inr_stego
