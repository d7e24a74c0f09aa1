#include <doctest.h>

#include <filesystem>
#include <random>

#include "inr_stego/fixtures.hpp"
#include "inr_stego/signals.hpp"

using namespace inr_stego;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("inr_stego_signals_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Image random_image(std::mt19937_64& gen, std::size_t w, std::size_t h) {
  Image img(w, h);
  for (std::uint8_t& p : img.pixels) p = static_cast<std::uint8_t>(gen() % 256);
  return img;
}

std::vector<std::vector<float>> grid_points(const std::vector<std::size_t>& dims) {
  const CoordinateBatch g = make_grid(dims);
  std::vector<std::vector<float>> out;
  for (std::size_t i = 0; i < g.count(); ++i) {
    out.emplace_back(g.coords.begin() + i * g.dim, g.coords.begin() + (i + 1) * g.dim);
  }
  return out;
}

}  // namespace

TEST_CASE("grid examples") {
  using P = std::vector<std::vector<float>>;
  CHECK(grid_points({2}) == P{{-1}, {1}});
  CHECK(grid_points({3}) == P{{-1}, {0}, {1}});
  CHECK(grid_points({1}) == P{{0}});
  CHECK(grid_points({2, 2}) == P{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}});
  CHECK_THROWS_AS(make_grid(std::vector<std::size_t>{3, 0}), DomainError);
  CHECK_THROWS_AS(make_grid(std::vector<std::size_t>{}), DomainError);
}

TEST_CASE("grid enumerates every point once in slowest-first order") {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::size_t> dims(1 + gen() % 3);
    for (std::size_t& d : dims) d = 1 + gen() % 6;
    const CoordinateBatch g = make_grid(dims);
    std::size_t count = 1;
    for (const std::size_t d : dims) count *= d;
    REQUIRE(g.count() == count);
    // Decode each row back into an index tuple and check it is the row number.
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t flat = 0;
      for (std::size_t a = 0; a < dims.size(); ++a) {
        const float v = g.coords[i * dims.size() + a];
        CHECK(v >= -1.0f);
        CHECK(v <= 1.0f);
        const std::size_t j =
            dims[a] == 1 ? 0 : static_cast<std::size_t>(std::lround((v + 1.0) / 2.0 * (dims[a] - 1)));
        flat = flat * dims[a] + j;
      }
      CHECK(flat == i);
    }
  }
}

TEST_CASE("normalization endpoints and clamping") {
  CHECK(pixel_to_value(0) == -1.0f);
  CHECK(pixel_to_value(255) == 1.0f);
  CHECK(value_to_pixel(-1.0f) == 0);
  CHECK(value_to_pixel(1.2f) == 255);
  CHECK(value_to_pixel(-3.0f) == 0);
  CHECK(pcm_to_value(-32768) == -1.0f);
  CHECK(pcm_to_value(32767) == 32767.0f / 32768.0f);
  CHECK(value_to_pcm(-1.0f) == -32768);
  CHECK(value_to_pcm(1.2f) == 32767);
  for (int p = 0; p < 256; ++p) CHECK(value_to_pixel(pixel_to_value(static_cast<std::uint8_t>(p))) == p);
  for (int s = -32768; s <= 32767; ++s) {
    if (value_to_pcm(pcm_to_value(static_cast<std::int16_t>(s))) != s) FAIL("pcm lattice broken at " << s);
  }
}

TEST_CASE("video frames load, emit and reload bit-exactly") {
  const fs::path dir = scratch("video");
  std::mt19937_64 gen(2);
  std::vector<Image> frames;
  for (int t = 0; t < 4; ++t) {
    frames.push_back(random_image(gen, 32, 32));
    save_png(frames.back(), dir / ("f" + std::to_string(t) + ".png"));
  }
  const SecretSignal video = load_video_frames(dir);
  CHECK(video.kind == Modality::video);
  CHECK(video.dims == std::vector<std::size_t>{4, 32, 32});
  CHECK(video.point_count() == 4096);
  CHECK(video.samples.size() == 4096 * 3);
  CHECK(video.channels == 3);
  CHECK_NOTHROW(video.validate());
  CHECK(to_frames(video) == frames);

  emit_signal(video, dir / "out");
  CHECK(load_video_frames(dir / "out") == video);
}

TEST_CASE("all-black frames normalize to -1") {
  const fs::path dir = scratch("black");
  save_png(Image(5, 4), dir / "a.png");
  save_png(Image(5, 4), dir / "b.png");
  const SecretSignal video = load_video_frames(dir);
  for (const float v : video.samples) CHECK(v == -1.0f);
}

TEST_CASE("frame loading errors") {
  const fs::path dir = scratch("errors");
  CHECK_THROWS_AS(load_video_frames(dir), NotFoundError);
  CHECK_THROWS_AS(load_video_frames(dir / "missing"), NotFoundError);
  save_png(Image(4, 4), dir / "a.png");
  save_png(Image(4, 5), dir / "b.png");
  CHECK_THROWS_AS(load_video_frames(dir), FormatError);
}

TEST_CASE("audio load bookkeeping and round trip") {
  const fs::path dir = scratch("audio");
  PcmAudio audio;
  audio.sample_rate = 8000;
  audio.samples.resize(8000);
  std::mt19937_64 gen(3);
  for (std::int16_t& s : audio.samples) s = static_cast<std::int16_t>(gen() % 65536 - 32768);
  audio.samples[0] = -32768;
  audio.samples[1] = 32767;
  write_wav(audio, dir / "a.wav");
  const SecretSignal signal = load_wav(dir / "a.wav");
  CHECK(signal.dims == std::vector<std::size_t>{8000});
  CHECK(signal.meta.sample_rate == 8000);
  CHECK(signal.samples[0] == -1.0f);
  CHECK(signal.samples[1] == 32767.0f / 32768.0f);
  emit_signal(signal, dir / "b.wav");
  CHECK(read_wav(dir / "b.wav").samples == audio.samples);
  CHECK(load_wav(dir / "b.wav") == signal);
}

TEST_CASE("image secrets and overshoot clamping on emit") {
  const fs::path dir = scratch("image");
  SecretSignal img = make_test_image(6, 9);
  CHECK(img.dims == std::vector<std::size_t>{6, 9});
  emit_signal(img, dir / "i.png");
  CHECK(load_image(dir / "i.png") == img);

  SecretSignal over = img;
  over.samples[0] = 1.2f;
  over.samples[1] = -7.0f;
  emit_signal(over, dir / "o.png");
  const Image back = load_png(dir / "o.png");
  CHECK(back.pixels[0] == 255);
  CHECK(back.pixels[1] == 0);

  over.samples[2] = NAN;
  CHECK_THROWS_AS(emit_signal(over, dir / "n.png"), NumericError);
}

TEST_CASE("signal validation and batch wrapping") {
  SecretSignal s = make_test_image(2, 2);
  s.samples[0] = 1.5f;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = make_test_image(2, 2);
  s.samples.pop_back();
  CHECK_THROWS_AS(s.validate(), ShapeError);

  const SignalBatch batch{3, std::vector<float>(12, 0.0f)};
  CHECK(signal_from_batch(batch, Modality::image, {2, 2}).point_count() == 4);
  CHECK_THROWS_AS(signal_from_batch(batch, Modality::image, {3, 2}), ShapeError);
  CHECK_THROWS_AS(signal_from_batch(batch, Modality::audio, {4}), ShapeError);
}

TEST_CASE("modality mapping") {
  CHECK(parse_modality("video") == Modality::video);
  CHECK(parse_modality("audio") == Modality::audio);
  CHECK(parse_modality("image") == Modality::image);
  CHECK_THROWS_AS(parse_modality("text"), UsageError);
  CHECK(coordinate_dim(Modality::video) == 3);
  CHECK(coordinate_dim(Modality::image) == 2);
  CHECK(coordinate_dim(Modality::audio) == 1);
  CHECK(sample_channels(Modality::audio) == 1);
  CHECK(sample_channels(Modality::video) == 3);
}

TEST_CASE("fixtures are on their lattices and deterministic") {
  const SecretSignal video = make_moving_shapes_video(4, 32, 32);
  CHECK_NOTHROW(video.validate());
  CHECK(video == make_moving_shapes_video(4, 32, 32));
  for (const float v : video.samples) CHECK(pixel_to_value(value_to_pixel(v)) == v);
  const SecretSignal tone = make_tone_audio(100, 8000);
  CHECK_NOTHROW(tone.validate());
  for (const float v : tone.samples) CHECK(pcm_to_value(value_to_pcm(v)) == v);
  CHECK(make_landscape_cover(64) == make_landscape_cover(64));
}
