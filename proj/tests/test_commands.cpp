#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "inr_stego/commands.hpp"
#include "inr_stego/fixtures.hpp"

using namespace inr_stego;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  explicit Workspace(const std::string& name)
      : dir(fs::temp_directory_path() / ("inr_stego_cmd_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_fixture_set(dir / "fx");
  }
  fs::path operator/(const std::string& name) const { return dir / name; }
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string tree_bytes(const fs::path& path) {
  if (!fs::is_directory(path)) return slurp(path);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += f.filename().string() + "\n" + slurp(f);
  return all;
}

int keygen(const fs::path& out, Modality modality, std::vector<std::size_t> dims,
           std::uint64_t seed = 7, std::size_t side = 64) {
  std::ostringstream o, e;
  return cmd_keygen(KeygenOptions{modality, std::move(dims), side, seed, out}, o, e);
}

HideOptions hide_options(const Workspace& ws, const std::string& key, const std::string& secret,
                         const std::string& out, std::size_t steps) {
  HideOptions h;
  h.key = ws / key;
  h.secret = ws / secret;
  h.cover = ws / "fx/cover.png";
  h.out = ws / out;
  h.steps = steps;
  h.train.log_every = 10;
  return h;
}

}  // namespace

TEST_CASE("keygen is deterministic and prints a fingerprint") {
  Workspace ws("keygen");
  std::ostringstream out, err;
  CHECK(cmd_keygen(KeygenOptions{Modality::video, {4, 32, 32}, 64, 3, ws / "a.json"}, out, err) == 0);
  CHECK(keygen(ws / "b.json", Modality::video, {4, 32, 32}, 3) == 0);
  CHECK(slurp(ws / "a.json") == slurp(ws / "b.json"));
  CHECK(out.str() == "fingerprint " + key_fingerprint(read_key_file(ws / "a.json")) + "\n");
  CHECK(keygen(ws / "c.json", Modality::audio, {4, 4}) == kExitUsage);
  CHECK(keygen(ws / "c.json", Modality::video, {4, 0, 4}) == kExitUsage);
}

TEST_CASE("end to end on the bundled fixtures") {
  Workspace ws("e2e");
  struct Case {
    Modality modality;
    std::vector<std::size_t> dims;
    std::string secret;
    std::string revealed;
  };
  const Case cases[] = {
      {Modality::video, {4, 32, 32}, "fx/video", "rv_video"},
      {Modality::image, {32, 32}, "fx/image.png", "rv_image.png"},
      {Modality::audio, {2048}, "fx/tone.wav", "rv_tone.wav"},
  };
  for (const Case& c : cases) {
    INFO(to_string(c.modality));
    const std::string key = std::string(to_string(c.modality)) + ".json";
    REQUIRE(keygen(ws / key, c.modality, c.dims) == 0);

    std::ostringstream out, err;
    const HideOptions h = hide_options(ws, key, c.secret, "c.png", 30);
    REQUIRE(cmd_hide(h, out, err) == 0);
    CHECK(fs::exists(ws / "c.png"));
    const std::string report = slurp(ws / "c.png.report.txt");
    CHECK(report.find("step=0 ") != std::string::npos);
    CHECK(report.find("step=29 ") != std::string::npos);
    CHECK(report.find("final cover_apd=") != std::string::npos);

    REQUIRE(cmd_reveal(RevealOptions{ws / key, ws / "c.png", ws / c.revealed}, out, err) == 0);
    const std::string first = tree_bytes(ws / c.revealed);
    CHECK(cmd_reveal(RevealOptions{ws / key, ws / "c.png", ws / c.revealed}, out, err) == 0);
    CHECK(tree_bytes(ws / c.revealed) == first);

    std::ostringstream report_out;
    EvaluateOptions ev;
    ev.modality = c.modality;
    ev.cover = ws / "fx/cover.png";
    ev.container = ws / "c.png";
    ev.secret = ws / c.secret;
    ev.revealed = ws / c.revealed;
    CHECK(cmd_evaluate(ev, report_out, err) == 0);
    const std::string text = report_out.str();
    CHECK(text.find("Cover ") != std::string::npos);
    CHECK(text.find("Secret ") != std::string::npos);
    CHECK(text.find("row=cover apd_or_ae=") != std::string::npos);
    CHECK(text.find("row=secret apd_or_ae=") != std::string::npos);
    if (c.modality == Modality::audio) CHECK(text.find("ssim=-\n") != std::string::npos);
  }
}

TEST_CASE("evaluate of identical pairs and record schema") {
  Workspace ws("identical");
  std::ostringstream out, err;
  EvaluateOptions ev;
  ev.modality = Modality::video;
  ev.cover = ws / "fx/cover.png";
  ev.container = ws / "fx/cover.png";
  ev.secret = ws / "fx/video";
  ev.revealed = ws / "fx/video";
  REQUIRE(cmd_evaluate(ev, out, err) == 0);
  const std::string text = out.str();
  const std::string records = text.substr(text.find("row=cover"));
  CHECK(records ==
        "row=cover apd_or_ae=0.0000 psnr_or_snr=inf ssim=1.0000\n"
        "row=secret apd_or_ae=0.0000 psnr_or_snr=inf ssim=1.0000\n");

  EvaluateOptions bad = ev;
  bad.revealed = ws / "fx/image.png";
  bad.modality = Modality::image;
  bad.secret = ws / "fx/cover.png";
  CHECK(cmd_evaluate(bad, out, err) == kExitUsage);
  EvaluateOptions half;
  half.cover = ws / "fx/cover.png";
  CHECK(cmd_evaluate(half, out, err) == kExitUsage);
}

TEST_CASE("validation and I/O exit codes") {
  Workspace ws("codes");
  REQUIRE(keygen(ws / "k.json", Modality::video, {4, 32, 32}) == 0);
  std::ostringstream out, err;

  HideOptions wrong_cover = hide_options(ws, "k.json", "fx/video", "c.png", 1);
  wrong_cover.cover = ws / "fx/image.png";
  CHECK(cmd_hide(wrong_cover, out, err) == kExitUsage);
  CHECK(err.str().find("N=64") != std::string::npos);

  HideOptions wrong_secret = hide_options(ws, "k.json", "fx/video", "c.png", 1);
  REQUIRE(keygen(ws / "k2.json", Modality::video, {2, 32, 32}) == 0);
  wrong_secret.key = ws / "k2.json";
  CHECK(cmd_hide(wrong_secret, out, err) == kExitUsage);

  HideOptions diverge = hide_options(ws, "k.json", "fx/video", "c.png", 3);
  diverge.train.qat = false;
  diverge.train.alpha = 1e39;
  err.str("");
  CHECK(cmd_hide(diverge, out, err) == kExitTraining);
  CHECK(err.str().find("last good step") != std::string::npos);

  CHECK(cmd_reveal(RevealOptions{ws / "k.json", ws / "none.png", ws / "r"}, out, err) == kExitIo);
  std::ofstream(ws / "junk.png") << "junk";
  CHECK(cmd_reveal(RevealOptions{ws / "k.json", ws / "junk.png", ws / "r"}, out, err) == kExitIo);
  CHECK(cmd_reveal(RevealOptions{ws / "k.json", ws / "fx/image.png", ws / "r"}, out, err) == kExitUsage);
  CHECK(cmd_reveal(RevealOptions{ws / "missing.json", ws / "fx/cover.png", ws / "r"}, out, err) ==
        kExitIo);
  std::ofstream(ws / "bad.json") << "{}";
  CHECK(cmd_reveal(RevealOptions{ws / "bad.json", ws / "fx/cover.png", ws / "r"}, out, err) ==
        kExitUsage);
}

TEST_CASE("a tampered seed still reveals, with large error") {
  Workspace ws("tamper");
  REQUIRE(keygen(ws / "k.json", Modality::image, {32, 32}, 7) == 0);
  REQUIRE(keygen(ws / "t.json", Modality::image, {32, 32}, 6) == 0);
  std::ostringstream out, err;
  REQUIRE(cmd_hide(hide_options(ws, "k.json", "fx/image.png", "c.png", 300), out, err) == 0);
  REQUIRE(cmd_reveal(RevealOptions{ws / "k.json", ws / "c.png", ws / "good.png"}, out, err) == 0);
  REQUIRE(cmd_reveal(RevealOptions{ws / "t.json", ws / "c.png", ws / "bad.png"}, out, err) == 0);
  const SecretSignal secret = load_image(ws / "fx/image.png");
  const double good = evaluate_secret(secret, load_image(ws / "good.png")).apd_or_ae;
  const double bad = evaluate_secret(secret, load_image(ws / "bad.png")).apd_or_ae;
  CHECK(bad > 3.0 * good);
}
