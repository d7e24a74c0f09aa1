#pragma once

// The four user-facing operations behind the `inr-stego` executable. Each
// returns a process exit code and writes human output to `out`, diagnostics
// to `err`; none of them throws.
//
// Exit codes: 0 ok, 2 usage or validation, 3 training failure, 4 I/O.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "inr_stego/keyfile.hpp"
#include "inr_stego/metrics.hpp"
#include "inr_stego/stego.hpp"

namespace inr_stego {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTraining = 3;
inline constexpr int kExitIo = 4;

struct KeygenOptions {
  Modality modality = Modality::video;
  /// video T H W, image H W, audio S
  std::vector<std::size_t> dims;
  std::size_t cover_side = 64;
  std::uint64_t seed = 0;
  std::filesystem::path out;
};

struct HideOptions {
  std::filesystem::path key;
  std::filesystem::path secret;
  std::filesystem::path cover;
  std::filesystem::path out;
  /// Defaults to "<out>.report.txt".
  std::optional<std::filesystem::path> report;
  TrainConfig train;
  /// Unset: 5000 for video and image, 20000 for audio.
  std::optional<std::size_t> steps;
};

struct RevealOptions {
  std::filesystem::path key;
  std::filesystem::path container;
  std::filesystem::path out;
};

struct EvaluateOptions {
  Modality modality = Modality::video;
  std::optional<std::filesystem::path> cover;
  std::optional<std::filesystem::path> container;
  std::optional<std::filesystem::path> secret;
  std::optional<std::filesystem::path> revealed;
};

/// Key for the default six-layer network with variable layers {1, 2, 3}.
KeyFile make_key(Modality modality, std::vector<std::size_t> dims, std::size_t cover_side,
                 std::uint64_t seed);

int cmd_keygen(const KeygenOptions& options, std::ostream& out, std::ostream& err);
int cmd_hide(const HideOptions& options, std::ostream& out, std::ostream& err);
int cmd_reveal(const RevealOptions& options, std::ostream& out, std::ostream& err);
int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err);

/// Cover row: APD, PSNR and SSIM over the 8-bit RGB pixels.
MetricsReport evaluate_cover(const Image& cover, const Image& container);

/// Secret row. Video and image compare emitted 8-bit pixels over the
/// flattened tensor (SSIM is the mean of per-frame values, absent when a
/// frame is smaller than the window); audio reports AE and SNR only.
/// Throws ShapeError on mismatched layouts.
MetricsReport evaluate_secret(const SecretSignal& secret, const SecretSignal& revealed);

/// Plain-text training report: one key=value line per record, then the
/// final metrics.
std::string format_train_report(const TrainReport& report, const TrainConfig& cfg,
                                const std::string& fingerprint);

}  // namespace inr_stego
