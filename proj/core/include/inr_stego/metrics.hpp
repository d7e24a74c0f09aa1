#pragma once

// Fidelity metrics for cover/container and secret/revealed pairs.
// Identical inputs give PSNR/SNR = +infinity rather than an error.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "inr_stego/image.hpp"

namespace inr_stego {

inline constexpr double kPerfectScore = std::numeric_limits<double>::infinity();

/// Mean absolute difference, in the inputs' units (8-bit levels).
double apd(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Mean absolute difference of normalized audio, in 16-bit steps
/// (one step = 1/32768).
double ae(std::span<const float> a, std::span<const float> b);

/// 10 log10(peak² / MSE).
double psnr(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, double peak = 255.0);
double psnr(std::span<const float> a, std::span<const float> b, double peak);

/// 10 log10(Σs² / Σ(s - ŝ)²). Throws DomainError for an all-zero signal.
double snr(std::span<const float> signal, std::span<const float> noisy);

/// Single-scale SSIM with an 11×11 Gaussian window (σ = 1.5), K1 = 0.01,
/// K2 = 0.03, L = 255, evaluated at every position where the window fits
/// and averaged over positions and channels.
double ssim(const Image& a, const Image& b);

enum class PairKind { cover_pair, secret_pair };

struct MetricsReport {
  PairKind target_kind = PairKind::cover_pair;
  double apd_or_ae = 0.0;
  double psnr_or_snr = 0.0;
  std::optional<double> ssim;
};

/// "inf" for the +infinity sentinel, fixed 4-decimal notation otherwise.
std::string format_metric(double value);

}  // namespace inr_stego
