#pragma once

// Hiding and revealing. The variable weight matrices of the base network are
// trained so that, scaled from [w_min, w_max] to [0, 255] and rounded, they
// form a container image close to the cover, while the network still fits
// the secret. Training runs through the 8-bit quantizer (QAT) with a
// straight-through estimator so the exported weights stay converged.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "inr_stego/image.hpp"
#include "inr_stego/inr.hpp"
#include "inr_stego/numeric.hpp"
#include "inr_stego/signals.hpp"

namespace inr_stego {

struct QuantizationParams {
  double w_min = -1.0;
  double w_max = 1.0;

  static QuantizationParams from_spec(const NetworkSpec& spec) { return {spec.w_min, spec.w_max}; }
  /// Throws DomainError unless w_min < w_max, both finite.
  void validate() const;
};

/// ROUND(255 (clamp(w) - w_min) / (w_max - w_min)), ties away from zero.
std::uint8_t quantize_level(float w, const QuantizationParams& q);
/// Grid point of a level; level 0 is exactly w_min and 255 exactly w_max.
float dequantize_level(std::uint8_t level, const QuantizationParams& q);
/// Snaps every element onto the 256-point grid. Idempotent.
Matrix quantize_dequantize(const Matrix& w, const QuantizationParams& q);

/// N×N×3 container (or cover). Plane c holds variable layer c, with matrix
/// row r stored as pixel row r.
struct ContainerImage {
  std::size_t side = 0;
  std::vector<std::uint8_t> planes;  // planes[(c * side + r) * side + col]

  ContainerImage() = default;
  explicit ContainerImage(std::size_t n) : side(n), planes(3 * n * n, 0) {}

  std::uint8_t& at(std::size_t c, std::size_t r, std::size_t col) {
    return planes[(c * side + r) * side + col];
  }
  std::uint8_t at(std::size_t c, std::size_t r, std::size_t col) const {
    return planes[(c * side + r) * side + col];
  }

  /// Throws ShapeError if the image is not square.
  static ContainerImage from_image(const Image& image);
  Image to_image() const;

  friend bool operator==(const ContainerImage&, const ContainerImage&) = default;
};

/// Quantizes the three variable layers into the container's channels.
ContainerImage weights_to_image(const SirenNetwork& net);

/// Rebuilds the base network from the spec and overwrites the variable
/// layers with the container's dequantized channels.
SirenNetwork image_to_weights(const ContainerImage& image, const NetworkSpec& spec);

struct CoverLossAndGrad {
  double loss = 0.0;
  std::array<Matrix, 3> grad;
};

/// Mean squared difference between the stacked weights and the cover
/// rescaled into weight space; gradient 2(w - target)/count.
CoverLossAndGrad cover_loss_and_grad(std::span<const Matrix> stacked, const ContainerImage& cover,
                                     const QuantizationParams& q);

/// Clamp-gated straight-through estimator: passes the gradient where
/// w lies in [w_min, w_max], zero elsewhere.
Matrix ste_gradient(const Matrix& grad_quantized, const Matrix& w, const QuantizationParams& q);

/// Constant that expresses the weight-space cover loss in the secret loss's
/// units: normalized [-1, 1] pixel values, summed over the three channels.
double cover_loss_scale(const QuantizationParams& q);

struct TrainConfig {
  std::size_t steps = 5000;
  /// Coordinates per step; >= the secret's point count means full batch.
  std::size_t batch_size = 4096;
  double alpha = 1e-3;
  double beta = 1.0;
  std::uint64_t seed = 0;
  /// 0 disables intermediate records (the final step is always recorded).
  std::size_t log_every = 100;
  /// false: train float weights against the unquantized objective and
  /// quantize once at export (the ablation baseline).
  bool qat = true;

  /// Throws UsageError on an invalid configuration.
  void validate() const;
};

struct TrainRecord {
  std::size_t step = 0;
  double secret_loss = 0.0;
  double cover_loss = 0.0;
  double total_loss = 0.0;
};

struct FinalMetrics {
  double cover_apd = 0.0;
  double cover_psnr = 0.0;
  /// Mean squared error of the revealed secret, normalized units.
  double secret_mse = 0.0;
  /// PSNR of the revealed secret with peak-to-peak 2 (normalized units).
  double secret_psnr = 0.0;
};

struct TrainReport {
  std::vector<TrainRecord> records;
  FinalMetrics final_metrics;
};

struct HideResult {
  ContainerImage container;
  TrainReport report;
  /// Network holding the final float variable weights (before export).
  SirenNetwork network;
};

/// Trains the variable layers of init_network(spec) to hide `secret` in a
/// container resembling `cover`. Bit-deterministic in (spec.seed, cfg.seed).
/// Throws SpecError on dimension mismatches and TrainingError when the loss
/// becomes non-finite.
HideResult hide(const SecretSignal& secret, const ContainerImage& cover, const NetworkSpec& spec,
                const TrainConfig& cfg);

/// forward(image_to_weights(container, spec), grid).
SignalBatch reveal(const ContainerImage& container, const NetworkSpec& spec,
                   const CoordinateBatch& grid);

}  // namespace inr_stego
