#include "inr_stego/stego.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "inr_stego/error.hpp"
#include "inr_stego/metrics.hpp"

namespace inr_stego {

namespace {

void require_square_variable_layers(const SirenNetwork& net) {
  const std::size_t n = net.spec.hidden_width;
  for (const std::size_t layer : net.spec.variable_layers) {
    if (layer >= net.weights.size()) {
      throw SpecError("variable layer " + std::to_string(layer) + " does not exist");
    }
    const Matrix& w = net.weights[layer];
    if (w.rows() != n || w.cols() != n) {
      throw SpecError("variable layer " + std::to_string(layer) + " is " +
                      std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                      ", expected " + std::to_string(n) + "x" + std::to_string(n));
    }
  }
}

struct Minibatch {
  CoordinateBatch coords;
  SignalBatch targets;
};

// Hands out coordinate minibatches: full batch in grid order when the batch
// covers the whole grid, otherwise consecutive slices of a permutation that
// is reshuffled (Fisher-Yates) at the start of every epoch.
class BatchSampler {
 public:
  BatchSampler(const CoordinateBatch& grid, const SignalBatch& targets, std::size_t batch_size,
               std::uint64_t seed)
      : grid_(grid), targets_(targets), batch_size_(batch_size), rng_(seed) {
    order_.resize(grid.count());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    position_ = order_.size();
  }

  bool full_batch() const noexcept { return batch_size_ >= order_.size(); }

  const Minibatch& next() {
    if (full_batch()) {
      if (current_.coords.coords.empty()) current_ = Minibatch{grid_, targets_};
      return current_;
    }
    if (position_ >= order_.size()) {
      for (std::size_t i = order_.size() - 1; i > 0; --i) {
        std::swap(order_[i], order_[rng_.below(i + 1)]);
      }
      position_ = 0;
    }
    const std::size_t take = std::min(batch_size_, order_.size() - position_);
    const std::size_t k = grid_.dim;
    const std::size_t m = targets_.dim;
    current_.coords = CoordinateBatch{k, std::vector<float>(take * k)};
    current_.targets = SignalBatch{m, std::vector<float>(take * m)};
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t src = order_[position_ + i];
      std::copy_n(grid_.coords.begin() + static_cast<std::ptrdiff_t>(src * k), k,
                  current_.coords.coords.begin() + static_cast<std::ptrdiff_t>(i * k));
      std::copy_n(targets_.values.begin() + static_cast<std::ptrdiff_t>(src * m), m,
                  current_.targets.values.begin() + static_cast<std::ptrdiff_t>(i * m));
    }
    position_ += take;
    return current_;
  }

 private:
  const CoordinateBatch& grid_;
  const SignalBatch& targets_;
  std::size_t batch_size_;
  Rng rng_;
  std::vector<std::size_t> order_;
  std::size_t position_ = 0;
  Minibatch current_;
};

FinalMetrics measure(const ContainerImage& container, const ContainerImage& cover,
                     const NetworkSpec& spec, const CoordinateBatch& grid,
                     const SignalBatch& targets) {
  FinalMetrics metrics;
  metrics.cover_apd = apd(container.planes, cover.planes);
  metrics.cover_psnr = psnr(std::span<const std::uint8_t>(container.planes),
                            std::span<const std::uint8_t>(cover.planes), 255.0);
  const SignalBatch revealed = reveal(container, spec, grid);
  double sum = 0.0;
  for (std::size_t i = 0; i < revealed.values.size(); ++i) {
    const double d = static_cast<double>(revealed.values[i]) - targets.values[i];
    sum += d * d;
  }
  metrics.secret_mse = sum / static_cast<double>(revealed.values.size());
  metrics.secret_psnr = psnr(std::span<const float>(revealed.values),
                             std::span<const float>(targets.values), 2.0);
  return metrics;
}

}  // namespace

void QuantizationParams::validate() const {
  if (!std::isfinite(w_min) || !std::isfinite(w_max) || !(w_min < w_max)) {
    throw DomainError("quantization range requires finite w_min < w_max");
  }
}

std::uint8_t quantize_level(float w, const QuantizationParams& q) {
  if (std::isnan(w)) return 0;
  const double clamped = std::clamp(static_cast<double>(w), q.w_min, q.w_max);
  const double scaled = 255.0 * (clamped - q.w_min) / (q.w_max - q.w_min);
  // scaled >= 0, so floor(x + 0.5) rounds half away from zero.
  return static_cast<std::uint8_t>(std::clamp(std::floor(scaled + 0.5), 0.0, 255.0));
}

float dequantize_level(std::uint8_t level, const QuantizationParams& q) {
  return static_cast<float>(std::lerp(q.w_min, q.w_max, static_cast<double>(level) / 255.0));
}

Matrix quantize_dequantize(const Matrix& w, const QuantizationParams& q) {
  q.validate();
  Matrix out(w.rows(), w.cols());
  const auto in = w.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < in.size(); ++i) dst[i] = dequantize_level(quantize_level(in[i], q), q);
  return out;
}

ContainerImage ContainerImage::from_image(const Image& image) {
  if (image.width != image.height) {
    throw ShapeError("container/cover image must be square, got " + std::to_string(image.width) +
                     "x" + std::to_string(image.height));
  }
  ContainerImage out(image.width);
  for (std::size_t r = 0; r < out.side; ++r) {
    for (std::size_t col = 0; col < out.side; ++col) {
      for (std::size_t c = 0; c < 3; ++c) out.at(c, r, col) = image.at(col, r, c);
    }
  }
  return out;
}

Image ContainerImage::to_image() const {
  Image image(side, side);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t col = 0; col < side; ++col) {
      for (std::size_t c = 0; c < 3; ++c) image.at(col, r, c) = at(c, r, col);
    }
  }
  return image;
}

ContainerImage weights_to_image(const SirenNetwork& net) {
  require_square_variable_layers(net);
  const QuantizationParams q = QuantizationParams::from_spec(net.spec);
  q.validate();
  const std::size_t n = net.spec.hidden_width;
  ContainerImage image(n);
  for (std::size_t c = 0; c < 3; ++c) {
    const Matrix& w = net.weights[net.spec.variable_layers[c]];
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t col = 0; col < n; ++col) image.at(c, r, col) = quantize_level(w(r, col), q);
    }
  }
  return image;
}

SirenNetwork image_to_weights(const ContainerImage& image, const NetworkSpec& spec) {
  if (image.side != spec.hidden_width) {
    throw ShapeError("container is " + std::to_string(image.side) + "x" +
                     std::to_string(image.side) + " but the key expects " +
                     std::to_string(spec.hidden_width) + "x" + std::to_string(spec.hidden_width));
  }
  SirenNetwork net = init_network(spec);
  const QuantizationParams q = QuantizationParams::from_spec(spec);
  const std::size_t n = spec.hidden_width;
  for (std::size_t c = 0; c < 3; ++c) {
    Matrix& w = net.weights[spec.variable_layers[c]];
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t col = 0; col < n; ++col) w(r, col) = dequantize_level(image.at(c, r, col), q);
    }
  }
  return net;
}

CoverLossAndGrad cover_loss_and_grad(std::span<const Matrix> stacked, const ContainerImage& cover,
                                     const QuantizationParams& q) {
  q.validate();
  if (stacked.size() != 3) throw ShapeError("cover loss expects exactly 3 stacked matrices");
  const std::size_t n = cover.side;
  for (const Matrix& w : stacked) {
    if (w.rows() != n || w.cols() != n) {
      throw ShapeError("stacked weights must be " + std::to_string(n) + "x" + std::to_string(n));
    }
  }
  const double count = 3.0 * static_cast<double>(n) * static_cast<double>(n);
  const auto grad_scale = static_cast<float>(2.0 / count);
  CoverLossAndGrad result;
  double sum = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    Matrix grad(n, n);
    const Matrix& w = stacked[c];
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t col = 0; col < n; ++col) {
        const float diff = w(r, col) - dequantize_level(cover.at(c, r, col), q);
        sum += static_cast<double>(diff) * static_cast<double>(diff);
        grad(r, col) = grad_scale * diff;
      }
    }
    result.grad[c] = std::move(grad);
  }
  result.loss = sum / count;
  return result;
}

Matrix ste_gradient(const Matrix& grad_quantized, const Matrix& w, const QuantizationParams& q) {
  if (grad_quantized.rows() != w.rows() || grad_quantized.cols() != w.cols()) {
    throw ShapeError("ste_gradient: gradient and weight shapes differ");
  }
  Matrix out = grad_quantized;
  auto dst = out.values();
  const auto weights = w.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double v = weights[i];
    if (!(v >= q.w_min && v <= q.w_max)) dst[i] = 0.0f;
  }
  return out;
}

double cover_loss_scale(const QuantizationParams& q) {
  const double to_unit = 2.0 / (q.w_max - q.w_min);
  return 3.0 * to_unit * to_unit;
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw UsageError("batch_size must be >= 1");
  if (!std::isfinite(alpha) || alpha <= 0.0) throw UsageError("learning rate must be positive");
  if (!std::isfinite(beta) || beta < 0.0) throw UsageError("beta must be >= 0");
}

HideResult hide(const SecretSignal& secret, const ContainerImage& cover, const NetworkSpec& spec,
                const TrainConfig& cfg) {
  spec.validate();
  cfg.validate();
  secret.validate();
  if (secret.dims.size() != spec.input_dim) {
    throw SpecError("secret has " + std::to_string(secret.dims.size()) +
                    " coordinate axes but the key expects input_dim " +
                    std::to_string(spec.input_dim));
  }
  if (secret.channels != spec.output_dim) {
    throw SpecError("secret has " + std::to_string(secret.channels) +
                    " channels but the key expects output_dim " + std::to_string(spec.output_dim));
  }
  if (cover.side != spec.hidden_width) {
    throw SpecError("cover is " + std::to_string(cover.side) + "x" + std::to_string(cover.side) +
                    " but the key expects " + std::to_string(spec.hidden_width) + "x" +
                    std::to_string(spec.hidden_width));
  }

  const QuantizationParams q = QuantizationParams::from_spec(spec);
  const CoordinateBatch grid = make_grid(secret.dims);
  const SignalBatch targets = secret.as_batch();
  const double cover_weight = cfg.beta * cover_loss_scale(q);
  const auto cover_weight_f = static_cast<float>(cover_weight);

  HideResult result;
  result.network = init_network(spec);
  SirenNetwork& net = result.network;
  SirenNetwork evaluated = net;
  std::array<AdamState, 3> optimizers{
      AdamState(spec.hidden_width * spec.hidden_width, AdamConfig{.alpha = cfg.alpha}),
      AdamState(spec.hidden_width * spec.hidden_width, AdamConfig{.alpha = cfg.alpha}),
      AdamState(spec.hidden_width * spec.hidden_width, AdamConfig{.alpha = cfg.alpha})};
  BatchSampler sampler(grid, targets, cfg.batch_size, cfg.seed);

  long last_good_step = -1;
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    std::array<Matrix, 3> used;
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t layer = spec.variable_layers[c];
      used[c] = cfg.qat ? quantize_dequantize(net.weights[layer], q) : net.weights[layer];
      evaluated.weights[layer] = used[c];
    }
    const Minibatch& batch = sampler.next();

    LossAndGrads secret_term;
    try {
      secret_term = forward_backward(evaluated, batch.coords, batch.targets);
    } catch (const NumericError& e) {
      throw TrainingError("training diverged at step " + std::to_string(step) + ": " + e.what(),
                          last_good_step);
    }
    const CoverLossAndGrad cover_term = cover_loss_and_grad(used, cover, q);
    const double total = secret_term.loss + cover_weight * cover_term.loss;
    if (!std::isfinite(total)) {
      throw TrainingError("training diverged at step " + std::to_string(step) +
                              ": non-finite total loss",
                          last_good_step);
    }

    for (std::size_t c = 0; c < 3; ++c) {
      Matrix& grad = secret_term.grads[c];
      auto g = grad.values();
      const auto gc = cover_term.grad[c].values();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += cover_weight_f * gc[i];
      Matrix& weights = net.weights[spec.variable_layers[c]];
      if (cfg.qat) grad = ste_gradient(grad, weights, q);
      try {
        adam_step(optimizers[c], weights.values(), std::span<const float>(grad.values()));
      } catch (const NumericError& e) {
        throw TrainingError("training diverged at step " + std::to_string(step) + ": " + e.what(),
                            last_good_step);
      }
    }

    const bool log_now = (cfg.log_every > 0 && step % cfg.log_every == 0) || step + 1 == cfg.steps;
    if (log_now) {
      result.report.records.push_back(TrainRecord{step, secret_term.loss, cover_term.loss, total});
    }
    last_good_step = static_cast<long>(step);
  }

  result.container = weights_to_image(net);
  result.report.final_metrics = measure(result.container, cover, spec, grid, targets);
  return result;
}

SignalBatch reveal(const ContainerImage& container, const NetworkSpec& spec,
                   const CoordinateBatch& grid) {
  spec.validate();
  if (grid.dim != spec.input_dim) {
    throw ShapeError("reveal: grid dimension " + std::to_string(grid.dim) +
                     " does not match input_dim " + std::to_string(spec.input_dim));
  }
  return forward(image_to_weights(container, spec), grid);
}

}  // namespace inr_stego
