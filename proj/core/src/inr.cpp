#include "inr_stego/inr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "inr_stego/parallel.hpp"

namespace inr_stego {

namespace {

// Row-major B×dim -> feature-major dim×B.
Matrix to_feature_major(const std::vector<float>& rows, std::size_t dim) {
  const std::size_t count = rows.size() / dim;
  Matrix out(dim, count);
  for (std::size_t b = 0; b < count; ++b) {
    for (std::size_t d = 0; d < dim; ++d) out(d, b) = rows[b * dim + d];
  }
  return out;
}

std::vector<float> to_row_major(const Matrix& features) {
  std::vector<float> out(features.size());
  const std::size_t dim = features.rows();
  for (std::size_t d = 0; d < dim; ++d) {
    for (std::size_t b = 0; b < features.cols(); ++b) out[b * dim + d] = features(d, b);
  }
  return out;
}

void check_layout(const SirenNetwork& net, std::size_t input_dim) {
  if (net.weights.empty()) throw ShapeError("network has no layers");
  if (net.biases.size() != net.weights.size()) throw ShapeError("weights/biases count mismatch");
  std::size_t fan_in = input_dim;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const Matrix& w = net.weights[l];
    if (w.cols() != fan_in) {
      throw ShapeError("layer " + std::to_string(l) + " expects fan-in " +
                       std::to_string(w.cols()) + ", got " + std::to_string(fan_in));
    }
    if (net.biases[l].size() != w.rows()) {
      throw ShapeError("layer " + std::to_string(l) + " bias length mismatch");
    }
    fan_in = w.rows();
  }
}

double layer_frequency(const SirenNetwork& net, std::size_t layer) {
  return layer == 0 ? net.spec.omega0 : 1.0;
}

// Forward pass over a feature-major batch. When `cache` is non-null it
// receives each layer's output activation and, for sine layers, the local
// derivative omega·cos(omega·z).
struct ForwardCache {
  std::vector<Matrix> activations;  // activations[l] = output of layer l
  std::vector<Matrix> derivatives;  // empty for the final affine layer
};

Matrix run_layers(const SirenNetwork& net, const Matrix& input, ForwardCache* cache) {
  const std::size_t layers = net.weights.size();
  if (cache != nullptr) {
    cache->activations.assign(layers, Matrix());
    cache->derivatives.assign(layers, Matrix());
  }
  Matrix current = input;
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix z = matmul(net.weights[l], current);
    const std::vector<float>& bias = net.biases[l];
    const bool is_last = l + 1 == layers;
    const float omega = static_cast<float>(layer_frequency(net, l));
    Matrix derivative;
    if (!is_last && cache != nullptr) derivative = Matrix(z.rows(), z.cols());
    parallel_for(z.rows(), [&](std::size_t r0, std::size_t r1) {
      for (std::size_t r = r0; r < r1; ++r) {
        float* row = z.data() + r * z.cols();
        const float b = bias[r];
        if (is_last) {
          for (std::size_t c = 0; c < z.cols(); ++c) row[c] += b;
          continue;
        }
        float* drow = derivative.empty() ? nullptr : derivative.data() + r * z.cols();
        if (l == 0) {
          // The omega0 scaling would amplify float rounding of the phase
          // ~30x, so the first layer's phase and sine are taken in double.
          const double omega0 = net.spec.omega0;
          for (std::size_t c = 0; c < z.cols(); ++c) {
            const double phase = omega0 * (static_cast<double>(row[c]) + b);
            row[c] = static_cast<float>(std::sin(phase));
            if (drow != nullptr) drow[c] = static_cast<float>(omega0 * std::cos(phase));
          }
          continue;
        }
        for (std::size_t c = 0; c < z.cols(); ++c) {
          const float phase = omega * (row[c] + b);
          row[c] = std::sin(phase);
          if (drow != nullptr) drow[c] = omega * std::cos(phase);
        }
      }
    });
    if (cache != nullptr) {
      cache->derivatives[l] = std::move(derivative);
      cache->activations[l] = z;
    }
    current = std::move(z);
  }
  return current;
}

}  // namespace

double NetworkSpec::hidden_init_bound(std::size_t hidden_width) {
  return std::sqrt(6.0 / static_cast<double>(hidden_width));
}

void NetworkSpec::validate() const {
  if (input_dim < 1) throw SpecError("input_dim must be >= 1");
  if (output_dim < 1) throw SpecError("output_dim must be >= 1");
  if (hidden_width < 1) throw SpecError("hidden_width must be >= 1");
  if (num_layers < 3) throw SpecError("num_layers must be >= 3");
  for (std::size_t i = 0; i < variable_layers.size(); ++i) {
    const std::size_t layer = variable_layers[i];
    if (layer == 0 || layer + 1 >= num_layers) {
      throw SpecError("variable layer " + std::to_string(layer) +
                      " is not a hidden-to-hidden layer (valid: 1.." +
                      std::to_string(num_layers - 2) + ")");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (variable_layers[j] == layer) {
        throw SpecError("variable layer " + std::to_string(layer) + " listed twice");
      }
    }
  }
  if (!std::isfinite(omega0) || omega0 <= 0.0) throw SpecError("omega0 must be positive");
  if (!std::isfinite(w_min) || !std::isfinite(w_max) || !(w_min < w_max)) {
    throw SpecError("quantization range requires finite w_min < w_max");
  }
  if (prng_algorithm_id != Rng::algorithm_id) {
    throw SpecError("unsupported prng_algorithm_id '" + prng_algorithm_id + "' (this build uses " +
                    std::string(Rng::algorithm_id) + ")");
  }
}

NetworkSpec make_network_spec(std::size_t input_dim, std::size_t output_dim,
                              std::size_t hidden_width, std::uint64_t seed) {
  NetworkSpec spec;
  spec.input_dim = input_dim;
  spec.output_dim = output_dim;
  spec.hidden_width = hidden_width;
  spec.seed = seed;
  if (hidden_width > 0) {
    const double bound = NetworkSpec::hidden_init_bound(hidden_width);
    spec.w_min = -bound;
    spec.w_max = bound;
  }
  return spec;
}

bool SirenNetwork::is_variable(std::size_t layer) const noexcept {
  return std::find(spec.variable_layers.begin(), spec.variable_layers.end(), layer) !=
         spec.variable_layers.end();
}

SirenNetwork init_network(const NetworkSpec& spec) {
  spec.validate();
  SirenNetwork net;
  net.spec = spec;
  Rng rng(spec.seed);
  const std::size_t layers = spec.num_layers;
  const auto hidden_bound = static_cast<float>(NetworkSpec::hidden_init_bound(spec.hidden_width));
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t rows = l + 1 == layers ? spec.output_dim : spec.hidden_width;
    const std::size_t cols = l == 0 ? spec.input_dim : spec.hidden_width;
    const float bound = l == 0 ? 1.0f / static_cast<float>(spec.input_dim) : hidden_bound;
    net.weights.push_back(uniform_fill(rng, rows, cols, -bound, bound));
    const auto bias_bound = static_cast<float>(1.0 / std::sqrt(static_cast<double>(cols)));
    std::vector<float> bias(rows);
    for (float& b : bias) b = rng.uniform(-bias_bound, bias_bound);
    net.biases.push_back(std::move(bias));
  }
  return net;
}

SignalBatch forward(const SirenNetwork& net, const CoordinateBatch& coords) {
  if (coords.dim == 0 || coords.coords.size() % coords.dim != 0) {
    throw ShapeError("forward: malformed coordinate batch");
  }
  check_layout(net, coords.dim);
  const Matrix out = run_layers(net, to_feature_major(coords.coords, coords.dim), nullptr);
  return SignalBatch{out.rows(), to_row_major(out)};
}

LossAndGrads forward_backward(const SirenNetwork& net, const CoordinateBatch& coords,
                              const SignalBatch& targets) {
  if (coords.dim == 0 || coords.coords.size() % coords.dim != 0) {
    throw ShapeError("forward_backward: malformed coordinate batch");
  }
  check_layout(net, coords.dim);
  const std::size_t count = coords.count();
  const std::size_t out_dim = net.weights.back().rows();
  if (targets.dim != out_dim || targets.count() != count || count == 0) {
    throw ShapeError("forward_backward: targets must be " + std::to_string(count) + "x" +
                     std::to_string(out_dim));
  }

  const Matrix input = to_feature_major(coords.coords, coords.dim);
  ForwardCache cache;
  const Matrix output = run_layers(net, input, &cache);
  const Matrix target = to_feature_major(targets.values, targets.dim);

  LossAndGrads result;
  Matrix delta(out_dim, count);
  const float scale = 2.0f / static_cast<float>(count);
  double sum = 0.0;
  for (std::size_t r = 0; r < out_dim; ++r) {
    for (std::size_t b = 0; b < count; ++b) {
      const float diff = output(r, b) - target(r, b);
      sum += static_cast<double>(diff) * static_cast<double>(diff);
      delta(r, b) = scale * diff;
    }
  }
  result.loss = sum / static_cast<double>(count);
  if (!std::isfinite(result.loss)) {
    throw NumericError("forward_backward: non-finite loss");
  }

  const auto& variable = net.spec.variable_layers;
  result.grads.assign(variable.size(), Matrix());
  std::size_t lowest = net.weights.size();
  for (std::size_t layer : variable) {
    if (layer >= net.weights.size()) {
      throw SpecError("variable layer " + std::to_string(layer) + " out of range");
    }
    lowest = std::min(lowest, layer);
  }

  for (std::size_t l = net.weights.size(); l-- > lowest;) {
    const auto slot = std::find(variable.begin(), variable.end(), l);
    if (slot != variable.end()) {
      const Matrix& layer_input = l == 0 ? input : cache.activations[l - 1];
      result.grads[static_cast<std::size_t>(slot - variable.begin())] = matmul_nt(delta, layer_input);
    }
    if (l == lowest) break;
    Matrix back = matmul_tn(net.weights[l], delta);
    const Matrix& derivative = cache.derivatives[l - 1];
    float* dst = back.data();
    const float* dv = derivative.data();
    for (std::size_t i = 0; i < back.size(); ++i) dst[i] *= dv[i];
    delta = std::move(back);
  }
  for (const Matrix& g : result.grads) {
    if (!g.all_finite()) throw NumericError("forward_backward: non-finite gradient");
  }
  return result;
}

}  // namespace inr_stego
