#pragma once

// SIREN coordinate network: construction from the shared spec, batched
// evaluation and a hand-written backward pass that only produces gradients
// for the variable (image-carrying) weight matrices.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "inr_stego/numeric.hpp"

namespace inr_stego {

/// Everything sender and recipient must agree on to rebuild the base network.
struct NetworkSpec {
  std::size_t input_dim = 0;     // k, coordinate dimension
  std::size_t output_dim = 0;    // m, sample dimension
  std::size_t hidden_width = 0;  // N, equal to the cover image side
  std::size_t num_layers = 6;    // L, number of weight matrices
  std::array<std::size_t, 3> variable_layers{1, 2, 3};
  double omega0 = 30.0;
  std::uint64_t seed = 0;
  double w_min = 0.0;
  double w_max = 0.0;
  std::string prng_algorithm_id{Rng::algorithm_id};

  /// Throws SpecError describing the first violated invariant.
  void validate() const;

  /// Half-width of the hidden-layer initialization envelope, sqrt(6/N).
  static double hidden_init_bound(std::size_t hidden_width);

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// Spec with the default architecture (L = 6, variable layers {1,2,3},
/// omega0 = 30, quantization range = hidden init envelope).
NetworkSpec make_network_spec(std::size_t input_dim, std::size_t output_dim,
                              std::size_t hidden_width, std::uint64_t seed);

/// Weights W_l are stored rows = fan-out, cols = fan-in, so a layer computes
/// y = W·x + b. Layer 0 applies sin(omega0 · ·), hidden layers sin(·), and
/// the last layer is affine.
struct SirenNetwork {
  NetworkSpec spec;
  std::vector<Matrix> weights;
  std::vector<std::vector<float>> biases;

  std::size_t layer_count() const noexcept { return weights.size(); }
  bool is_variable(std::size_t layer) const noexcept;
};

/// B coordinates of dimension k, row-major B×k.
struct CoordinateBatch {
  std::size_t dim = 0;
  std::vector<float> coords;

  std::size_t count() const noexcept { return dim == 0 ? 0 : coords.size() / dim; }
};

/// B samples of dimension m, row-major B×m.
struct SignalBatch {
  std::size_t dim = 0;
  std::vector<float> values;

  std::size_t count() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
};

/// Deterministic in (seed, prng_algorithm_id). Draw order: for each layer in
/// turn, its weights row-major, then its biases.
///   layer 0:       W ~ U(-1/k, 1/k)
///   layers 1..L-1: W ~ U(-sqrt(6/N), sqrt(6/N))
///   all biases:    b ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in))
SirenNetwork init_network(const NetworkSpec& spec);

SignalBatch forward(const SirenNetwork& net, const CoordinateBatch& coords);

struct LossAndGrads {
  double loss = 0.0;
  /// One matrix per entry of spec.variable_layers, same order.
  std::vector<Matrix> grads;
};

/// loss = mean_i ||d_i - f(x_i)||², gradients for the variable layers only.
LossAndGrads forward_backward(const SirenNetwork& net, const CoordinateBatch& coords,
                              const SignalBatch& targets);

}  // namespace inr_stego
