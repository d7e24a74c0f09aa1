#pragma once

// Dense float matrices, the seeded generator shared by sender and recipient,
// and the Adam optimizer. Every reduction here runs in a fixed order so that
// results are bit-identical across runs and worker counts.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "inr_stego/error.hpp"

namespace inr_stego {

/// Row-major matrix of 32-bit floats.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, float fill = 0.0f);
  Matrix(std::size_t rows, std::size_t cols, std::vector<float> data);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<float>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  float operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<float> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const float> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  std::span<float> values() noexcept { return data_; }
  std::span<const float> values() const noexcept { return data_; }
  float* data() noexcept { return data_.data(); }
  const float* data() const noexcept { return data_.data(); }

  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

/// a·b. Each output element accumulates over k in ascending order.
Matrix matmul(const Matrix& a, const Matrix& b);

/// aᵀ·b without materializing the transpose. Accumulates over a's rows in
/// ascending order.
Matrix matmul_tn(const Matrix& a, const Matrix& b);

/// a·bᵀ. Each dot product is split over 8 interleaved partial sums that are
/// combined in a fixed tree, so the result does not depend on scheduling.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

/// Pinned 64-bit generator. The recipient regenerates the pre-defined weights
/// from the seed, so the stream must be identical everywhere: only the raw
/// mt19937_64 output (fixed by the C++ standard) is used, never the
/// implementation-defined std distributions.
class Rng {
 public:
  static constexpr std::string_view algorithm_id = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 24 bits of resolution (exact in float).
  float unit_float();
  /// Uniform on [lo, hi). Throws DomainError unless lo < hi.
  float uniform(float lo, float hi);
  /// Uniform integer in [0, bound). Rejection sampled, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// rows×cols matrix of i.i.d. U[lo, hi) draws taken in row-major order.
Matrix uniform_fill(Rng& rng, std::size_t rows, std::size_t cols, float lo, float hi);

struct AdamConfig {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment estimates for one parameter block. Moments are kept in double
/// regardless of the parameter type.
class AdamState {
 public:
  AdamState(std::size_t parameter_count, AdamConfig config = {});

  std::size_t size() const noexcept { return m_.size(); }
  std::uint64_t step_count() const noexcept { return t_; }
  const AdamConfig& config() const noexcept { return config_; }
  std::span<const double> first_moment() const noexcept { return m_; }
  std::span<const double> second_moment() const noexcept { return v_; }

  template <std::floating_point T>
  friend void adam_step(AdamState& state, std::span<T> params, std::span<const T> grads);

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t t_ = 0;
};

/// One bias-corrected Adam update, in place. Throws ShapeError on size
/// mismatch and NumericError (before touching any state) on a non-finite
/// gradient.
template <std::floating_point T>
void adam_step(AdamState& state, std::span<T> params, std::span<const T> grads) {
  if (params.size() != state.m_.size() || grads.size() != params.size()) {
    throw ShapeError("adam_step: parameter/gradient/state sizes disagree");
  }
  for (const T g : grads) {
    if (!std::isfinite(g)) throw NumericError("adam_step: non-finite gradient");
  }
  const AdamConfig& c = state.config_;
  state.t_ += 1;
  const double t = static_cast<double>(state.t_);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = static_cast<double>(grads[i]);
    state.m_[i] = c.beta1 * state.m_[i] + (1.0 - c.beta1) * g;
    state.v_[i] = c.beta2 * state.v_[i] + (1.0 - c.beta2) * g * g;
    const double m_hat = state.m_[i] / correction1;
    const double v_hat = state.v_[i] / correction2;
    const double update = c.alpha * m_hat / (std::sqrt(v_hat) + c.epsilon);
    params[i] = static_cast<T>(static_cast<double>(params[i]) - update);
  }
}

}  // namespace inr_stego
