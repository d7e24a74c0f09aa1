#include "inr_stego/numeric.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "inr_stego/parallel.hpp"

namespace inr_stego {

namespace {

// Column tile for the row-streaming kernels; keeps a K×tile block of b in L2.
constexpr std::size_t kColumnTile = 512;

std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, float fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("Matrix: data length " + std::to_string(data_.size()) + " != " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0f;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<float>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<float> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("Matrix::from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + shape_of(a) + " x " + shape_of(b));
  }
  Matrix out(a.rows(), b.cols());
  const std::size_t inner = a.cols();
  const std::size_t width = b.cols();
  parallel_for(a.rows(), [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t j0 = 0; j0 < width; j0 += kColumnTile) {
      const std::size_t j1 = std::min(width, j0 + kColumnTile);
      for (std::size_t i = row_begin; i < row_end; ++i) {
        float* dst = out.data() + i * width;
        for (std::size_t k = 0; k < inner; ++k) {
          const float scale = a(i, k);
          const float* src = b.data() + k * width;
          for (std::size_t j = j0; j < j1; ++j) dst[j] += scale * src[j];
        }
      }
    }
  });
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("matmul_tn: (" + shape_of(a) + ")^T x " + shape_of(b));
  }
  Matrix out(a.cols(), b.cols());
  const std::size_t inner = a.rows();
  const std::size_t width = b.cols();
  parallel_for(a.cols(), [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t j0 = 0; j0 < width; j0 += kColumnTile) {
      const std::size_t j1 = std::min(width, j0 + kColumnTile);
      for (std::size_t i = row_begin; i < row_end; ++i) {
        float* dst = out.data() + i * width;
        for (std::size_t k = 0; k < inner; ++k) {
          const float scale = a(k, i);
          const float* src = b.data() + k * width;
          for (std::size_t j = j0; j < j1; ++j) dst[j] += scale * src[j];
        }
      }
    }
  });
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_nt: " + shape_of(a) + " x (" + shape_of(b) + ")^T");
  }
  constexpr std::size_t kLanes = 8;
  Matrix out(a.rows(), b.rows());
  const std::size_t inner = a.cols();
  const std::size_t body = inner - inner % kLanes;
  parallel_for(a.rows(), [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
      const float* x = a.data() + i * inner;
      for (std::size_t j = 0; j < b.rows(); ++j) {
        const float* y = b.data() + j * inner;
        float lanes[kLanes] = {};
        for (std::size_t k = 0; k < body; k += kLanes) {
          for (std::size_t l = 0; l < kLanes; ++l) lanes[l] += x[k + l] * y[k + l];
        }
        for (std::size_t k = body; k < inner; ++k) lanes[k - body] += x[k] * y[k];
        out(i, j) = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) +
                    ((lanes[4] + lanes[5]) + (lanes[6] + lanes[7]));
      }
    }
  });
  return out;
}

float Rng::unit_float() {
  return static_cast<float>(next_u64() >> 40) * 0x1.0p-24f;
}

float Rng::uniform(float lo, float hi) {
  if (!(lo < hi)) {
    throw DomainError("Rng::uniform: require lo < hi, got [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + ")");
  }
  const double u = static_cast<double>(unit_float());
  float value = static_cast<float>(static_cast<double>(lo) + (static_cast<double>(hi) - lo) * u);
  // Rounding to float can land on hi itself.
  if (value >= hi) value = std::nextafter(hi, lo);
  return value;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("Rng::below: bound must be positive");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % bound;
}

Matrix uniform_fill(Rng& rng, std::size_t rows, std::size_t cols, float lo, float hi) {
  if (!(lo < hi)) {
    throw DomainError("uniform_fill: require lo < hi");
  }
  Matrix out(rows, cols);
  for (float& v : out.values()) v = rng.uniform(lo, hi);
  return out;
}

AdamState::AdamState(std::size_t parameter_count, AdamConfig config)
    : config_(config), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {}

}  // namespace inr_stego
