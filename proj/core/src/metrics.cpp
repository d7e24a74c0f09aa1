#include "inr_stego/metrics.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "inr_stego/error.hpp"

namespace inr_stego {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

template <typename T>
void require_same_length(std::span<const T> a, std::span<const T> b, const char* what) {
  if (a.size() != b.size()) {
    throw ShapeError(std::string(what) + ": length " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  if (a.empty()) throw ShapeError(std::string(what) + ": empty input");
}

double from_mse(double mse, double peak) {
  if (mse == 0.0) return kPerfectScore;
  return 10.0 * std::log10(peak * peak / mse);
}

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> taps{};
  double total = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double x = i - kWindow / 2;
    taps[i] = std::exp(-x * x / (2.0 * kSigma * kSigma));
    total += taps[i];
  }
  for (double& t : taps) t /= total;
  return taps;
}

// "Valid" separable Gaussian filter of a width×height plane.
std::vector<double> filter_valid(const std::vector<double>& plane, std::size_t width,
                                 std::size_t height) {
  static const std::array<double, kWindow> taps = gaussian_taps();
  const std::size_t out_w = width - kWindow + 1;
  const std::size_t out_h = height - kWindow + 1;
  std::vector<double> rows(out_w * height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += taps[k] * plane[y * width + x + k];
      rows[y * out_w + x] = acc;
    }
  }
  std::vector<double> out(out_w * out_h);
  for (std::size_t y = 0; y < out_h; ++y) {
    for (std::size_t x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += taps[k] * rows[(y + k) * out_w + x];
      out[y * out_w + x] = acc;
    }
  }
  return out;
}

double ssim_plane(const Image& a, const Image& b, std::size_t channel) {
  const std::size_t w = a.width;
  const std::size_t h = a.height;
  std::vector<double> pa(w * h), pb(w * h), aa(w * h), bb(w * h), ab(w * h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double va = a.at(x, y, channel);
      const double vb = b.at(x, y, channel);
      const std::size_t i = y * w + x;
      pa[i] = va;
      pb[i] = vb;
      aa[i] = va * va;
      bb[i] = vb * vb;
      ab[i] = va * vb;
    }
  }
  const auto mu_a = filter_valid(pa, w, h);
  const auto mu_b = filter_valid(pb, w, h);
  const auto e_aa = filter_valid(aa, w, h);
  const auto e_bb = filter_valid(bb, w, h);
  const auto e_ab = filter_valid(ab, w, h);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double var_a = e_aa[i] - mu_a[i] * mu_a[i];
    const double var_b = e_bb[i] - mu_b[i] * mu_b[i];
    const double cov = e_ab[i] - mu_a[i] * mu_b[i];
    const double num = (2.0 * mu_a[i] * mu_b[i] + kC1) * (2.0 * cov + kC2);
    const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + kC1) * (var_a + var_b + kC2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

}  // namespace

double apd(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  require_same_length(a, b, "apd");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(int{a[i]} - int{b[i]});
  return sum / static_cast<double>(a.size());
}

double ae(std::span<const float> a, std::span<const float> b) {
  require_same_length(a, b, "ae");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
  }
  return 32768.0 * sum / static_cast<double>(a.size());
}

double psnr(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, double peak) {
  require_same_length(a, b, "psnr");
  if (!(peak > 0.0)) throw DomainError("psnr: peak must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += d * d;
  }
  return from_mse(sum / static_cast<double>(a.size()), peak);
}

double psnr(std::span<const float> a, std::span<const float> b, double peak) {
  require_same_length(a, b, "psnr");
  if (!(peak > 0.0)) throw DomainError("psnr: peak must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += d * d;
  }
  return from_mse(sum / static_cast<double>(a.size()), peak);
}

double snr(std::span<const float> signal, std::span<const float> noisy) {
  require_same_length(signal, noisy, "snr");
  double power = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double s = signal[i];
    const double d = s - static_cast<double>(noisy[i]);
    power += s * s;
    noise += d * d;
  }
  if (power == 0.0) throw DomainError("snr: reference signal is all zero");
  if (noise == 0.0) return kPerfectScore;
  return 10.0 * std::log10(power / noise);
}

double ssim(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height) {
    throw ShapeError("ssim: image sizes differ");
  }
  if (a.width < static_cast<std::size_t>(kWindow) || a.height < static_cast<std::size_t>(kWindow)) {
    throw DomainError("ssim: images must be at least 11x11");
  }
  double total = 0.0;
  for (std::size_t c = 0; c < Image::channels; ++c) total += ssim_plane(a, b, c);
  return total / static_cast<double>(Image::channels);
}

std::string format_metric(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.4f", value);
  return buffer;
}

}  // namespace inr_stego
