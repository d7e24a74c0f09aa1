#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "inr_stego/fixtures.hpp"
#include "inr_stego/stego.hpp"
#include "oracles.hpp"

using namespace inr_stego;

namespace {

const QuantizationParams kUnit{-1.0, 1.0};

Matrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols, float lo, float hi) {
  std::uniform_real_distribution<float> dist(lo, hi);
  Matrix m(rows, cols);
  for (float& x : m.values()) x = dist(gen);
  return m;
}

// Tiny but real hide setup: 8×8 still image into a 16×16 cover.
struct SmallTask {
  NetworkSpec spec = make_network_spec(2, 3, 16, 21);
  SecretSignal secret = make_test_image(8, 8);
  ContainerImage cover = ContainerImage::from_image(make_landscape_cover(16));
};

TrainConfig small_config(std::size_t steps) {
  TrainConfig cfg;
  cfg.steps = steps;
  cfg.batch_size = 4096;
  cfg.log_every = 50;
  return cfg;
}

double secret_mse(const HideResult& r) { return r.report.final_metrics.secret_mse; }

}  // namespace

TEST_CASE("zero quantizes to level 128") {
  CHECK(quantize_level(0.0f, kUnit) == 128);
  const Matrix q = quantize_dequantize(Matrix(1, 1, 0.0f), kUnit);
  CHECK(q(0, 0) == doctest::Approx(1.0 / 255.0).epsilon(1e-6));
  CHECK(std::abs(q(0, 0) - 0.0039216f) < 1e-7f);
}

TEST_CASE("endpoints are grid points") {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 100; ++i) {
    const float lo = std::uniform_real_distribution<float>(-5.0f, 0.0f)(gen);
    const float hi = lo + std::uniform_real_distribution<float>(0.01f, 5.0f)(gen);
    const QuantizationParams q{lo, hi};
    const Matrix m = Matrix::from_rows({{lo, hi}});
    const Matrix out = quantize_dequantize(m, q);
    CHECK(out(0, 0) == lo);
    CHECK(out(0, 1) == hi);
  }
  CHECK(dequantize_level(0, kUnit) == -1.0f);
  CHECK(dequantize_level(255, kUnit) == 1.0f);
}

TEST_CASE("quantize_dequantize is idempotent and lands on the grid") {
  std::mt19937_64 gen(2);
  const QuantizationParams q{-0.3, 0.45};
  const Matrix w = random_matrix(gen, 100, 100, -0.6f, 0.7f);
  const Matrix once = quantize_dequantize(w, q);
  CHECK(quantize_dequantize(once, q) == once);
  for (const float x : once.values()) CHECK(dequantize_level(quantize_level(x, q), q) == x);
}

TEST_CASE("out-of-range and non-finite weights clamp") {
  CHECK(quantize_level(5.0f, kUnit) == 255);
  CHECK(quantize_level(-5.0f, kUnit) == 0);
  CHECK(quantize_level(INFINITY, kUnit) == 255);
  CHECK(quantize_level(-INFINITY, kUnit) == 0);
  CHECK(quantize_level(NAN, kUnit) == 0);
  CHECK_THROWS_AS(quantize_dequantize(Matrix(1, 1), QuantizationParams{1.0, 1.0}), DomainError);
}

TEST_CASE("weights_to_image scaling") {
  NetworkSpec spec = make_network_spec(2, 3, 4, 1);
  spec.w_min = 0.0;
  spec.w_max = 255.0;
  SirenNetwork net = init_network(spec);
  net.weights[1](2, 3) = 42.0f;
  CHECK(weights_to_image(net).at(0, 2, 3) == 42);

  spec.w_min = -1.0;
  spec.w_max = 1.0;
  net.spec = spec;
  net.weights[2] = Matrix(4, 4, -1.0f);
  const ContainerImage img = weights_to_image(net);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) CHECK(img.at(1, r, c) == 0);
  }

  net.weights[3] = Matrix(4, 3);
  CHECK_THROWS_AS(weights_to_image(net), SpecError);
}

TEST_CASE("container round trip equals quantize_dequantize bit-exactly") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    NetworkSpec spec = make_network_spec(3, 3, 8 + gen() % 9, gen());
    const double lo = std::uniform_real_distribution<double>(-2.0, 0.5)(gen);
    spec.w_min = lo;
    spec.w_max = lo + std::uniform_real_distribution<double>(1e-3, 3.0)(gen);
    SirenNetwork net = init_network(spec);
    for (const std::size_t layer : spec.variable_layers) {
      net.weights[layer] = random_matrix(gen, spec.hidden_width, spec.hidden_width,
                                         static_cast<float>(spec.w_min - 0.5),
                                         static_cast<float>(spec.w_max + 0.5));
    }
    const SirenNetwork back = image_to_weights(weights_to_image(net), spec);
    const QuantizationParams q = QuantizationParams::from_spec(spec);
    const SirenNetwork base = init_network(spec);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      if (net.is_variable(l)) {
        CHECK(back.weights[l] == quantize_dequantize(net.weights[l], q));
      } else {
        CHECK(back.weights[l] == base.weights[l]);
      }
    }
  }
}

TEST_CASE("image_to_weights endpoints, shape checks and layer sensitivity") {
  NetworkSpec spec = make_network_spec(2, 3, 4, 5);
  spec.w_min = -1.0;
  spec.w_max = 1.0;
  ContainerImage img(4);
  img.at(0, 0, 0) = 0;
  img.at(0, 0, 1) = 255;
  const SirenNetwork net = image_to_weights(img, spec);
  CHECK(net.weights[1](0, 0) == -1.0f);
  CHECK(net.weights[1](0, 1) == 1.0f);

  CHECK_THROWS_AS(image_to_weights(ContainerImage(5), spec), ShapeError);

  NetworkSpec a = make_network_spec(2, 3, 8, 5);
  a.num_layers = 7;
  NetworkSpec b = a;
  b.variable_layers = {2, 3, 4};
  ContainerImage container(8);
  std::mt19937_64 gen(6);
  for (std::uint8_t& p : container.planes) p = static_cast<std::uint8_t>(gen() % 256);
  const CoordinateBatch grid = make_grid(std::vector<std::size_t>{6, 6});
  CHECK(reveal(container, a, grid).values != reveal(container, b, grid).values);
}

TEST_CASE("ContainerImage image conversion") {
  Image img(3, 3);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i * 7);
  const ContainerImage c = ContainerImage::from_image(img);
  CHECK(c.at(2, 1, 0) == img.at(0, 1, 2));
  CHECK(c.to_image() == img);
  CHECK_THROWS_AS(ContainerImage::from_image(Image(3, 4)), ShapeError);
}

TEST_CASE("cover loss examples") {
  const std::size_t n = 4;
  ContainerImage cover(n);
  std::mt19937_64 gen(7);
  for (std::uint8_t& p : cover.planes) p = static_cast<std::uint8_t>(gen() % 256);
  std::array<Matrix, 3> exact;
  for (std::size_t c = 0; c < 3; ++c) {
    exact[c] = Matrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t col = 0; col < n; ++col) exact[c](r, col) = dequantize_level(cover.at(c, r, col), kUnit);
    }
  }
  const CoverLossAndGrad zero = cover_loss_and_grad(exact, cover, kUnit);
  CHECK(zero.loss == 0.0);
  for (const Matrix& g : zero.grad) CHECK(g == Matrix(n, n));

  // Grid alignment: weights exactly on the rescaled cover export as the cover.
  NetworkSpec spec = make_network_spec(2, 3, n, 1);
  spec.w_min = -1.0;
  spec.w_max = 1.0;
  SirenNetwork net = init_network(spec);
  for (std::size_t c = 0; c < 3; ++c) net.weights[spec.variable_layers[c]] = exact[c];
  CHECK(weights_to_image(net) == cover);

  ContainerImage white(n);
  std::fill(white.planes.begin(), white.planes.end(), std::uint8_t{255});
  const std::array<Matrix, 3> low{Matrix(n, n, -1.0f), Matrix(n, n, -1.0f), Matrix(n, n, -1.0f)};
  const CoverLossAndGrad four = cover_loss_and_grad(low, white, kUnit);
  CHECK(four.loss == 4.0);
  CHECK(four.grad[0](0, 0) == doctest::Approx(2.0 * -2.0 / 48.0));

  const std::array<Matrix, 2> too_few{Matrix(n, n), Matrix(n, n)};
  CHECK_THROWS_AS(cover_loss_and_grad(too_few, cover, kUnit), ShapeError);
  const std::array<Matrix, 3> wrong{Matrix(n, n), Matrix(n, n), Matrix(n, 3)};
  CHECK_THROWS_AS(cover_loss_and_grad(wrong, cover, kUnit), ShapeError);
}

TEST_CASE("cover loss gradient matches central differences") {
  for (const auto& p : oracle::cover_gradient_probes(8, 10, 1e-3)) {
    INFO(p.where, " analytic=", p.analytic, " numeric=", p.numeric);
    CHECK(p.error < 1e-4);
  }
}

TEST_CASE("clamp-gated straight-through estimator") {
  std::mt19937_64 gen(9);
  const Matrix grad = random_matrix(gen, 4, 4, -1.0f, 1.0f);
  const Matrix inside = random_matrix(gen, 4, 4, -1.0f, 1.0f);
  CHECK(ste_gradient(grad, inside, kUnit) == grad);

  Matrix outside = inside;
  outside(1, 2) = 1.1f;
  outside(3, 0) = -1.5f;
  const Matrix gated = ste_gradient(grad, outside, kUnit);
  CHECK(gated(1, 2) == 0.0f);
  CHECK(gated(3, 0) == 0.0f);
  CHECK(gated(0, 0) == grad(0, 0));

  CHECK(ste_gradient(Matrix(4, 4), outside, kUnit) == Matrix(4, 4));
  CHECK_THROWS_AS(ste_gradient(Matrix(3, 4), inside, kUnit), ShapeError);
}

TEST_CASE("cover loss scale expresses weight space in pixel units") {
  // A one-level error costs 3 * (2/255)^2 summed over channels either way.
  const QuantizationParams q{-0.2, 0.3};
  const double level = (q.w_max - q.w_min) / 255.0;
  CHECK(cover_loss_scale(q) * level * level == doctest::Approx(3.0 * (2.0 / 255.0) * (2.0 / 255.0)));
}

TEST_CASE("TrainConfig validation") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.beta = -1.0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
}

TEST_CASE("zero-step hide exports the initial network") {
  SmallTask task;
  const ContainerImage init_cover = weights_to_image(init_network(task.spec));
  const HideResult r = hide(task.secret, init_cover, task.spec, small_config(0));
  CHECK(r.container == init_cover);
  CHECK(r.report.records.empty());
  CHECK(r.report.final_metrics.cover_apd == 0.0);
}

TEST_CASE("hide rejects mismatched inputs") {
  SmallTask task;
  CHECK_THROWS_AS(hide(task.secret, ContainerImage(8), task.spec, small_config(1)), SpecError);
  const SecretSignal video = make_moving_shapes_video(2, 4, 4);
  CHECK_THROWS_AS(hide(video, task.cover, task.spec, small_config(1)), SpecError);
  const SecretSignal audio = make_tone_audio(32, 8000);
  CHECK_THROWS_AS(hide(audio, task.cover, task.spec, small_config(1)), SpecError);
}

TEST_CASE("hide records, reveal consistency and determinism") {
  SmallTask task;
  TrainConfig cfg = small_config(120);
  cfg.batch_size = 20;  // exercises the shuffled minibatch path
  ::setenv("INR_STEGO_THREADS", "1", 1);
  const HideResult a = hide(task.secret, task.cover, task.spec, cfg);
  ::setenv("INR_STEGO_THREADS", "3", 1);
  const HideResult b = hide(task.secret, task.cover, task.spec, cfg);
  ::unsetenv("INR_STEGO_THREADS");
  CHECK(a.container == b.container);

  REQUIRE(a.report.records.size() == 4);  // steps 0, 50, 100 and the last
  CHECK(a.report.records.front().step == 0);
  CHECK(a.report.records.back().step == 119);
  for (std::size_t i = 1; i < a.report.records.size(); ++i) {
    CHECK(a.report.records[i].step > a.report.records[i - 1].step);
  }

  const CoordinateBatch grid = make_grid(task.secret.dims);
  const SignalBatch revealed = reveal(a.container, task.spec, grid);
  SirenNetwork quantized = a.network;
  const QuantizationParams q = QuantizationParams::from_spec(task.spec);
  for (const std::size_t l : task.spec.variable_layers) {
    quantized.weights[l] = quantize_dequantize(quantized.weights[l], q);
  }
  CHECK(revealed.values == forward(quantized, grid).values);
  CHECK(std::isfinite(a.report.final_metrics.secret_psnr));
  CHECK(std::isfinite(a.report.final_metrics.cover_psnr));

  cfg.seed = 99;
  CHECK(hide(task.secret, task.cover, task.spec, cfg).container != a.container);
}

TEST_CASE("beta trades secret fidelity for cover fidelity") {
  SmallTask task;
  std::vector<HideResult> runs;
  for (const double beta : {0.0, 0.1, 1.0, 10.0}) {
    TrainConfig cfg = small_config(400);
    cfg.beta = beta;
    runs.push_back(hide(task.secret, task.cover, task.spec, cfg));
  }
  // beta = 0 ignores the cover entirely and fits the secret best.
  CHECK(secret_mse(runs[0]) < secret_mse(runs[1]));
  for (std::size_t i = 2; i < runs.size(); ++i) {
    CHECK(runs[i].report.final_metrics.cover_apd <= runs[i - 1].report.final_metrics.cover_apd);
    CHECK(secret_mse(runs[i]) >= secret_mse(runs[i - 1]));
  }
}

TEST_CASE("divergence raises TrainingError with the last good step") {
  SmallTask task;
  TrainConfig cfg = small_config(5);
  cfg.qat = false;
  cfg.alpha = 1e39;  // first update overflows float weights
  try {
    hide(task.secret, task.cover, task.spec, cfg);
    FAIL("expected TrainingError");
  } catch (const TrainingError& e) {
    CHECK(e.last_good_step() == 0);
  }
}
