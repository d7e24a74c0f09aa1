#include "inr_stego/commands.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "inr_stego/error.hpp"

namespace inr_stego {

namespace {

// Maps the library's exception hierarchy onto exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const TrainingError& e) {
    err << "error: " << e.what();
    if (e.last_good_step() >= 0) err << " (last good step " << e.last_good_step() << ")";
    err << "\n";
    return kExitTraining;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << "\n";
    return kExitTraining;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

std::string join_dims(const std::vector<std::size_t>& dims) {
  std::string text;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) text += "x";
    text += std::to_string(dims[i]);
  }
  return text;
}

Image read_cover(const std::filesystem::path& path, std::size_t side) {
  const Image cover = load_png(path);
  if (cover.width != side || cover.height != side) {
    throw UsageError("cover " + path.string() + " is " + std::to_string(cover.width) + "x" +
                     std::to_string(cover.height) + " but the key needs N=" + std::to_string(side) +
                     " (" + std::to_string(side) + "x" + std::to_string(side) + ")");
  }
  return cover;
}

std::vector<std::uint8_t> pixels_of(const SecretSignal& signal) {
  std::vector<std::uint8_t> out;
  out.reserve(signal.samples.size());
  for (const float v : signal.samples) out.push_back(value_to_pixel(v));
  return out;
}

// Audio compared on the emitted 16-bit lattice, like the pixel path.
std::vector<float> pcm_lattice(const SecretSignal& signal) {
  std::vector<float> out;
  out.reserve(signal.samples.size());
  for (const float v : signal.samples) out.push_back(pcm_to_value(value_to_pcm(v)));
  return out;
}

void print_row(std::ostream& out, const char* label, const MetricsReport& r) {
  char line[128];
  std::snprintf(line, sizeof(line), "%-8s %12s %12s %10s\n", label, format_metric(r.apd_or_ae).c_str(),
                format_metric(r.psnr_or_snr).c_str(),
                r.ssim ? format_metric(*r.ssim).c_str() : "-");
  out << line;
}

void print_record(std::ostream& out, const char* row, const MetricsReport& r) {
  out << "row=" << row << " apd_or_ae=" << format_metric(r.apd_or_ae)
      << " psnr_or_snr=" << format_metric(r.psnr_or_snr)
      << " ssim=" << (r.ssim ? format_metric(*r.ssim) : "-") << "\n";
}

std::string scientific(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.9e", v);
  return buffer;
}

}  // namespace

KeyFile make_key(Modality modality, std::vector<std::size_t> dims, std::size_t cover_side,
                 std::uint64_t seed) {
  const std::size_t k = coordinate_dim(modality);
  if (dims.size() != k) {
    throw UsageError(std::string(to_string(modality)) + " needs " + std::to_string(k) +
                     " dims, got " + std::to_string(dims.size()));
  }
  for (const std::size_t d : dims) {
    if (d == 0) throw UsageError("dims must be positive");
  }
  if (cover_side < 2) throw UsageError("cover side must be at least 2");
  const NetworkSpec spec = make_network_spec(k, sample_channels(modality), cover_side, seed);
  KeyFile key = KeyFile::from_spec(spec, modality, std::move(dims));
  key.validate();
  return key;
}

int cmd_keygen(const KeygenOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const KeyFile key = make_key(options.modality, options.dims, options.cover_side, options.seed);
    write_key_file(key, options.out);
    out << "fingerprint " << key_fingerprint(key) << "\n";
    return kExitOk;
  });
}

int cmd_hide(const HideOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const KeyFile key = read_key_file(options.key);
    const NetworkSpec spec = key.network_spec();
    const Image cover_image = read_cover(options.cover, spec.hidden_width);
    const SecretSignal secret = load_secret(key.modality, options.secret);
    if (secret.dims != key.secret_dims) {
      throw UsageError("secret is " + join_dims(secret.dims) + " but the key expects " +
                       join_dims(key.secret_dims));
    }

    TrainConfig cfg = options.train;
    cfg.steps = options.steps.value_or(key.modality == Modality::audio ? 20000 : 5000);
    const HideResult result = hide(secret, ContainerImage::from_image(cover_image), spec, cfg);

    save_png(result.container.to_image(), options.out);
    const std::filesystem::path report_path =
        options.report.value_or(std::filesystem::path(options.out.string() + ".report.txt"));
    std::ofstream report(report_path, std::ios::trunc);
    if (!report) throw IoError("cannot write report " + report_path.string());
    report << format_train_report(result.report, cfg, key_fingerprint(key));
    if (!report) throw IoError("short write to " + report_path.string());

    const FinalMetrics& m = result.report.final_metrics;
    out << "container " << options.out.string() << "\n"
        << "cover_apd=" << format_metric(m.cover_apd) << " cover_psnr=" << format_metric(m.cover_psnr)
        << " secret_psnr=" << format_metric(m.secret_psnr) << "\n";
    return kExitOk;
  });
}

int cmd_reveal(const RevealOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const KeyFile key = read_key_file(options.key);
    const NetworkSpec spec = key.network_spec();
    Image image;
    try {
      image = load_png(options.container);
    } catch (const Error& e) {
      throw IoError(std::string("unreadable container: ") + e.what());
    }
    if (image.width != spec.hidden_width || image.height != spec.hidden_width) {
      throw UsageError("container is " + std::to_string(image.width) + "x" +
                       std::to_string(image.height) + " but the key needs N=" +
                       std::to_string(spec.hidden_width));
    }
    const CoordinateBatch grid = make_grid(key.secret_dims);
    const SignalBatch values = reveal(ContainerImage::from_image(image), spec, grid);
    SourceMeta meta;
    // The sample rate is not part of the key; 16 kHz is only a container
    // default and does not affect the samples.
    if (key.modality == Modality::audio) meta = SourceMeta{16, 16000};
    emit_signal(signal_from_batch(values, key.modality, key.secret_dims, meta), options.out);
    out << "revealed " << options.out.string() << "\n";
    return kExitOk;
  });
}

MetricsReport evaluate_cover(const Image& cover, const Image& container) {
  if (cover.width != container.width || cover.height != container.height) {
    throw ShapeError("cover and container sizes differ");
  }
  MetricsReport r;
  r.target_kind = PairKind::cover_pair;
  r.apd_or_ae = apd(cover.pixels, container.pixels);
  r.psnr_or_snr = psnr(cover.pixels, container.pixels);
  if (cover.width >= 11 && cover.height >= 11) r.ssim = ssim(cover, container);
  return r;
}

MetricsReport evaluate_secret(const SecretSignal& secret, const SecretSignal& revealed) {
  if (secret.kind != revealed.kind || secret.dims != revealed.dims ||
      secret.channels != revealed.channels || secret.samples.size() != revealed.samples.size()) {
    throw ShapeError("secret and revealed signals have different layouts");
  }
  MetricsReport r;
  r.target_kind = PairKind::secret_pair;
  if (secret.kind == Modality::audio) {
    const std::vector<float> a = pcm_lattice(secret);
    const std::vector<float> b = pcm_lattice(revealed);
    r.apd_or_ae = ae(a, b);
    r.psnr_or_snr = snr(a, b);
    return r;
  }
  const std::vector<std::uint8_t> a = pixels_of(secret);
  const std::vector<std::uint8_t> b = pixels_of(revealed);
  r.apd_or_ae = apd(a, b);
  r.psnr_or_snr = psnr(a, b);
  const std::vector<Image> fa = to_frames(secret);
  const std::vector<Image> fb = to_frames(revealed);
  if (fa.front().width >= 11 && fa.front().height >= 11) {
    double sum = 0.0;
    for (std::size_t t = 0; t < fa.size(); ++t) sum += ssim(fa[t], fb[t]);
    r.ssim = sum / static_cast<double>(fa.size());
  }
  return r;
}

int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.cover.has_value() != options.container.has_value()) {
      throw UsageError("--cover and --container must be given together");
    }
    if (options.secret.has_value() != options.revealed.has_value()) {
      throw UsageError("--secret and --revealed must be given together");
    }
    if (!options.cover && !options.secret) throw UsageError("nothing to evaluate");

    std::optional<MetricsReport> cover_row;
    std::optional<MetricsReport> secret_row;
    try {
      if (options.cover) {
        cover_row = evaluate_cover(load_png(*options.cover), load_png(*options.container));
      }
      if (options.secret) {
        secret_row = evaluate_secret(load_secret(options.modality, *options.secret),
                                     load_secret(options.modality, *options.revealed));
      }
    } catch (const ShapeError& e) {
      throw UsageError(e.what());
    }

    char header[128];
    std::snprintf(header, sizeof(header), "%-8s %12s %12s %10s\n", "", "APD/AE", "PSNR/SNR", "SSIM");
    out << header;
    if (cover_row) print_row(out, "Cover", *cover_row);
    if (secret_row) print_row(out, "Secret", *secret_row);
    if (cover_row) print_record(out, "cover", *cover_row);
    if (secret_row) print_record(out, "secret", *secret_row);
    return kExitOk;
  });
}

std::string format_train_report(const TrainReport& report, const TrainConfig& cfg,
                                const std::string& fingerprint) {
  std::ostringstream text;
  text << "key_fingerprint=" << fingerprint << " steps=" << cfg.steps
       << " batch_size=" << cfg.batch_size << " lr=" << scientific(cfg.alpha)
       << " beta=" << scientific(cfg.beta) << " seed=" << cfg.seed
       << " qat=" << (cfg.qat ? 1 : 0) << "\n";
  for (const TrainRecord& r : report.records) {
    text << "step=" << r.step << " secret_loss=" << scientific(r.secret_loss)
         << " cover_loss=" << scientific(r.cover_loss) << " total_loss=" << scientific(r.total_loss)
         << "\n";
  }
  const FinalMetrics& m = report.final_metrics;
  text << "final cover_apd=" << format_metric(m.cover_apd)
       << " cover_psnr=" << format_metric(m.cover_psnr)
       << " secret_mse=" << scientific(m.secret_mse)
       << " secret_psnr=" << format_metric(m.secret_psnr) << "\n";
  return text.str();
}

}  // namespace inr_stego
