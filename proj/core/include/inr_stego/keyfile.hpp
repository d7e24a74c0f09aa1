#pragma once

// The shared secret between sender and recipient. The pre-defined weights
// travel as (seed, prng_algorithm_id) and are regenerated on both sides.
//
// Serialized as JSON with a fixed field order, so identical keys are
// byte-identical and the fingerprint changes iff a field changes.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "inr_stego/inr.hpp"
#include "inr_stego/signals.hpp"

namespace inr_stego {

struct KeyFile {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  std::string prng_algorithm_id{Rng::algorithm_id};
  std::uint64_t seed = 0;
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  std::size_t hidden_width = 0;
  std::size_t num_layers = 0;
  std::array<std::size_t, 3> variable_layers{};
  double omega0 = 0.0;
  double w_min = 0.0;
  double w_max = 0.0;
  Modality modality = Modality::video;
  std::vector<std::size_t> secret_dims;

  static KeyFile from_spec(const NetworkSpec& spec, Modality modality,
                           std::vector<std::size_t> secret_dims);
  NetworkSpec network_spec() const;

  /// Throws SpecError: embedded spec invalid, modality/dims inconsistent.
  void validate() const;

  friend bool operator==(const KeyFile&, const KeyFile&) = default;
};

/// Canonical text form (trailing newline included).
std::string serialize_key(const KeyFile& key);

/// Strict parse: unknown or missing fields, wrong types and unsupported
/// format versions raise SpecError.
KeyFile parse_key(std::string_view text);

/// 16 hex digits of FNV-1a 64 over serialize_key(key).
std::string key_fingerprint(const KeyFile& key);

void write_key_file(const KeyFile& key, const std::filesystem::path& path);
/// NotFoundError when unreadable, SpecError when malformed.
KeyFile read_key_file(const std::filesystem::path& path);

}  // namespace inr_stego
