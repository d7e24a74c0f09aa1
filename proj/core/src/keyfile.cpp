#include "inr_stego/keyfile.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#include "inr_stego/error.hpp"

namespace inr_stego {

namespace {

using Json = nlohmann::ordered_json;

const std::set<std::string, std::less<>> kFields = {
    "format_version", "prng_algorithm_id", "seed",   "input_dim", "output_dim",
    "hidden_width",   "num_layers",        "variable_layers",     "omega0",
    "w_min",          "w_max",             "modality", "secret_dims"};

const Json& field(const Json& doc, const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end()) throw SpecError(std::string("key file is missing field '") + name + "'");
  return *it;
}

std::uint64_t unsigned_field(const Json& doc, const char* name) {
  const Json& v = field(doc, name);
  if (!v.is_number_unsigned()) {
    throw SpecError(std::string("key field '") + name + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double real_field(const Json& doc, const char* name) {
  const Json& v = field(doc, name);
  if (!v.is_number()) throw SpecError(std::string("key field '") + name + "' must be a number");
  return v.get<double>();
}

std::vector<std::size_t> unsigned_list(const Json& doc, const char* name) {
  const Json& v = field(doc, name);
  if (!v.is_array()) throw SpecError(std::string("key field '") + name + "' must be an array");
  std::vector<std::size_t> out;
  for (const Json& item : v) {
    if (!item.is_number_unsigned()) {
      throw SpecError(std::string("key field '") + name + "' must hold non-negative integers");
    }
    out.push_back(item.get<std::size_t>());
  }
  return out;
}

}  // namespace

KeyFile KeyFile::from_spec(const NetworkSpec& spec, Modality modality,
                           std::vector<std::size_t> secret_dims) {
  KeyFile key;
  key.prng_algorithm_id = spec.prng_algorithm_id;
  key.seed = spec.seed;
  key.input_dim = spec.input_dim;
  key.output_dim = spec.output_dim;
  key.hidden_width = spec.hidden_width;
  key.num_layers = spec.num_layers;
  key.variable_layers = spec.variable_layers;
  key.omega0 = spec.omega0;
  key.w_min = spec.w_min;
  key.w_max = spec.w_max;
  key.modality = modality;
  key.secret_dims = std::move(secret_dims);
  return key;
}

NetworkSpec KeyFile::network_spec() const {
  NetworkSpec spec;
  spec.input_dim = input_dim;
  spec.output_dim = output_dim;
  spec.hidden_width = hidden_width;
  spec.num_layers = num_layers;
  spec.variable_layers = variable_layers;
  spec.omega0 = omega0;
  spec.seed = seed;
  spec.w_min = w_min;
  spec.w_max = w_max;
  spec.prng_algorithm_id = prng_algorithm_id;
  return spec;
}

void KeyFile::validate() const {
  if (format_version != kFormatVersion) {
    throw SpecError("unsupported key format_version " + std::to_string(format_version));
  }
  network_spec().validate();
  if (input_dim != coordinate_dim(modality) || output_dim != sample_channels(modality)) {
    throw SpecError("input/output dims do not match modality " + std::string(to_string(modality)));
  }
  if (secret_dims.size() != input_dim) {
    throw SpecError("secret_dims must list " + std::to_string(input_dim) + " axes");
  }
  for (const std::size_t d : secret_dims) {
    if (d == 0) throw SpecError("secret_dims entries must be positive");
  }
}

std::string serialize_key(const KeyFile& key) {
  Json doc;
  doc["format_version"] = key.format_version;
  doc["prng_algorithm_id"] = key.prng_algorithm_id;
  doc["seed"] = key.seed;
  doc["input_dim"] = key.input_dim;
  doc["output_dim"] = key.output_dim;
  doc["hidden_width"] = key.hidden_width;
  doc["num_layers"] = key.num_layers;
  doc["variable_layers"] = key.variable_layers;
  doc["omega0"] = key.omega0;
  doc["w_min"] = key.w_min;
  doc["w_max"] = key.w_max;
  doc["modality"] = std::string(to_string(key.modality));
  doc["secret_dims"] = key.secret_dims;
  return doc.dump(2) + "\n";
}

KeyFile parse_key(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("key file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SpecError("key file must be a JSON object");
  for (const auto& item : doc.items()) {
    if (!kFields.contains(item.key())) throw SpecError("unknown key field '" + item.key() + "'");
  }

  KeyFile key;
  const Json& version = field(doc, "format_version");
  if (!version.is_number_integer()) throw SpecError("format_version must be an integer");
  key.format_version = version.get<int>();
  if (key.format_version != KeyFile::kFormatVersion) {
    throw SpecError("unsupported key format_version " + std::to_string(key.format_version));
  }
  const Json& prng = field(doc, "prng_algorithm_id");
  if (!prng.is_string()) throw SpecError("prng_algorithm_id must be a string");
  key.prng_algorithm_id = prng.get<std::string>();
  key.seed = unsigned_field(doc, "seed");
  key.input_dim = unsigned_field(doc, "input_dim");
  key.output_dim = unsigned_field(doc, "output_dim");
  key.hidden_width = unsigned_field(doc, "hidden_width");
  key.num_layers = unsigned_field(doc, "num_layers");
  const auto layers = unsigned_list(doc, "variable_layers");
  if (layers.size() != 3) throw SpecError("variable_layers must list exactly 3 layers");
  std::copy(layers.begin(), layers.end(), key.variable_layers.begin());
  key.omega0 = real_field(doc, "omega0");
  key.w_min = real_field(doc, "w_min");
  key.w_max = real_field(doc, "w_max");
  const Json& modality = field(doc, "modality");
  if (!modality.is_string()) throw SpecError("modality must be a string");
  try {
    key.modality = parse_modality(modality.get<std::string>());
  } catch (const UsageError& e) {
    throw SpecError(e.what());
  }
  key.secret_dims = unsigned_list(doc, "secret_dims");
  key.validate();
  return key;
}

std::string key_fingerprint(const KeyFile& key) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : serialize_key(key)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

void write_key_file(const KeyFile& key, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write key file " + path.string());
  file << serialize_key(key);
  if (!file) throw IoError("short write to " + path.string());
}

KeyFile read_key_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw NotFoundError("cannot open key file " + path.string());
  const std::string text((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  return parse_key(text);
}

}  // namespace inr_stego
