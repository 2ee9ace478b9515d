#include "dualpqc/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <vector>

#include "dualpqc/errors.hpp"

namespace dualpqc::io {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  return in;
}

void write_values(std::ofstream& out, std::span<const double> values) {
  for (double v : values) out << fmt(v) << '\n';
}

void read_values(std::ifstream& in, std::span<double> values, const std::string& what) {
  for (double& v : values) {
    if (!(in >> v)) throw ValidationError("checkpoint truncated: " + what);
  }
}

}  // namespace

void save_generator_params(const std::filesystem::path& path,
                           const generator::GeneratorParams& params) {
  auto out = open_out(path);
  out << "dualpqc-gen-checkpoint 1\n";
  out << "phi1 " << params.phi1.size() << "\n";
  out << "phi2 " << params.phi2.size() << "\n";
  write_values(out, params.phi1);
  write_values(out, params.phi2);
  if (!out) throw IoError("write failed: " + path.string());
}

generator::GeneratorParams load_generator_params(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "dualpqc-gen-checkpoint" || version != 1) {
    throw ValidationError("not a generator checkpoint: " + path.string());
  }
  std::string key;
  std::size_t len1 = 0, len2 = 0;
  in >> key >> len1;
  if (key != "phi1") throw ValidationError("bad generator checkpoint header");
  in >> key >> len2;
  if (key != "phi2") throw ValidationError("bad generator checkpoint header");
  generator::GeneratorParams params;
  params.phi1.resize(len1);
  params.phi2.resize(len2);
  read_values(in, params.phi1, "phi1");
  read_values(in, params.phi2, "phi2");
  return params;
}

void save_disc_params(const std::filesystem::path& path, const disc::MlpParams& params) {
  auto out = open_out(path);
  out << "dualpqc-disc-checkpoint 1\n";
  out << "layers";
  for (int s : params.layer_sizes()) out << ' ' << s;
  out << '\n';
  write_values(out, params.values());
  if (!out) throw IoError("write failed: " + path.string());
}

disc::MlpParams load_disc_params(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "dualpqc-disc-checkpoint" || version != 1) {
    throw ValidationError("not a discriminator checkpoint: " + path.string());
  }
  std::string key;
  in >> key;
  if (key != "layers") throw ValidationError("bad discriminator checkpoint header");
  std::string rest;
  std::getline(in, rest);
  std::stringstream ss(rest);
  std::vector<int> sizes;
  int s = 0;
  while (ss >> s) sizes.push_back(s);
  disc::MlpParams params(sizes);
  read_values(in, params.values(), "values");
  return params;
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& text);

template <>
long long parse_number<long long>(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': not an integer: " + text);
  }
  if (pos != text.size()) {
    throw ValidationError("config key '" + key + "': not an integer: " + text);
  }
  return v;
}

template <>
std::uint64_t parse_number<std::uint64_t>(const std::string& key,
                                          const std::string& text) {
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': not a seed: " + text);
  }
  if (pos != text.size()) {
    throw ValidationError("config key '" + key + "': not a seed: " + text);
  }
  return v;
}

template <>
double parse_number<double>(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': not a number: " + text);
  }
  if (pos != text.size()) {
    throw ValidationError("config key '" + key + "': not a number: " + text);
  }
  return v;
}

}  // namespace

train::TrainConfig parse_train_config(const std::filesystem::path& path) {
  auto in = open_in(path);
  train::TrainConfig config;
  int n = config.pqc.image_qubits, n1 = config.pqc.pqc1_qubits,
      n2 = config.pqc.pqc2_qubits, d1 = config.pqc.pqc1_depth,
      d2 = config.pqc.pqc2_depth;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    std::string key, eq, value;
    std::stringstream ss(line);
    if (!(ss >> key)) continue;  // blank line
    if (!(ss >> eq)) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": missing value for '" + key + "'");
    }
    if (eq == "=") {
      ss >> value;
    } else {
      value = eq;
    }
    std::string extra;
    if (value.empty() || (ss >> extra)) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": malformed entry for '" + key + "'");
    }

    auto as_int = [&] { return static_cast<int>(parse_number<long long>(key, value)); };
    auto as_double = [&] { return parse_number<double>(key, value); };
    auto as_seed = [&] { return parse_number<std::uint64_t>(key, value); };

    if (key == "n") n = as_int();
    else if (key == "n1") n1 = as_int();
    else if (key == "n2") n2 = as_int();
    else if (key == "d_g1") d1 = as_int();
    else if (key == "d_g2") d2 = as_int();
    else if (key == "epochs") config.epochs = as_int();
    else if (key == "batch_size") config.batch_size = as_int();
    else if (key == "checkpoint_interval") config.checkpoint_interval = as_int();
    else if (key == "lr_phi1") config.lr_phi1 = as_double();
    else if (key == "lr_disc") config.lr_disc = as_double();
    else if (key == "lr_phi2") config.lr_phi2 = as_double();
    else if (key == "init_delta") config.init_delta = as_double();
    else if (key == "penalty_lambda") config.penalty.lambda = as_double();
    else if (key == "penalty_k") config.penalty.k = as_double();
    else if (key == "penalty_c") config.penalty.c = as_double();
    else if (key == "beta1") config.beta1 = as_double();
    else if (key == "beta2") config.beta2 = as_double();
    else if (key == "epsilon") config.epsilon = as_double();
    else if (key == "seed_params") config.seeds.params = as_seed();
    else if (key == "seed_data") config.seeds.data = as_seed();
    else if (key == "seed_shuffle") config.seeds.shuffle = as_seed();
    else {
      throw ValidationError("unknown config key '" + key + "' (line " +
                            std::to_string(line_no) + ")");
    }
  }

  config.pqc = generator::DualPqcConfig::with_defaults(n, n1, n2, d1, d2);
  config.disc_layers = disc::MlpParams::default_layer_sizes();
  config.disc_layers.front() = static_cast<int>(config.pqc.num_pixels());
  config.validate();
  return config;
}

void write_train_config(const std::filesystem::path& path,
                        const train::TrainConfig& config) {
  auto out = open_out(path);
  out << "n = " << config.pqc.image_qubits << '\n';
  out << "n1 = " << config.pqc.pqc1_qubits << '\n';
  out << "n2 = " << config.pqc.pqc2_qubits << '\n';
  out << "d_g1 = " << config.pqc.pqc1_depth << '\n';
  out << "d_g2 = " << config.pqc.pqc2_depth << '\n';
  out << "epochs = " << config.epochs << '\n';
  out << "batch_size = " << config.batch_size << '\n';
  out << "checkpoint_interval = " << config.checkpoint_interval << '\n';
  out << "lr_phi1 = " << fmt(config.lr_phi1) << '\n';
  out << "lr_disc = " << fmt(config.lr_disc) << '\n';
  out << "lr_phi2 = " << fmt(config.lr_phi2) << '\n';
  out << "init_delta = " << fmt(config.init_delta) << '\n';
  out << "penalty_lambda = " << fmt(config.penalty.lambda) << '\n';
  out << "penalty_k = " << fmt(config.penalty.k) << '\n';
  out << "penalty_c = " << fmt(config.penalty.c) << '\n';
  out << "beta1 = " << fmt(config.beta1) << '\n';
  out << "beta2 = " << fmt(config.beta2) << '\n';
  out << "epsilon = " << fmt(config.epsilon) << '\n';
  out << "seed_params = " << config.seeds.params << '\n';
  out << "seed_data = " << config.seeds.data << '\n';
  out << "seed_shuffle = " << config.seeds.shuffle << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void write_metrics_csv(const std::filesystem::path& path,
                       std::span<const train::MetricsRecord> metrics, int num_images) {
  auto out = open_out(path);
  out << "epoch,loss_gen,loss_disc,penalty,kl_mean";
  for (int i = 0; i < num_images; ++i) out << ",prob_" << i;
  for (int i = 0; i < num_images; ++i) {
    for (int j = 0; j < num_images; ++j) out << ",kl_img" << i << "_set" << j;
  }
  out << '\n';
  for (const auto& rec : metrics) {
    out << rec.epoch << ',' << fmt(rec.loss_gen) << ',' << fmt(rec.loss_disc) << ','
        << fmt(rec.penalty) << ',' << fmt(rec.kl_mean);
    for (double p : rec.image_probs) out << ',' << fmt(p);
    for (double v : rec.kl_image_vs_cluster) out << ',' << fmt(v);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_generator_output(const std::filesystem::path& path,
                            const generator::GeneratorOutput& output, int image_qubits) {
  json doc;
  doc["format"] = "dualpqc-generator-output";
  doc["version"] = 1;
  doc["image_qubits"] = image_qubits;
  doc["image_probs"] = output.image_probs;
  doc["images"] = output.images;
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

LoadedGeneratorOutput load_generator_output(const std::filesystem::path& path) {
  auto in = open_in(path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("malformed generator output " + path.string() + ": " +
                          e.what());
  }
  if (doc.value("format", "") != "dualpqc-generator-output") {
    throw ValidationError("not a generator output file: " + path.string());
  }
  LoadedGeneratorOutput loaded;
  loaded.image_qubits = doc.at("image_qubits").get<int>();
  loaded.output.image_probs = doc.at("image_probs").get<std::vector<double>>();
  loaded.output.images = doc.at("images").get<std::vector<std::vector<double>>>();
  return loaded;
}

namespace {

json config_to_json(const train::TrainConfig& config) {
  return json{{"n", config.pqc.image_qubits},
              {"n1", config.pqc.pqc1_qubits},
              {"n2", config.pqc.pqc2_qubits},
              {"d_g1", config.pqc.pqc1_depth},
              {"d_g2", config.pqc.pqc2_depth},
              {"epochs", config.epochs},
              {"batch_size", config.batch_size},
              {"checkpoint_interval", config.checkpoint_interval},
              {"lr_phi1", config.lr_phi1},
              {"lr_disc", config.lr_disc},
              {"lr_phi2", config.lr_phi2},
              {"init_delta", config.init_delta},
              {"penalty_lambda", config.penalty.lambda},
              {"penalty_k", config.penalty.k},
              {"penalty_c", config.penalty.c},
              {"beta1", config.beta1},
              {"beta2", config.beta2},
              {"epsilon", config.epsilon},
              {"seed_params", config.seeds.params},
              {"seed_data", config.seeds.data},
              {"seed_shuffle", config.seeds.shuffle}};
}

train::TrainConfig config_from_json(const json& j) {
  train::TrainConfig config;
  config.pqc = generator::DualPqcConfig::with_defaults(
      j.at("n").get<int>(), j.at("n1").get<int>(), j.at("n2").get<int>(),
      j.at("d_g1").get<int>(), j.at("d_g2").get<int>());
  config.epochs = j.at("epochs").get<int>();
  config.batch_size = j.at("batch_size").get<int>();
  config.checkpoint_interval = j.at("checkpoint_interval").get<int>();
  config.lr_phi1 = j.at("lr_phi1").get<double>();
  config.lr_disc = j.at("lr_disc").get<double>();
  config.lr_phi2 = j.at("lr_phi2").get<double>();
  config.init_delta = j.at("init_delta").get<double>();
  config.penalty.lambda = j.at("penalty_lambda").get<double>();
  config.penalty.k = j.at("penalty_k").get<double>();
  config.penalty.c = j.at("penalty_c").get<double>();
  config.beta1 = j.at("beta1").get<double>();
  config.beta2 = j.at("beta2").get<double>();
  config.epsilon = j.at("epsilon").get<double>();
  config.seeds.params = j.at("seed_params").get<std::uint64_t>();
  config.seeds.data = j.at("seed_data").get<std::uint64_t>();
  config.seeds.shuffle = j.at("seed_shuffle").get<std::uint64_t>();
  config.disc_layers = disc::MlpParams::default_layer_sizes();
  config.disc_layers.front() = static_cast<int>(config.pqc.num_pixels());
  return config;
}

}  // namespace

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  json doc;
  doc["format"] = "dualpqc-run-manifest";
  doc["version"] = 1;
  doc["code_version"] = manifest.code_version;
  doc["started_utc"] = manifest.started_utc;
  doc["finished_utc"] = manifest.finished_utc;
  doc["config_path"] = manifest.config_path;
  doc["data_path"] = manifest.data_path;
  doc["data_fnv1a"] = manifest.data_hash;
  doc["config"] = config_to_json(manifest.config);
  doc["artifacts"] = manifest.artifacts;
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

RunManifest load_manifest(const std::filesystem::path& path) {
  auto in = open_in(path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("malformed manifest " + path.string() + ": " + e.what());
  }
  if (doc.value("format", "") != "dualpqc-run-manifest") {
    throw ValidationError("not a run manifest: " + path.string());
  }
  RunManifest manifest;
  manifest.code_version = doc.value("code_version", "");
  manifest.started_utc = doc.value("started_utc", "");
  manifest.finished_utc = doc.value("finished_utc", "");
  manifest.config_path = doc.value("config_path", "");
  manifest.data_path = doc.value("data_path", "");
  manifest.data_hash = doc.value("data_fnv1a", std::uint64_t{0});
  manifest.config = config_from_json(doc.at("config"));
  if (doc.contains("artifacts")) {
    manifest.artifacts = doc.at("artifacts").get<std::map<std::string, std::string>>();
  }
  return manifest;
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::uint64_t hash = 14695981039346656037ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ull;
    }
  }
  return hash;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace dualpqc::io
