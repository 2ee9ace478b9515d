#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "dualpqc/discriminator.hpp"
#include "dualpqc/generator.hpp"
#include "dualpqc/training.hpp"

namespace dualpqc::io {

// Parameter checkpoints: versioned text, a shape header followed by one
// value per line in flat-buffer order (full double precision).

void save_generator_params(const std::filesystem::path& path,
                           const generator::GeneratorParams& params);
generator::GeneratorParams load_generator_params(const std::filesystem::path& path);

void save_disc_params(const std::filesystem::path& path, const disc::MlpParams& params);
disc::MlpParams load_disc_params(const std::filesystem::path& path);

// Flat key-value training config ("key = value", '#' comments). Unknown keys
// are rejected by name; omitted keys keep their defaults.
train::TrainConfig parse_train_config(const std::filesystem::path& path);
void write_train_config(const std::filesystem::path& path,
                        const train::TrainConfig& config);

// Per-epoch metrics table; one row per epoch, full double precision.
void write_metrics_csv(const std::filesystem::path& path,
                       std::span<const train::MetricsRecord> metrics, int num_images);

// Final generator state (p_g and images) as JSON.
void write_generator_output(const std::filesystem::path& path,
                            const generator::GeneratorOutput& output, int image_qubits);

struct LoadedGeneratorOutput {
  generator::GeneratorOutput output;
  int image_qubits = 0;
};
LoadedGeneratorOutput load_generator_output(const std::filesystem::path& path);

struct RunManifest {
  std::string code_version;
  std::string started_utc;
  std::string finished_utc;
  std::string config_path;
  std::string data_path;
  std::uint64_t data_hash = 0;  // FNV-1a of the dataset file bytes
  train::TrainConfig config;
  std::map<std::string, std::string> artifacts;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest load_manifest(const std::filesystem::path& path);

std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::string utc_timestamp();

}  // namespace dualpqc::io
