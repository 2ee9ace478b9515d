#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "dualpqc/data_eval.hpp"
#include "dualpqc/stinespring.hpp"
#include "dualpqc/training.hpp"

namespace dualpqc::run {

/// Generates the synthetic dataset and writes it in the documented format.
void gen_data(std::size_t samples, std::uint64_t seed,
              const std::filesystem::path& out_path);

/// Runs training from a config file and dataset, writing the run directory:
/// config.cfg (snapshot), metrics.csv, generator_output.json, manifest.json,
/// checkpoints/{gen,disc}_epochNNNN.txt. Returns the in-memory result.
train::TrainResult train_run(const std::filesystem::path& config_path,
                             const std::filesystem::path& data_path,
                             const std::filesystem::path& out_dir, int threads = 1,
                             std::ostream* progress = nullptr);

struct EvalSummary {
  int image_qubits = 0;
  double kl_mean_image = 0.0;
  std::vector<double> image_probs;
  double min_prob = 0.0;
  data::BijectionResult bijection;
};

/// Evaluates a finished run against a dataset: K-means with k = 2^n seeded
/// from the run manifest, mean-image relative entropy, and the per-image
/// bijection. Writes eval_table.csv and eval_report.txt into the run
/// directory.
EvalSummary eval_run(const std::filesystem::path& run_dir,
                     const std::filesystem::path& data_path);

struct DilationReport {
  double unitarity_residual = 0.0;
  double max_recovery_error = 0.0;
  bool pass = false;
};

constexpr double kUnitarityThreshold = 1e-10;
constexpr double kRecoveryThreshold = 1e-12;

/// Image file variant: square matrix of 2^n rows x 2^n columns in the
/// dataset text format (rows normalized on load).
DilationReport verify_dilation_file(const std::filesystem::path& images_path);

/// Random variant: random intensities and random phases for the given n.
DilationReport verify_dilation_random(int image_qubits, std::uint64_t seed);

}  // namespace dualpqc::run
