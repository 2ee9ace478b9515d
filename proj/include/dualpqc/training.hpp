#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "dualpqc/data_eval.hpp"
#include "dualpqc/discriminator.hpp"
#include "dualpqc/generator.hpp"

namespace dualpqc::train {

/// Scores are clamped to [1e-7, 1-1e-7] before any logarithm.
constexpr double kScoreFloor = 1e-7;

double clamp_score(double s);

/// L_G = -sum_i p_i log D_i.
double loss_generator(std::span<const double> image_probs,
                      std::span<const double> disc_scores);

/// L_D = mean_b log D(x_b) + sum_i p_i log(1 - D_i). The trainer ascends this
/// (minus the gradient penalty).
double loss_discriminator(std::span<const double> real_scores,
                          std::span<const double> image_probs,
                          std::span<const double> fake_scores);

struct TrainSeeds {
  std::uint64_t params = 1;   // generator + discriminator initialization
  std::uint64_t data = 2;     // evaluation clustering
  std::uint64_t shuffle = 3;  // epoch batch order
};

struct TrainConfig {
  generator::DualPqcConfig pqc;
  int epochs = 200;
  int batch_size = 500;
  double lr_phi1 = 1e-4;
  double lr_disc = 1e-4;
  double lr_phi2 = 1e-3;
  double init_delta = 0.1;
  disc::PenaltyConfig penalty;
  TrainSeeds seeds;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int checkpoint_interval = 50;  // epochs; 0 disables intermediate checkpoints
  std::vector<int> disc_layers = disc::MlpParams::default_layer_sizes();

  void validate() const;
};

/// Every angle i.i.d. uniform in [-delta, delta]; phi1 drawn before phi2.
generator::GeneratorParams init_params(const generator::DualPqcConfig& config,
                                       double delta, std::uint64_t seed);

struct MetricsRecord {
  int epoch = 0;
  double loss_gen = 0.0;   // epoch average of per-batch values
  double loss_disc = 0.0;  // epoch average of per-batch values
  double penalty = 0.0;    // epoch average of per-batch values
  double kl_mean = 0.0;    // KL(real mean image || generated mean image)
  std::vector<double> image_probs;  // end-of-epoch p_g snapshot
  // KL(cluster mean j || image i), row-major over (i, j)
  std::vector<double> kl_image_vs_cluster;
};

struct TrainResult {
  generator::GeneratorParams gen_params;
  disc::MlpParams disc_params;
  std::vector<MetricsRecord> metrics;
  generator::GeneratorOutput final_output;
  data::ClusterResult eval_clusters;
  std::int64_t disc_updates = 0;
  std::int64_t phi1_updates = 0;
  std::int64_t phi2_updates = 0;
};

struct TrainOptions {
  int threads = 1;
  // Receives epoch number, current parameters, and the metrics record; used
  // by the CLI for checkpointing. Called after every epoch.
  std::function<void(int, const generator::GeneratorParams&, const disc::MlpParams&,
                     const MetricsRecord&)>
      on_epoch;
  // Where the diagnostic dump goes if a loss turns non-finite.
  std::filesystem::path dump_dir = ".";
};

/// Alternating adversarial optimization. Per shuffled mini-batch:
/// discriminator ascent step, then PQC1 step, then PQC2 step, all with
/// AMSGRAD. Fully reproducible from the seeds in the config.
TrainResult train(const TrainConfig& config, const data::DatasetMatrix& dataset,
                  const TrainOptions& options = {});

}  // namespace dualpqc::train
