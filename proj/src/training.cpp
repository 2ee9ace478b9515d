#include "dualpqc/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>

#include "dualpqc/errors.hpp"
#include "dualpqc/optimizer.hpp"
#include "dualpqc/rng.hpp"

namespace dualpqc::train {

namespace {

std::vector<double> clamp_all(const Eigen::VectorXd& scores) {
  std::vector<double> out(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) out[i] = clamp_score(scores[i]);
  return out;
}

Eigen::MatrixXd images_as_matrix(const generator::GeneratorOutput& out) {
  const Eigen::Index k = static_cast<Eigen::Index>(out.images.size());
  const Eigen::Index w = static_cast<Eigen::Index>(out.images.front().size());
  Eigen::MatrixXd m(k, w);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < w; ++j) m(i, j) = out.images[i][j];
  }
  return m;
}

void check_probability_vector(std::span<const double> v, double tol, const char* what) {
  double sum = 0.0;
  for (double x : v) {
    if (x < 0.0) throw ValidationError(std::string(what) + ": negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw ValidationError(std::string(what) + ": sums to " + std::to_string(sum));
  }
}

void write_abort_dump(const std::filesystem::path& path, int epoch, int batch,
                      double loss_d, double loss_g, double penalty,
                      const generator::GeneratorParams& gen,
                      const generator::GeneratorOutput& out) {
  std::ofstream dump(path);
  dump << "non-finite loss at epoch " << epoch << " batch " << batch << "\n";
  dump << "loss_disc " << loss_d << "\nloss_gen " << loss_g << "\npenalty " << penalty
       << "\n";
  char buf[32];
  auto write_vec = [&](const char* name, std::span<const double> v) {
    dump << name;
    for (double x : v) {
      std::snprintf(buf, sizeof(buf), " %.17g", x);
      dump << buf;
    }
    dump << "\n";
  };
  write_vec("phi1", gen.phi1);
  write_vec("phi2", gen.phi2);
  write_vec("image_probs", out.image_probs);
  for (std::size_t i = 0; i < out.images.size(); ++i) {
    write_vec(("image_" + std::to_string(i)).c_str(), out.images[i]);
  }
}

}  // namespace

double clamp_score(double s) {
  return std::clamp(s, kScoreFloor, 1.0 - kScoreFloor);
}

double loss_generator(std::span<const double> image_probs,
                      std::span<const double> disc_scores) {
  if (image_probs.size() != disc_scores.size()) {
    throw ValidationError("loss_generator: size mismatch");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < image_probs.size(); ++i) {
    loss -= image_probs[i] * std::log(clamp_score(disc_scores[i]));
  }
  return loss;
}

double loss_discriminator(std::span<const double> real_scores,
                          std::span<const double> image_probs,
                          std::span<const double> fake_scores) {
  if (real_scores.empty()) throw ValidationError("loss_discriminator: empty real batch");
  if (image_probs.size() != fake_scores.size()) {
    throw ValidationError("loss_discriminator: size mismatch");
  }
  double real = 0.0;
  for (double s : real_scores) real += std::log(clamp_score(s));
  real /= static_cast<double>(real_scores.size());
  double fake = 0.0;
  for (std::size_t i = 0; i < fake_scores.size(); ++i) {
    fake += image_probs[i] * std::log(1.0 - clamp_score(fake_scores[i]));
  }
  return real + fake;
}

void TrainConfig::validate() const {
  pqc.validate();
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (lr_phi1 < 0.0 || lr_disc < 0.0 || lr_phi2 < 0.0) {
    throw ValidationError("learning rates must be >= 0");
  }
  if (init_delta < 0.0) throw ValidationError("init_delta must be >= 0");
  penalty.validate();
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ValidationError("betas must lie in [0,1)");
  }
  if (epsilon <= 0.0) throw ValidationError("epsilon must be > 0");
  if (checkpoint_interval < 0) throw ValidationError("checkpoint_interval must be >= 0");
  if (disc_layers.size() < 2) throw ValidationError("discriminator needs >= 2 layers");
  if (disc_layers.front() != static_cast<int>(pqc.num_pixels())) {
    throw ValidationError("discriminator input width must be 2^image_qubits");
  }
  if (disc_layers.back() != 1) throw ValidationError("discriminator output must be 1");
}

generator::GeneratorParams init_params(const generator::DualPqcConfig& config,
                                       double delta, std::uint64_t seed) {
  config.validate();
  if (delta < 0.0) throw ValidationError("init_params: delta must be >= 0");
  Rng rng(seed);
  generator::GeneratorParams params;
  params.phi1.resize(ansatz::param_count(config.pqc1_spec()));
  params.phi2.resize(ansatz::param_count(config.pqc2_spec()));
  for (double& v : params.phi1) v = rng.uniform(-delta, delta);
  for (double& v : params.phi2) v = rng.uniform(-delta, delta);
  return params;
}

TrainResult train(const TrainConfig& config, const data::DatasetMatrix& dataset,
                  const TrainOptions& options) {
  config.validate();
  data::validate_dataset(dataset);
  if (dataset.cols() != static_cast<Eigen::Index>(config.pqc.num_pixels())) {
    throw ValidationError("dataset width " + std::to_string(dataset.cols()) +
                          " does not match 2^image_qubits = " +
                          std::to_string(config.pqc.num_pixels()));
  }

  TrainResult result;
  result.gen_params = init_params(config.pqc, config.init_delta, config.seeds.params);
  result.disc_params = disc::MlpParams::init(config.disc_layers, config.seeds.params + 1);

  // Evaluation clustering is computed once and reused for every epoch's
  // per-image metrics; raw rows (not clusters) feed the training itself.
  const int k = static_cast<int>(config.pqc.num_images());
  result.eval_clusters = data::kmeans(dataset, k, config.seeds.data);
  const Eigen::RowVectorXd real_mean = dataset.colwise().mean();
  const std::vector<double> real_mean_vec(real_mean.begin(), real_mean.end());

  Amsgrad opt_phi1(result.gen_params.phi1.size(), config.beta1, config.beta2,
                   config.epsilon);
  Amsgrad opt_phi2(result.gen_params.phi2.size(), config.beta1, config.beta2,
                   config.epsilon);
  Amsgrad opt_disc(result.disc_params.size(), config.beta1, config.beta2,
                   config.epsilon);

  Rng shuffle_rng(config.seeds.shuffle);
  std::vector<Eigen::Index> order(dataset.rows());
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  const Eigen::Index n_samples = dataset.rows();
  const Eigen::Index m = std::min<Eigen::Index>(config.batch_size, n_samples);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double sum_lg = 0.0, sum_ld = 0.0, sum_pen = 0.0;
    int batches = 0;

    for (Eigen::Index start = 0; start < n_samples; start += m) {
      const Eigen::Index rows = std::min(m, n_samples - start);
      Eigen::MatrixXd real_batch(rows, dataset.cols());
      for (Eigen::Index r = 0; r < rows; ++r) {
        real_batch.row(r) = dataset.row(order[start + r]);
      }

      generator::GeneratorOutput out = generator::generate(config.pqc, result.gen_params);
      const Eigen::MatrixXd fakes = images_as_matrix(out);

      // --- discriminator ascent on L_D minus penalty ---
      const Eigen::VectorXd real_scores =
          disc::forward_batch(result.disc_params, real_batch);
      const Eigen::VectorXd fake_scores =
          disc::forward_batch(result.disc_params, fakes);

      // minimizing -L_D + penalty; clamping passes its slope through
      Eigen::VectorXd up_real(rows);
      for (Eigen::Index b = 0; b < rows; ++b) {
        up_real[b] = -1.0 / (static_cast<double>(rows) * clamp_score(real_scores[b]));
      }
      Eigen::VectorXd up_fake(fake_scores.size());
      for (Eigen::Index i = 0; i < fake_scores.size(); ++i) {
        up_fake[i] = out.image_probs[i] / (1.0 - clamp_score(fake_scores[i]));
      }

      disc::MlpParams grad =
          disc::backward_batch(result.disc_params, real_batch, up_real).param_grads;
      {
        disc::MlpParams fake_grad =
            disc::backward_batch(result.disc_params, fakes, up_fake).param_grads;
        for (std::size_t i = 0; i < grad.size(); ++i) {
          grad.values()[i] += fake_grad.values()[i];
        }
      }
      disc::PenaltyResult pen =
          disc::gradient_penalty(result.disc_params, real_batch, config.penalty);
      for (std::size_t i = 0; i < grad.size(); ++i) {
        grad.values()[i] += pen.param_grads.values()[i];
      }

      const std::vector<double> real_vec(real_scores.begin(), real_scores.end());
      const std::vector<double> fake_vec(fake_scores.begin(), fake_scores.end());
      const double loss_d = loss_discriminator(real_vec, out.image_probs, fake_vec);

      opt_disc.step(result.disc_params.values(), grad.values(), config.lr_disc);
      result.disc_updates++;

      // --- generator steps against the updated discriminator ---
      disc::BatchBackwardResult post = disc::backward_batch(
          result.disc_params, fakes, Eigen::VectorXd::Ones(fakes.rows()));
      const std::vector<double> scores = clamp_all(post.scores);
      std::vector<std::vector<double>> input_grads(fakes.rows());
      for (Eigen::Index i = 0; i < fakes.rows(); ++i) {
        input_grads[i].assign(post.input_grads.row(i).begin(),
                              post.input_grads.row(i).end());
      }

      const double loss_g = loss_generator(out.image_probs, scores);

      if (!std::isfinite(loss_d) || !std::isfinite(loss_g) ||
          !std::isfinite(pen.value)) {
        const auto dump = options.dump_dir / "abort_dump.txt";
        write_abort_dump(dump, epoch, batches, loss_d, loss_g, pen.value,
                         result.gen_params, out);
        throw TrainAbort("non-finite loss at epoch " + std::to_string(epoch),
                         dump.string());
      }

      const std::vector<double> g1 =
          generator::grad_phi1(config.pqc, result.gen_params, scores, options.threads);
      opt_phi1.step(result.gen_params.phi1, g1, config.lr_phi1);
      result.phi1_updates++;

      // phi2 gradient uses the refreshed distribution from the new phi1; the
      // images and scores are unchanged by the phi1 update.
      const std::vector<double> g2 = generator::grad_phi2(
          config.pqc, result.gen_params, scores, input_grads, options.threads);
      opt_phi2.step(result.gen_params.phi2, g2, config.lr_phi2);
      result.phi2_updates++;

      sum_ld += loss_d;
      sum_lg += loss_g;
      sum_pen += pen.value;
      ++batches;
    }

    // --- end-of-epoch metrics ---
    MetricsRecord rec;
    rec.epoch = epoch;
    rec.loss_gen = sum_lg / batches;
    rec.loss_disc = sum_ld / batches;
    rec.penalty = sum_pen / batches;

    generator::GeneratorOutput snap = generator::generate(config.pqc, result.gen_params);
    check_probability_vector(snap.image_probs, 1e-10, "image_probs");
    for (const auto& image : snap.images) {
      check_probability_vector(image, 1e-10, "image");
    }
    const std::vector<double> mean = generator::mean_image(snap);
    rec.kl_mean = data::relative_entropy(real_mean_vec, mean);
    rec.image_probs = snap.image_probs;
    rec.kl_image_vs_cluster.resize(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        const std::vector<double> cluster_mean(result.eval_clusters.means.row(j).begin(),
                                               result.eval_clusters.means.row(j).end());
        rec.kl_image_vs_cluster[static_cast<std::size_t>(i) * k + j] =
            data::relative_entropy(cluster_mean, snap.images[i]);
      }
    }

    if (epoch == config.epochs) result.final_output = snap;
    result.metrics.push_back(rec);
    if (options.on_epoch) {
      options.on_epoch(epoch, result.gen_params, result.disc_params, rec);
    }
  }

  return result;
}

}  // namespace dualpqc::train
