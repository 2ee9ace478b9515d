#include "dualpqc/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "dualpqc/errors.hpp"
#include "dualpqc/io.hpp"
#include "dualpqc/version.hpp"

namespace dualpqc::run {

namespace {

std::string epoch_tag(int epoch) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", epoch);
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void gen_data(std::size_t samples, std::uint64_t seed,
              const std::filesystem::path& out_path) {
  data::DatasetMatrix dataset = data::gen_synthetic_dataset(samples, seed);
  data::save_dataset(out_path, dataset);
}

train::TrainResult train_run(const std::filesystem::path& config_path,
                             const std::filesystem::path& data_path,
                             const std::filesystem::path& out_dir, int threads,
                             std::ostream* progress) {
  train::TrainConfig config = io::parse_train_config(config_path);
  data::DatasetMatrix dataset =
      data::load_dataset(data_path, static_cast<int>(config.pqc.num_pixels()));

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "checkpoints", ec);
  if (ec) throw IoError("cannot create run directory: " + out_dir.string());

  io::RunManifest manifest;
  manifest.code_version = kVersion;
  manifest.started_utc = io::utc_timestamp();
  manifest.config_path = config_path.string();
  manifest.data_path = data_path.string();
  manifest.data_hash = io::fnv1a_file(data_path);
  manifest.config = config;
  manifest.artifacts = {{"config", "config.cfg"},
                        {"metrics", "metrics.csv"},
                        {"generator_output", "generator_output.json"},
                        {"checkpoints", "checkpoints"}};

  train::TrainOptions options;
  options.threads = threads;
  options.dump_dir = out_dir;
  options.on_epoch = [&](int epoch, const generator::GeneratorParams& gen,
                         const disc::MlpParams& disc_params,
                         const train::MetricsRecord& rec) {
    const bool due = config.checkpoint_interval > 0 &&
                     epoch % config.checkpoint_interval == 0;
    if (due || epoch == config.epochs) {
      io::save_generator_params(
          out_dir / "checkpoints" / ("gen_epoch" + epoch_tag(epoch) + ".txt"), gen);
      io::save_disc_params(
          out_dir / "checkpoints" / ("disc_epoch" + epoch_tag(epoch) + ".txt"),
          disc_params);
    }
    if (progress) {
      (*progress) << "epoch " << epoch << "/" << config.epochs
                  << "  loss_gen " << rec.loss_gen << "  loss_disc " << rec.loss_disc
                  << "  kl_mean " << rec.kl_mean << '\n';
    }
  };

  train::TrainResult result = train::train(config, dataset, options);

  io::write_train_config(out_dir / "config.cfg", config);
  io::write_metrics_csv(out_dir / "metrics.csv", result.metrics,
                        static_cast<int>(config.pqc.num_images()));
  io::write_generator_output(out_dir / "generator_output.json", result.final_output,
                             config.pqc.image_qubits);
  manifest.finished_utc = io::utc_timestamp();
  io::write_manifest(out_dir / "manifest.json", manifest);
  return result;
}

EvalSummary eval_run(const std::filesystem::path& run_dir,
                     const std::filesystem::path& data_path) {
  const auto manifest_path = run_dir / "manifest.json";
  const auto output_path = run_dir / "generator_output.json";
  std::string missing;
  if (!std::filesystem::exists(manifest_path)) missing += manifest_path.string();
  if (!std::filesystem::exists(output_path)) {
    if (!missing.empty()) missing += ", ";
    missing += output_path.string();
  }
  if (!missing.empty()) {
    throw ValidationError("run directory incomplete, expected: " + missing);
  }

  const io::RunManifest manifest = io::load_manifest(manifest_path);
  const io::LoadedGeneratorOutput loaded = io::load_generator_output(output_path);
  const int n = loaded.image_qubits;
  const int k = 1 << n;
  if (static_cast<int>(loaded.output.images.size()) != k) {
    throw ValidationError("generator output image count does not match image_qubits");
  }

  data::DatasetMatrix dataset = data::load_dataset(data_path, k);
  data::ClusterResult clusters = data::kmeans(dataset, k, manifest.config.seeds.data);

  EvalSummary summary;
  summary.image_qubits = n;
  summary.image_probs = loaded.output.image_probs;
  summary.min_prob = *std::min_element(summary.image_probs.begin(),
                                       summary.image_probs.end());

  const Eigen::RowVectorXd real_mean = dataset.colwise().mean();
  const std::vector<double> real_mean_vec(real_mean.begin(), real_mean.end());
  const std::vector<double> gen_mean = generator::mean_image(loaded.output);
  summary.kl_mean_image = data::relative_entropy(real_mean_vec, gen_mean);
  summary.bijection = data::match_bijection(loaded.output.images, clusters.means);

  {
    std::ofstream table(run_dir / "eval_table.csv");
    if (!table) throw IoError("cannot write eval_table.csv");
    table << "image,cluster,kl_cluster_vs_image,prob\n";
    for (int i = 0; i < k; ++i) {
      table << i << ',' << summary.bijection.image_to_cluster[i] << ','
            << fmt(summary.bijection.pair_kl[i]) << ','
            << fmt(summary.image_probs[i]) << '\n';
    }
  }
  {
    std::ofstream report(run_dir / "eval_report.txt");
    if (!report) throw IoError("cannot write eval_report.txt");
    report << "samples: " << dataset.rows() << "\n";
    report << "kl(real mean || generated mean): " << fmt(summary.kl_mean_image) << "\n";
    report << "min image probability: " << fmt(summary.min_prob) << "\n";
    report << "bijection (image -> cluster, kl):\n";
    for (int i = 0; i < k; ++i) {
      report << "  image " << i << " -> set " << summary.bijection.image_to_cluster[i]
             << "  kl " << fmt(summary.bijection.pair_kl[i]) << "\n";
    }
    report << "total bijection kl: " << fmt(summary.bijection.total_kl) << "\n";
  }
  return summary;
}

namespace {

DilationReport report_for(const stinespring::ImageSet& images) {
  const Eigen::MatrixXcd u = stinespring::build_dilation_unitary(images);
  const std::vector<double> errors = stinespring::verify_recovery(u, images);
  DilationReport report;
  report.unitarity_residual = stinespring::unitarity_residual(u);
  report.max_recovery_error = *std::max_element(errors.begin(), errors.end());
  report.pass = report.unitarity_residual < kUnitarityThreshold &&
                report.max_recovery_error < kRecoveryThreshold;
  return report;
}

}  // namespace

DilationReport verify_dilation_file(const std::filesystem::path& images_path) {
  // peek at the first data row to learn the width
  std::ifstream in(images_path);
  if (!in) throw IoError("cannot open: " + images_path.string());
  std::string line;
  int width = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    width = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
    break;
  }
  if (width == 0) throw ValidationError("image file has no data rows");
  data::DatasetMatrix rows = data::load_dataset(images_path, width);
  if (rows.rows() != width || (width & (width - 1)) != 0) {
    throw ValidationError("image file must hold 2^n rows of 2^n pixels, got " +
                          std::to_string(rows.rows()) + " x " + std::to_string(width));
  }
  stinespring::ImageSet images;
  images.intensities = rows;
  return report_for(images);
}

DilationReport verify_dilation_random(int image_qubits, std::uint64_t seed) {
  return report_for(stinespring::ImageSet::random(image_qubits, seed, true));
}

}  // namespace dualpqc::run
