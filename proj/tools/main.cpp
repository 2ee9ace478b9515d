#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "dualpqc/errors.hpp"
#include "dualpqc/run.hpp"
#include "dualpqc/version.hpp"

namespace {

// Exit codes: 0 success, 1 validation/domain error, 2 I/O error.
int dispatch(const std::function<int()>& body) {
  try {
    return body();
  } catch (const dualpqc::TrainAbort& e) {
    std::cerr << "error: " << e.what() << "\ndiagnostic dump: " << e.dump_path()
              << '\n';
    return 1;
  } catch (const dualpqc::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const dualpqc::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-PQC GAN: train two variational quantum circuits against a "
               "classical discriminator on 4-pixel calorimeter depth profiles"};
  app.set_version_flag("--version", std::string(dualpqc::kVersion));
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset");
  std::size_t samples = 20000;
  std::uint64_t data_seed = 0;
  std::string out_path;
  gen->add_option("--samples", samples, "number of rows")->capture_default_str();
  gen->add_option("--seed", data_seed, "rng seed")->capture_default_str();
  gen->add_option("--out", out_path, "output file")->required();

  // train
  auto* tr = app.add_subcommand("train", "run adversarial training");
  std::string config_path, train_data, run_dir;
  int threads = 1;
  bool quiet = false;
  tr->add_option("--config", config_path, "training config file")->required();
  tr->add_option("--data", train_data, "dataset file")->required();
  tr->add_option("--out", run_dir, "run directory")->required();
  tr->add_option("--threads", threads, "worker cap for circuit gradients (does not change results)")
      ->capture_default_str();
  tr->add_flag("--quiet", quiet, "suppress per-epoch progress");

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate a finished run");
  std::string eval_run_dir, eval_data;
  ev->add_option("--run", eval_run_dir, "run directory")->required();
  ev->add_option("--data", eval_data, "dataset file")->required();

  // verify-dilation
  auto* vd = app.add_subcommand(
      "verify-dilation", "build the 2n-qubit dilation unitary and check recovery");
  std::string images_path;
  int random_n = 0;
  std::uint64_t dilation_seed = 0;
  vd->add_option("--images", images_path, "image file (2^n rows x 2^n pixels)");
  vd->add_option("--random", random_n, "use a random image set for this n");
  vd->add_option("--seed", dilation_seed, "rng seed for --random")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (gen->parsed()) {
    return dispatch([&] {
      dualpqc::run::gen_data(samples, data_seed, out_path);
      std::cout << "wrote " << samples << " samples to " << out_path << '\n';
      return 0;
    });
  }
  if (tr->parsed()) {
    return dispatch([&] {
      dualpqc::run::train_run(config_path, train_data, run_dir, threads,
                              quiet ? nullptr : &std::cerr);
      std::cout << "run complete: " << run_dir << '\n';
      return 0;
    });
  }
  if (ev->parsed()) {
    return dispatch([&] {
      const auto summary = dualpqc::run::eval_run(eval_run_dir, eval_data);
      std::cout << "kl(real mean || generated mean) = " << summary.kl_mean_image << '\n'
                << "min image probability = " << summary.min_prob << '\n'
                << "bijection total kl = " << summary.bijection.total_kl << '\n'
                << "details: " << eval_run_dir << "/eval_report.txt" << '\n';
      return 0;
    });
  }
  // verify-dilation
  return dispatch([&] {
    if ((images_path.empty() && random_n == 0) ||
        (!images_path.empty() && random_n != 0)) {
      throw dualpqc::ValidationError(
          "verify-dilation needs exactly one of --images or --random");
    }
    const auto report = images_path.empty()
                            ? dualpqc::run::verify_dilation_random(random_n, dilation_seed)
                            : dualpqc::run::verify_dilation_file(images_path);
    std::cout << "unitarity residual = " << report.unitarity_residual
              << " (threshold " << dualpqc::run::kUnitarityThreshold << ")\n"
              << "max recovery error = " << report.max_recovery_error << " (threshold "
              << dualpqc::run::kRecoveryThreshold << ")\n"
              << (report.pass ? "PASS" : "FAIL") << '\n';
    return report.pass ? 0 : 1;
  });
}
