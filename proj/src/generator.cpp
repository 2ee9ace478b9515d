#include "dualpqc/generator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dualpqc/errors.hpp"
#include "dualpqc/parallel.hpp"

namespace dualpqc::generator {

namespace {

void check_index_list(const std::vector<int>& list, int n, int num_qubits,
                      const char* name) {
  if (static_cast<int>(list.size()) != n) {
    throw ValidationError(std::string(name) + " must have exactly " + std::to_string(n) +
                          " entries, got " + std::to_string(list.size()));
  }
  std::uint64_t seen = 0;
  for (int q : list) {
    if (q < 0 || q >= num_qubits) {
      throw ValidationError(std::string(name) + ": qubit index " + std::to_string(q) +
                            " out of range");
    }
    if (seen & (std::uint64_t{1} << q)) {
      throw ValidationError(std::string(name) + ": duplicate qubit index " +
                            std::to_string(q));
    }
    seen |= std::uint64_t{1} << q;
  }
}

void check_params(const DualPqcConfig& config, const GeneratorParams& params) {
  config.validate();
  if (params.phi1.size() != ansatz::param_count(config.pqc1_spec())) {
    throw ValidationError("phi1 has wrong length");
  }
  if (params.phi2.size() != ansatz::param_count(config.pqc2_spec())) {
    throw ValidationError("phi2 has wrong length");
  }
}

void check_scores(std::span<const double> scores, std::size_t expected) {
  if (scores.size() != expected) {
    throw ValidationError("expected " + std::to_string(expected) +
                          " discriminator scores, got " + std::to_string(scores.size()));
  }
  for (double s : scores) {
    if (!(s > 0.0 && s < 1.0)) {
      throw ValidationError("discriminator score " + std::to_string(s) +
                            " outside (0,1)");
    }
  }
}

constexpr double kShift = std::numbers::pi / 2.0;

}  // namespace

DualPqcConfig DualPqcConfig::with_defaults(int image_qubits, int pqc1_qubits,
                                           int pqc2_qubits, int pqc1_depth,
                                           int pqc2_depth) {
  DualPqcConfig config;
  config.image_qubits = image_qubits;
  config.pqc1_qubits = pqc1_qubits;
  config.pqc2_qubits = pqc2_qubits;
  config.pqc1_depth = pqc1_depth;
  config.pqc2_depth = pqc2_depth;
  for (int q = 0; q < image_qubits; ++q) {
    config.pqc1_measured.push_back(q);
    config.pqc2_output.push_back(q);
    config.pqc2_input_slots.push_back(q);
  }
  config.validate();
  return config;
}

void DualPqcConfig::validate() const {
  if (image_qubits < 1) throw ValidationError("image_qubits must be >= 1");
  if (pqc1_qubits < image_qubits) {
    throw ValidationError("pqc1_qubits must be >= image_qubits");
  }
  if (pqc2_qubits < image_qubits) {
    throw ValidationError("pqc2_qubits must be >= image_qubits");
  }
  if (pqc1_depth < 0 || pqc2_depth < 0) throw ValidationError("depths must be >= 0");
  check_index_list(pqc1_measured, image_qubits, pqc1_qubits, "pqc1_measured");
  check_index_list(pqc2_output, image_qubits, pqc2_qubits, "pqc2_output");
  check_index_list(pqc2_input_slots, image_qubits, pqc2_qubits, "pqc2_input_slots");
}

std::vector<double> pqc1_distribution(const DualPqcConfig& config,
                                      std::span<const double> phi1) {
  config.validate();
  qsim::Statevector state = qsim::basis_state(config.pqc1_qubits, 0);
  for (int q = 0; q < config.pqc1_qubits; ++q) {
    qsim::apply_gate_inplace(state, qsim::GateOp::h(q));
  }
  state = ansatz::run_ansatz(config.pqc1_spec(), phi1, std::move(state));
  return qsim::marginal_probabilities(state, config.pqc1_measured);
}

std::vector<double> pqc2_image(const DualPqcConfig& config, std::span<const double> phi2,
                               std::uint64_t index) {
  config.validate();
  if (index >= config.num_images()) {
    throw ValidationError("pqc2_image: index " + std::to_string(index) +
                          " out of range");
  }
  qsim::Statevector state = qsim::basis_state(config.pqc2_qubits, 0);
  for (int b = 0; b < config.image_qubits; ++b) {
    if ((index >> b) & 1u) {
      qsim::apply_gate_inplace(state, qsim::GateOp::x(config.pqc2_input_slots[b]));
    }
  }
  state = ansatz::run_ansatz(config.pqc2_spec(), phi2, std::move(state));
  return qsim::marginal_probabilities(state, config.pqc2_output);
}

GeneratorOutput generate(const DualPqcConfig& config, const GeneratorParams& params) {
  check_params(config, params);
  GeneratorOutput out;
  out.image_probs = pqc1_distribution(config, params.phi1);
  out.images.reserve(config.num_images());
  for (std::uint64_t i = 0; i < config.num_images(); ++i) {
    out.images.push_back(pqc2_image(config, params.phi2, i));
  }
  return out;
}

std::vector<double> mean_image(const GeneratorOutput& output) {
  if (output.images.empty() || output.image_probs.size() != output.images.size()) {
    throw ValidationError("mean_image: inconsistent generator output");
  }
  std::vector<double> mean(output.images.front().size(), 0.0);
  for (std::size_t i = 0; i < output.images.size(); ++i) {
    for (std::size_t j = 0; j < mean.size(); ++j) {
      mean[j] += output.image_probs[i] * output.images[i][j];
    }
  }
  return mean;
}

std::vector<double> grad_phi1(const DualPqcConfig& config, const GeneratorParams& params,
                              std::span<const double> disc_scores, int threads) {
  check_params(config, params);
  check_scores(disc_scores, config.num_images());

  std::vector<double> log_scores(disc_scores.size());
  for (std::size_t i = 0; i < disc_scores.size(); ++i) {
    log_scores[i] = std::log(disc_scores[i]);
  }

  std::vector<double> grad(params.phi1.size(), 0.0);
  parallel_for(params.phi1.size(), threads, [&](std::size_t r) {
    std::vector<double> shifted = params.phi1;
    shifted[r] += kShift;
    const std::vector<double> plus = pqc1_distribution(config, shifted);
    shifted[r] -= 2.0 * kShift;
    const std::vector<double> minus = pqc1_distribution(config, shifted);
    double g = 0.0;
    for (std::size_t i = 0; i < log_scores.size(); ++i) {
      g -= 0.5 * (plus[i] - minus[i]) * log_scores[i];
    }
    grad[r] = g;
  });
  return grad;
}

std::vector<double> grad_phi2(const DualPqcConfig& config, const GeneratorParams& params,
                              std::span<const double> disc_scores,
                              const std::vector<std::vector<double>>& disc_input_grads,
                              int threads) {
  check_params(config, params);
  check_scores(disc_scores, config.num_images());
  if (disc_input_grads.size() != config.num_images()) {
    throw ValidationError("grad_phi2: need one input-gradient row per image");
  }
  for (const auto& row : disc_input_grads) {
    if (row.size() != config.num_pixels()) {
      throw ValidationError("grad_phi2: input-gradient row has wrong width");
    }
  }

  const std::vector<double> probs = pqc1_distribution(config, params.phi1);

  // Per-image chain weight p_i / D_i applied to each pixel derivative.
  std::vector<std::vector<double>> pixel_weight(config.num_images());
  for (std::size_t i = 0; i < config.num_images(); ++i) {
    pixel_weight[i].resize(config.num_pixels());
    for (std::size_t j = 0; j < config.num_pixels(); ++j) {
      pixel_weight[i][j] = probs[i] / disc_scores[i] * disc_input_grads[i][j];
    }
  }

  std::vector<double> grad(params.phi2.size(), 0.0);
  parallel_for(params.phi2.size(), threads, [&](std::size_t r) {
    std::vector<double> shifted = params.phi2;
    double g = 0.0;
    for (std::uint64_t i = 0; i < config.num_images(); ++i) {
      shifted[r] = params.phi2[r] + kShift;
      const std::vector<double> plus = pqc2_image(config, shifted, i);
      shifted[r] = params.phi2[r] - kShift;
      const std::vector<double> minus = pqc2_image(config, shifted, i);
      shifted[r] = params.phi2[r];
      for (std::size_t j = 0; j < config.num_pixels(); ++j) {
        g -= pixel_weight[i][j] * 0.5 * (plus[j] - minus[j]);
      }
    }
    grad[r] = g;
  });
  return grad;
}

}  // namespace dualpqc::generator
