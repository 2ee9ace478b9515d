#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dualpqc/ansatz.hpp"
#include "dualpqc/qsim.hpp"

namespace dualpqc::generator {

/// Wiring of the two generator circuits.
///
/// PQC1 (pqc1_qubits, depth pqc1_depth) starts from H on every qubit and its
/// marginal over `pqc1_measured` yields the distribution over 2^image_qubits
/// image indices. PQC2 (pqc2_qubits, depth pqc2_depth) receives index bit b
/// on qubit pqc2_input_slots[b] (X gates, all other qubits |0>), and its
/// marginal over `pqc2_output` is the image: pixel j of image i is the
/// probability of outcome j on those qubits.
struct DualPqcConfig {
  int image_qubits = 2;  // n: images have 2^n pixels, 2^n of them
  int pqc1_qubits = 4;   // n1 >= n
  int pqc2_qubits = 4;   // n2 >= n
  int pqc1_depth = 2;
  int pqc2_depth = 16;
  std::vector<int> pqc1_measured;     // n distinct indices into PQC1
  std::vector<int> pqc2_output;       // n distinct indices into PQC2
  std::vector<int> pqc2_input_slots;  // n distinct indices into PQC2

  /// Index lists defaulted to the lowest `n` qubits of each circuit.
  static DualPqcConfig with_defaults(int image_qubits, int pqc1_qubits, int pqc2_qubits,
                                     int pqc1_depth, int pqc2_depth);

  void validate() const;

  std::size_t num_images() const { return std::size_t{1} << image_qubits; }
  std::size_t num_pixels() const { return std::size_t{1} << image_qubits; }
  ansatz::AnsatzSpec pqc1_spec() const { return {pqc1_qubits, pqc1_depth}; }
  ansatz::AnsatzSpec pqc2_spec() const { return {pqc2_qubits, pqc2_depth}; }
};

struct GeneratorParams {
  std::vector<double> phi1;  // length pqc1_qubits * (pqc1_depth + 1)
  std::vector<double> phi2;  // length pqc2_qubits * (pqc2_depth + 1)
};

/// Distribution over image indices plus the normalized images themselves.
struct GeneratorOutput {
  std::vector<double> image_probs;          // length 2^n, sums to 1
  std::vector<std::vector<double>> images;  // 2^n rows of 2^n pixels, each sums to 1
};

/// Exact marginal distribution produced by PQC1 over the measured qubits.
std::vector<double> pqc1_distribution(const DualPqcConfig& config,
                                      std::span<const double> phi1);

/// Normalized image produced by PQC2 for input index `index` (< 2^n).
std::vector<double> pqc2_image(const DualPqcConfig& config, std::span<const double> phi2,
                               std::uint64_t index);

GeneratorOutput generate(const DualPqcConfig& config, const GeneratorParams& params);

/// Probability-weighted pixel-wise average of the generated images.
std::vector<double> mean_image(const GeneratorOutput& output);

/// d/dphi1 of L_G = -sum_i p_i log D(I_i), with the discriminator scores held
/// fixed. Exact via the +-pi/2 parameter-shift rule. Scores must lie strictly
/// in (0,1).
std::vector<double> grad_phi1(const DualPqcConfig& config, const GeneratorParams& params,
                              std::span<const double> disc_scores, int threads = 1);

/// d/dphi2 of the same loss, chaining through the discriminator:
/// dL/dphi2_r = -sum_i p_i / D_i * sum_j dD_i/dpixel_j * dI_ij/dphi2_r,
/// with dI_ij/dphi2_r by parameter shift. disc_input_grads holds
/// dD(I_i)/dpixel_j as row i, column j.
std::vector<double> grad_phi2(const DualPqcConfig& config, const GeneratorParams& params,
                              std::span<const double> disc_scores,
                              const std::vector<std::vector<double>>& disc_input_grads,
                              int threads = 1);

}  // namespace dualpqc::generator
