#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace dualpqc::stinespring {

/// 2^n images of 2^n pixels with optional per-pixel phases (radians). Each
/// intensity row sums to 1 within 1e-12.
struct ImageSet {
  Eigen::MatrixXd intensities;  // 2^n x 2^n
  Eigen::MatrixXd phases;       // same shape, or 0x0 for all-zero phases

  int image_qubits() const;
  void validate() const;

  /// Uniform random intensities (rows normalized); phases uniform in
  /// [-pi, pi) when requested. Generic rows are far from orthogonal.
  static ImageSet random(int image_qubits, std::uint64_t seed, bool with_phases);
};

/// Unitary on 2n qubits that prepares |i>(ancilla block, qubits n..2n-1)
/// tensor |image_i>(qubits 0..n-1) from the basis input |0...0>|i>.
///
/// Column i (i < 2^n) holds sqrt(I_ij)*exp(i*phase_ij) at row (i << n) | j;
/// the remaining columns are completed to an orthonormal basis by
/// Gram-Schmidt over canonical candidates taken in index order (candidates
/// with residual norm below 1e-8 are skipped).
Eigen::MatrixXcd build_dilation_unitary(const ImageSet& images);

/// max elementwise |U'U - I| and |UU' - I|.
double unitarity_residual(const Eigen::MatrixXcd& u);

/// Applies U to each input |0...0>|i>, discards the ancilla block by
/// marginalizing, and returns per-image max |recovered pixel - I_ij|.
std::vector<double> verify_recovery(const Eigen::MatrixXcd& u, const ImageSet& images);

}  // namespace dualpqc::stinespring
