#include "dualpqc/stinespring.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "dualpqc/errors.hpp"
#include "dualpqc/qsim.hpp"
#include "dualpqc/rng.hpp"

namespace dualpqc::stinespring {

namespace {

constexpr double kResidualSkip = 1e-8;

bool is_power_of_two(Eigen::Index x) { return x > 0 && (x & (x - 1)) == 0; }

}  // namespace

int ImageSet::image_qubits() const {
  int n = 0;
  while ((Eigen::Index{1} << n) < intensities.rows()) ++n;
  return n;
}

void ImageSet::validate() const {
  if (intensities.rows() != intensities.cols() || !is_power_of_two(intensities.rows())) {
    throw ValidationError("ImageSet: need 2^n images of 2^n pixels");
  }
  for (Eigen::Index i = 0; i < intensities.rows(); ++i) {
    if ((intensities.row(i).array() < 0.0).any()) {
      throw ValidationError("ImageSet: image " + std::to_string(i) +
                            " has a negative pixel");
    }
    if (std::abs(intensities.row(i).sum() - 1.0) > 1e-12) {
      throw ValidationError("ImageSet: image " + std::to_string(i) +
                            " is not normalized");
    }
  }
  if (phases.size() != 0 && (phases.rows() != intensities.rows() ||
                             phases.cols() != intensities.cols())) {
    throw ValidationError("ImageSet: phases shape mismatch");
  }
}

ImageSet ImageSet::random(int image_qubits, std::uint64_t seed, bool with_phases) {
  if (image_qubits < 1) throw ValidationError("ImageSet::random: image_qubits >= 1");
  const Eigen::Index dim = Eigen::Index{1} << image_qubits;
  Rng rng(seed);
  ImageSet set;
  set.intensities.resize(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
      set.intensities(i, j) = rng.uniform();
      sum += set.intensities(i, j);
    }
    set.intensities.row(i) /= sum;
  }
  if (with_phases) {
    set.phases.resize(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        set.phases(i, j) = rng.uniform(-std::numbers::pi, std::numbers::pi);
      }
    }
  }
  return set;
}

Eigen::MatrixXcd build_dilation_unitary(const ImageSet& images) {
  images.validate();
  const int n = images.image_qubits();
  const Eigen::Index small = Eigen::Index{1} << n;
  const Eigen::Index dim = small * small;

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < small; ++i) {
    for (Eigen::Index j = 0; j < small; ++j) {
      const double phase = images.phases.size() ? images.phases(i, j) : 0.0;
      u((i << n) | j, i) =
          std::sqrt(images.intensities(i, j)) * std::exp(std::complex<double>(0, phase));
    }
    u.col(i).normalize();
  }

  // Complete the basis from canonical candidates; one re-orthogonalization
  // pass keeps the residual near machine precision.
  Eigen::Index filled = small;
  for (Eigen::Index cand = 0; cand < dim && filled < dim; ++cand) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = 0; c < filled; ++c) {
        v -= u.col(c).dot(v) * u.col(c);
      }
    }
    const double norm = v.norm();
    if (norm <= kResidualSkip) continue;
    u.col(filled++) = v / norm;
  }
  if (filled != dim) {
    throw ValidationError("dilation completion failed: orthogonal complement has "
                          "unexpected dimension");
  }
  return u;
}

double unitarity_residual(const Eigen::MatrixXcd& u) {
  if (u.rows() != u.cols()) throw ValidationError("unitarity_residual: square only");
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  const double left = (u.adjoint() * u - id).cwiseAbs().maxCoeff();
  const double right = (u * u.adjoint() - id).cwiseAbs().maxCoeff();
  return std::max(left, right);
}

std::vector<double> verify_recovery(const Eigen::MatrixXcd& u, const ImageSet& images) {
  images.validate();
  const int n = images.image_qubits();
  const Eigen::Index small = Eigen::Index{1} << n;
  const Eigen::Index dim = small * small;
  if (u.rows() != dim || u.cols() != dim) {
    throw ValidationError("verify_recovery: unitary dimension mismatch");
  }

  std::vector<int> kept(n);
  for (int q = 0; q < n; ++q) kept[q] = q;

  std::vector<double> errors;
  errors.reserve(small);
  for (Eigen::Index i = 0; i < small; ++i) {
    // input |0...0>|i> has basis index i
    qsim::Statevector state = qsim::basis_state(2 * n, static_cast<std::uint64_t>(i));
    Eigen::Map<Eigen::VectorXcd> amps(state.amplitudes.data(), dim);
    amps = (u * amps).eval();
    const std::vector<double> recovered = qsim::marginal_probabilities(state, kept);
    double err = 0.0;
    for (Eigen::Index j = 0; j < small; ++j) {
      err = std::max(err, std::abs(recovered[j] - images.intensities(i, j)));
    }
    errors.push_back(err);
  }
  return errors;
}

}  // namespace dualpqc::stinespring
