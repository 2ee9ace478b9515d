#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

namespace dualpqc::disc {

/// Feed-forward classifier: affine -> LeakyReLU(0.2) -> affine ->
/// LeakyReLU(0.2) -> affine -> sigmoid. Default topology 4-256-128-1.
///
/// Parameters live in one flat buffer: for each layer, the weight matrix
/// (out x in, column-major) followed by the bias vector. Optimizer state and
/// checkpoints use the same layout.
class MlpParams {
 public:
  MlpParams() = default;
  explicit MlpParams(std::vector<int> layer_sizes);

  /// Weights and biases i.i.d. uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)],
  /// drawn in flat-buffer order from the seeded stream.
  static MlpParams init(std::vector<int> layer_sizes, std::uint64_t seed);

  static std::vector<int> default_layer_sizes() { return {4, 256, 128, 1}; }

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }

  Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
  Eigen::Map<Eigen::MatrixXd> weight(int layer);
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;
  Eigen::Map<Eigen::VectorXd> bias(int layer);

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  bool same_shape(const MlpParams& other) const { return sizes_ == other.sizes_; }

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> weight_offsets_;
  std::vector<std::size_t> bias_offsets_;
  std::vector<double> values_;
};

struct PenaltyConfig {
  double lambda = 7.0;  // penalty strength, >= 0
  double k = 0.01;      // finite-difference probe step, > 0
  double c = 1.0;       // input-gradient norm target, >= 0

  void validate() const;
};

constexpr double kLeakySlope = 0.2;

/// Score in (0,1) for one input row. Throws on non-finite input or width
/// mismatch.
double disc_forward(const MlpParams& params, std::span<const double> x);

struct BackwardResult {
  double score = 0.0;
  MlpParams param_grads;            // gradients of upstream * D(x)
  std::vector<double> input_grad;   // d(upstream * D(x)) / dx
};

/// Exact backpropagation. LeakyReLU derivative at exactly 0 is the leak
/// slope.
BackwardResult disc_backward(const MlpParams& params, std::span<const double> x,
                             double upstream);

// Batched variants; rows of x are samples. Used by the training loop, same
// math as the single-sample contracts.

Eigen::VectorXd forward_batch(const MlpParams& params, const Eigen::MatrixXd& x);

struct BatchBackwardResult {
  Eigen::VectorXd scores;
  MlpParams param_grads;        // sum over rows of upstream_b * dD(x_b)/dtheta
  Eigen::MatrixXd input_grads;  // row b = upstream_b * dD(x_b)/dx
};

BatchBackwardResult backward_batch(const MlpParams& params, const Eigen::MatrixXd& x,
                                   const Eigen::VectorXd& upstream);

struct PenaltyResult {
  double value = 0.0;
  MlpParams param_grads;
};

/// lambda * mean_b max(0, ||grad_x D(x_b)|| - c)^2 over the real batch.
/// The input-gradient norm uses exact backprop; the penalty's parameter
/// gradient uses a finite difference with step k along the normalized input
/// gradient, so no second-order backprop is needed. Rows with inactive hinge
/// contribute exactly zero.
PenaltyResult gradient_penalty(const MlpParams& params, const Eigen::MatrixXd& real_batch,
                               const PenaltyConfig& cfg);

}  // namespace dualpqc::disc
