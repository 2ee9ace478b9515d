#include "dualpqc/discriminator.hpp"

#include <cmath>
#include <string>

#include "dualpqc/errors.hpp"
#include "dualpqc/rng.hpp"

namespace dualpqc::disc {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Eigen::ArrayXXd leaky(const Eigen::ArrayXXd& z) {
  return (z > 0.0).select(z, kLeakySlope * z);
}

Eigen::ArrayXXd leaky_slope(const Eigen::ArrayXXd& z) {
  // derivative at exactly 0 is the leak slope
  return (z > 0.0).select(Eigen::ArrayXXd::Ones(z.rows(), z.cols()),
                          Eigen::ArrayXXd::Constant(z.rows(), z.cols(), kLeakySlope));
}

void check_input(const Eigen::MatrixXd& x, int expected_width) {
  if (x.cols() != expected_width) {
    throw ValidationError("discriminator input width " + std::to_string(x.cols()) +
                          ", expected " + std::to_string(expected_width));
  }
  if (!x.allFinite()) throw ValidationError("discriminator input is not finite");
}

struct ForwardCache {
  std::vector<Eigen::MatrixXd> pre;   // pre-activations per layer
  std::vector<Eigen::MatrixXd> act;   // act[0] = input, act[l+1] = layer output
  Eigen::VectorXd scores;
};

ForwardCache run_forward(const MlpParams& params, const Eigen::MatrixXd& x) {
  check_input(x, params.layer_sizes().front());
  const int layers = params.num_layers();
  ForwardCache cache;
  cache.act.push_back(x);
  for (int l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = cache.act.back() * params.weight(l).transpose();
    z.rowwise() += params.bias(l).transpose();
    cache.pre.push_back(z);
    if (l + 1 < layers) {
      cache.act.push_back(leaky(z.array()).matrix());
    }
  }
  const Eigen::MatrixXd& logits = cache.pre.back();
  cache.scores.resize(x.rows());
  for (Eigen::Index b = 0; b < x.rows(); ++b) cache.scores[b] = sigmoid(logits(b, 0));
  return cache;
}

BatchBackwardResult run_backward(const MlpParams& params, const Eigen::MatrixXd& x,
                                 const Eigen::VectorXd& upstream) {
  if (upstream.size() != x.rows()) {
    throw ValidationError("backward_batch: upstream length mismatch");
  }
  ForwardCache cache = run_forward(params, x);
  const int layers = params.num_layers();

  BatchBackwardResult result;
  result.scores = cache.scores;
  result.param_grads = MlpParams(params.layer_sizes());

  // d(upstream . D) / dlogit = upstream * sigmoid'
  Eigen::MatrixXd delta =
      (upstream.array() * cache.scores.array() * (1.0 - cache.scores.array()))
          .matrix();
  for (int l = layers - 1; l >= 0; --l) {
    result.param_grads.weight(l) = delta.transpose() * cache.act[l];
    result.param_grads.bias(l) = delta.colwise().sum().transpose();
    Eigen::MatrixXd prev = delta * params.weight(l);
    if (l > 0) {
      delta = (prev.array() * leaky_slope(cache.pre[l - 1].array())).matrix();
    } else {
      result.input_grads = prev;
    }
  }
  return result;
}

}  // namespace

MlpParams::MlpParams(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw ValidationError("MLP needs at least two layer sizes");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] < 1 || sizes_[l + 1] < 1) {
      throw ValidationError("MLP layer sizes must be positive");
    }
    weight_offsets_.push_back(total);
    total += static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1];
    bias_offsets_.push_back(total);
    total += static_cast<std::size_t>(sizes_[l + 1]);
  }
  values_.assign(total, 0.0);
}

MlpParams MlpParams::init(std::vector<int> layer_sizes, std::uint64_t seed) {
  MlpParams params(std::move(layer_sizes));
  Rng rng(seed);
  for (int l = 0; l < params.num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(params.sizes_[l]));
    const std::size_t begin = params.weight_offsets_[l];
    const std::size_t end = params.bias_offsets_[l] + params.sizes_[l + 1];
    for (std::size_t i = begin; i < end; ++i) {
      params.values_[i] = rng.uniform(-bound, bound);
    }
  }
  return params;
}

Eigen::Map<const Eigen::MatrixXd> MlpParams::weight(int layer) const {
  return {values_.data() + weight_offsets_[layer], sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<Eigen::MatrixXd> MlpParams::weight(int layer) {
  return {values_.data() + weight_offsets_[layer], sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<const Eigen::VectorXd> MlpParams::bias(int layer) const {
  return {values_.data() + bias_offsets_[layer], sizes_[layer + 1]};
}

Eigen::Map<Eigen::VectorXd> MlpParams::bias(int layer) {
  return {values_.data() + bias_offsets_[layer], sizes_[layer + 1]};
}

void PenaltyConfig::validate() const {
  if (lambda < 0.0) throw ValidationError("penalty lambda must be >= 0");
  if (k <= 0.0) throw ValidationError("penalty probe step k must be > 0");
  if (c < 0.0) throw ValidationError("penalty target c must be >= 0");
}

double disc_forward(const MlpParams& params, std::span<const double> x) {
  Eigen::MatrixXd row(1, x.size());
  for (std::size_t i = 0; i < x.size(); ++i) row(0, i) = x[i];
  return run_forward(params, row).scores[0];
}

BackwardResult disc_backward(const MlpParams& params, std::span<const double> x,
                             double upstream) {
  Eigen::MatrixXd row(1, x.size());
  for (std::size_t i = 0; i < x.size(); ++i) row(0, i) = x[i];
  Eigen::VectorXd up(1);
  up[0] = upstream;
  BatchBackwardResult batch = run_backward(params, row, up);
  BackwardResult result;
  result.score = batch.scores[0];
  result.param_grads = std::move(batch.param_grads);
  result.input_grad.assign(batch.input_grads.row(0).begin(),
                           batch.input_grads.row(0).end());
  return result;
}

Eigen::VectorXd forward_batch(const MlpParams& params, const Eigen::MatrixXd& x) {
  return run_forward(params, x).scores;
}

BatchBackwardResult backward_batch(const MlpParams& params, const Eigen::MatrixXd& x,
                                   const Eigen::VectorXd& upstream) {
  return run_backward(params, x, upstream);
}

PenaltyResult gradient_penalty(const MlpParams& params, const Eigen::MatrixXd& real_batch,
                               const PenaltyConfig& cfg) {
  cfg.validate();
  if (real_batch.rows() == 0) throw ValidationError("gradient_penalty: empty batch");

  const Eigen::Index batch = real_batch.rows();
  BatchBackwardResult exact =
      backward_batch(params, real_batch, Eigen::VectorXd::Ones(batch));

  PenaltyResult result;
  result.param_grads = MlpParams(params.layer_sizes());

  std::vector<Eigen::Index> active;
  Eigen::VectorXd norms(batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    norms[b] = exact.input_grads.row(b).norm();
    if (norms[b] > cfg.c) {
      active.push_back(b);
      const double excess = norms[b] - cfg.c;
      result.value += excess * excess;
    }
  }
  result.value *= cfg.lambda / static_cast<double>(batch);
  if (active.empty() || cfg.lambda == 0.0) return result;

  // d||g||/dtheta probed along u = g/||g|| with step k: the hinge factor
  // lambda*2*(||g||-c)/batch rides on the upstream weights.
  const Eigen::Index m = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd plus(m, real_batch.cols());
  Eigen::MatrixXd minus(m, real_batch.cols());
  Eigen::VectorXd weight(m);
  for (Eigen::Index idx = 0; idx < m; ++idx) {
    const Eigen::Index b = active[idx];
    const Eigen::RowVectorXd u = exact.input_grads.row(b) / norms[b];
    plus.row(idx) = real_batch.row(b) + cfg.k * u;
    minus.row(idx) = real_batch.row(b) - cfg.k * u;
    weight[idx] = cfg.lambda * 2.0 * (norms[b] - cfg.c) /
                  (static_cast<double>(batch) * 2.0 * cfg.k);
  }
  BatchBackwardResult up = backward_batch(params, plus, weight);
  BatchBackwardResult down = backward_batch(params, minus, weight);
  for (std::size_t i = 0; i < result.param_grads.size(); ++i) {
    result.param_grads.values()[i] =
        up.param_grads.values()[i] - down.param_grads.values()[i];
  }
  return result;
}

}  // namespace dualpqc::disc
