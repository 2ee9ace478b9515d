#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dualpqc::train {

/// AMSGRAD: Adam-family update with a nondecreasing second-moment estimate.
///   m <- b1*m + (1-b1)*g
///   v <- b2*v + (1-b2)*g^2
///   vmax <- max(vmax, v)            (elementwise, never decreases)
///   p <- p - lr * (m / (1-b1^t)) / (sqrt(vmax / (1-b2^t)) + eps)
class Amsgrad {
 public:
  Amsgrad(std::size_t dim, double beta1 = 0.9, double beta2 = 0.999,
          double epsilon = 1e-8);

  void step(std::span<double> params, std::span<const double> grad, double lr);

  std::span<const double> max_second_moment() const { return vmax_; }
  std::int64_t steps_taken() const { return step_; }

 private:
  double beta1_, beta2_, epsilon_;
  std::int64_t step_ = 0;
  std::vector<double> m_, v_, vmax_;
};

}  // namespace dualpqc::train
