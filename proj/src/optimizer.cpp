#include "dualpqc/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "dualpqc/errors.hpp"

namespace dualpqc::train {

Amsgrad::Amsgrad(std::size_t dim, double beta1, double beta2, double epsilon)
    : beta1_(beta1), beta2_(beta2), epsilon_(epsilon),
      m_(dim, 0.0), v_(dim, 0.0), vmax_(dim, 0.0) {
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ValidationError("AMSGRAD betas must lie in [0,1)");
  }
  if (epsilon <= 0.0) throw ValidationError("AMSGRAD epsilon must be > 0");
}

void Amsgrad::step(std::span<double> params, std::span<const double> grad, double lr) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw ValidationError("AMSGRAD: parameter/gradient size mismatch");
  }
  ++step_;
  const double corr1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double corr2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  for (std::size_t i = 0; i < m_.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    vmax_[i] = std::max(vmax_[i], v_[i]);
    const double m_hat = m_[i] / corr1;
    const double v_hat = vmax_[i] / corr2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + epsilon_);
  }
}

}  // namespace dualpqc::train
