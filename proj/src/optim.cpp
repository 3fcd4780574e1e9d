#include "nodetok/optim.hpp"

#include <cmath>

#include "nodetok/error.hpp"

namespace nodetok {

Adam::Adam(std::size_t parameter_count, AdamOptions opts)
    : opts_(opts), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) throw Error("Adam: parameter count changed");
  ++t_;
  const double c1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = opts_.beta1 * m_[i] + (1.0 - opts_.beta1) * grads[i];
    v_[i] = opts_.beta2 * v_[i] + (1.0 - opts_.beta2) * grads[i] * grads[i];
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= opts_.learning_rate * m_hat / (std::sqrt(v_hat) + opts_.epsilon);
  }
}

}  // namespace nodetok
