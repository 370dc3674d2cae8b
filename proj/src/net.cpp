#include "tinynose/net.hpp"

#include <cmath>

namespace tinynose {

bool NetworkParams::all_finite() const {
  bool ok = true;
  for_each_scalar([&ok](double v) { ok = ok && std::isfinite(v); });
  return ok;
}

double logsig(double n) noexcept {
  if (n >= 0.0) {
    return 1.0 / (1.0 + std::exp(-n));
  }
  const double e = std::exp(n);
  return e / (1.0 + e);
}

double logsig_derivative(double a) noexcept { return a * (1.0 - a); }

double unit_forward(double p, double w, double b) noexcept { return logsig(w * p + b); }

Activations forward(const NetworkParams& params, const InputVector& input) noexcept {
  Activations acts;
  for (std::size_t j = 0; j < kHidden; ++j) {
    double n = params.hidden_bias[j];
    for (std::size_t k = 0; k < kInputs; ++k) {
      n += params.hidden_weights[j][k] * input.values[k];
    }
    acts.hidden_net[j] = n;
    acts.hidden_out[j] = logsig(n);
  }
  for (std::size_t i = 0; i < kOutputs; ++i) {
    double n = params.output_bias[i];
    for (std::size_t j = 0; j < kHidden; ++j) {
      n += params.output_weights[i][j] * acts.hidden_out[j];
    }
    acts.output_net[i] = n;
    acts.output_out[i] = logsig(n);
  }
  return acts;
}

std::size_t argmax(const Vec3& scores) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kOutputs; ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

}  // namespace tinynose
