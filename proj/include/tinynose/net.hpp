#pragma once

// Fixed 5-5-3 feedforward network with log-sigmoid units in both layers.
//
// Everything here is a value type on std::array storage, so forward() never
// touches the heap and can be called concurrently on shared parameters.

#include "tinynose/types.hpp"

namespace tinynose {

struct NetworkParams {
  Mat5x5 hidden_weights{};  // row j: weights of hidden unit j over the 5 inputs
  Vec5 hidden_bias{};
  Mat3x5 output_weights{};  // row i: weights of output unit i over the 5 hidden units
  Vec3 output_bias{};

  bool all_finite() const;

  /// Calls fn on every scalar in declaration order: hidden weights row-major,
  /// hidden bias, output weights row-major, output bias.
  template <typename Fn>
  void for_each_scalar(Fn&& fn) { visit_scalars(*this, fn); }
  template <typename Fn>
  void for_each_scalar(Fn&& fn) const { visit_scalars(*this, fn); }

  static constexpr std::size_t kScalarCount =
      kHidden * kInputs + kHidden + kOutputs * kHidden + kOutputs;

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;

 private:
  template <typename Self, typename Fn>
  static void visit_scalars(Self& self, Fn& fn) {
    for (auto& row : self.hidden_weights)
      for (auto& w : row) fn(w);
    for (auto& b : self.hidden_bias) fn(b);
    for (auto& row : self.output_weights)
      for (auto& w : row) fn(w);
    for (auto& b : self.output_bias) fn(b);
  }
};

/// Normalized channel readings in canonical channel order.
struct InputVector {
  Vec5 values{};

  friend bool operator==(const InputVector&, const InputVector&) = default;
};

struct Activations {
  Vec5 hidden_net{};
  Vec5 hidden_out{};
  Vec3 output_net{};
  Vec3 output_out{};
};

/// 1 / (1 + e^-n), evaluated so that neither branch can overflow.
double logsig(double n) noexcept;

/// Derivative of logsig expressed through its output a: a (1 - a).
double logsig_derivative(double a) noexcept;

/// Single unit: logsig(w p + b).
double unit_forward(double p, double w, double b) noexcept;

Activations forward(const NetworkParams& params, const InputVector& input) noexcept;

/// Index of the largest output; ties go to the lowest index.
std::size_t argmax(const Vec3& scores) noexcept;

}  // namespace tinynose
