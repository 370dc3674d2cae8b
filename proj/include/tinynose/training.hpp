#pragma once

// Per-sample stochastic gradient descent for the 5-5-3 network.
//
// Performance index per sample is the squared error e'e with e = t - a.
// Backpropagation:
//   s2 = -2 * a2 (1 - a2) * (t - a2)            (output layer)
//   s1 = a1 (1 - a1) * (W2' s2)                 (hidden layer)
//   W2 -= alpha * s2 a1',  b2 -= alpha * s2
//   W1 -= alpha * s1 p',   b1 -= alpha * s1
// Each sample's rate is the base rate times sqrt(N_max / N_class), which
// upweights minority classes.

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "tinynose/net.hpp"
#include "tinynose/sensing.hpp"
#include "tinynose/types.hpp"

namespace tinynose {

/// One-hot target: exactly one entry is 1, the rest 0.
class TargetVector {
 public:
  explicit TargetVector(CompoundLabel label);
  const Vec3& values() const { return values_; }
  CompoundLabel label() const { return label_from_index(hot_); }

 private:
  Vec3 values_{};
  std::size_t hot_ = 0;
};

struct SplitFractions {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;

  void validate() const;
};

struct TrainConfig {
  double base_learning_rate = 0.1;
  std::size_t max_epochs = 5000;
  double target_mse = 1e-4;
  std::uint64_t seed = 1;
  double init_range = 0.5;
  std::size_t validation_patience = 6;  // 0 disables early stopping
  SplitFractions split_fractions;

  void validate() const;
};

enum class StopReason { TargetReached, MaxEpochs, ValidationEarlyStop };
std::string_view stop_reason_name(StopReason reason);

struct DatasetSplit {
  LabeledDataset train;
  LabeledDataset validation;
  LabeledDataset test;
};

struct TrainReport {
  std::vector<double> epoch_mse;       // training-set MSE after each epoch
  std::vector<double> validation_mse;  // empty when there is no validation set
  StopReason stop_reason = StopReason::MaxEpochs;
  std::size_t epochs_run = 0;
  NetworkParams initial_params;
  NetworkParams final_params;
  /// Fitted on the training split only.
  Normalizer normalizer;
  DatasetSplit split;
};

struct Sensitivities {
  Vec3 output_s{};
  Vec5 hidden_s{};
};

/// A normalized input with its class.
struct Sample {
  InputVector input;
  CompoundLabel label = CompoundLabel::Lemon;
};

/// Sum of squared errors over the three outputs.
double mse(const TargetVector& target, const Vec3& output) noexcept;

Vec3 output_sensitivity(const TargetVector& target, const Activations& acts) noexcept;
Vec5 hidden_sensitivity(const NetworkParams& params, const Activations& acts,
                        const Vec3& output_s) noexcept;
Sensitivities backpropagate(const NetworkParams& params, const TargetVector& target,
                            const Activations& acts) noexcept;

/// Returns params moved one step of size alpha against the gradient.
NetworkParams sgd_step(const NetworkParams& params, const InputVector& input,
                       const Activations& acts, const Sensitivities& sens, double alpha) noexcept;

/// sqrt(max count / count of label). Throws std::invalid_argument if the label
/// is absent or any count is zero.
double balanced_alpha(const std::array<std::size_t, kOutputs>& class_counts, CompoundLabel label);

/// Every weight and bias i.i.d. uniform in [-init_range, +init_range].
NetworkParams init_params(std::uint64_t seed, double init_range);

/// Shuffled partition: floor(n * fraction) frames for validation and test,
/// everything else to train. Each part keeps the original frame order.
DatasetSplit split_dataset(const LabeledDataset& data, const SplitFractions& fractions,
                           std::uint64_t seed);

/// Gradient of the per-sample error with respect to every parameter, laid out
/// like the parameters themselves.
using ParamGradient = NetworkParams;

ParamGradient analytic_gradient(const NetworkParams& params, const InputVector& input,
                                const TargetVector& target) noexcept;

/// Central differences (F(theta + h) - F(theta - h)) / 2h of mse(forward(.)).
ParamGradient finite_difference_gradient(const NetworkParams& params, const InputVector& input,
                                         const TargetVector& target, double h);

/// Mean per-sample squared error over a set; 0 for an empty set.
double mean_error(const NetworkParams& params, std::span<const Sample> samples);

/// Fraction of samples whose argmax output matches the label.
double classification_accuracy(const NetworkParams& params, std::span<const Sample> samples);

std::vector<Sample> to_samples(const LabeledDataset& data, const Normalizer& norm);

/// SGD over already-normalized samples, starting from `initial`.
TrainReport train_samples(std::span<const Sample> train_set, std::span<const Sample> validation_set,
                          const NetworkParams& initial, const TrainConfig& config);

/// Full run: split, fit the normalizer on the training part, initialize from
/// the seed, then train. Throws if a class is missing from the training split.
TrainReport train(const LabeledDataset& data, const TrainConfig& config);

}  // namespace tinynose
