#include "tinynose/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tinynose/rng.hpp"

namespace tinynose {

TargetVector::TargetVector(CompoundLabel label) : hot_(label_index(label)) { values_[hot_] = 1.0; }

void SplitFractions::validate() const {
  for (double f : {train, validation, test}) {
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("split fractions must lie in [0, 1]");
  }
  if (std::abs(train + validation + test - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
}

void TrainConfig::validate() const {
  if (!(base_learning_rate > 0.0) || !std::isfinite(base_learning_rate)) {
    throw std::invalid_argument("base_learning_rate must be > 0");
  }
  if (!(target_mse >= 0.0)) throw std::invalid_argument("target_mse must be >= 0");
  if (!(init_range > 0.0) || !std::isfinite(init_range)) {
    throw std::invalid_argument("init_range must be > 0");
  }
  split_fractions.validate();
}

std::string_view stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::TargetReached: return "target_reached";
    case StopReason::MaxEpochs: return "max_epochs";
    case StopReason::ValidationEarlyStop: return "validation_early_stop";
  }
  return "max_epochs";
}

double mse(const TargetVector& target, const Vec3& output) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < kOutputs; ++i) {
    const double e = target.values()[i] - output[i];
    sum += e * e;
  }
  return sum;
}

Vec3 output_sensitivity(const TargetVector& target, const Activations& acts) noexcept {
  Vec3 s{};
  for (std::size_t i = 0; i < kOutputs; ++i) {
    const double a = acts.output_out[i];
    s[i] = -2.0 * logsig_derivative(a) * (target.values()[i] - a);
  }
  return s;
}

Vec5 hidden_sensitivity(const NetworkParams& params, const Activations& acts,
                        const Vec3& output_s) noexcept {
  Vec5 s{};
  for (std::size_t j = 0; j < kHidden; ++j) {
    double back = 0.0;
    for (std::size_t i = 0; i < kOutputs; ++i) back += params.output_weights[i][j] * output_s[i];
    s[j] = logsig_derivative(acts.hidden_out[j]) * back;
  }
  return s;
}

Sensitivities backpropagate(const NetworkParams& params, const TargetVector& target,
                            const Activations& acts) noexcept {
  Sensitivities sens;
  sens.output_s = output_sensitivity(target, acts);
  sens.hidden_s = hidden_sensitivity(params, acts, sens.output_s);
  return sens;
}

NetworkParams sgd_step(const NetworkParams& params, const InputVector& input,
                       const Activations& acts, const Sensitivities& sens, double alpha) noexcept {
  NetworkParams next = params;
  for (std::size_t i = 0; i < kOutputs; ++i) {
    const double step = alpha * sens.output_s[i];
    for (std::size_t j = 0; j < kHidden; ++j) next.output_weights[i][j] -= step * acts.hidden_out[j];
    next.output_bias[i] -= step;
  }
  for (std::size_t j = 0; j < kHidden; ++j) {
    const double step = alpha * sens.hidden_s[j];
    for (std::size_t k = 0; k < kInputs; ++k) next.hidden_weights[j][k] -= step * input.values[k];
    next.hidden_bias[j] -= step;
  }
  return next;
}

double balanced_alpha(const std::array<std::size_t, kOutputs>& class_counts, CompoundLabel label) {
  if (label == CompoundLabel::Unknown) {
    throw std::invalid_argument("malformed dataset: sample without a class label");
  }
  for (std::size_t i = 0; i < kOutputs; ++i) {
    if (class_counts[i] == 0) {
      throw std::invalid_argument("malformed dataset: class '" +
                                  std::string(label_file_name(kClasses[i])) + "' has no samples");
    }
  }
  const std::size_t largest = *std::max_element(class_counts.begin(), class_counts.end());
  return std::sqrt(static_cast<double>(largest) /
                   static_cast<double>(class_counts[label_index(label)]));
}

NetworkParams init_params(std::uint64_t seed, double init_range) {
  if (!(init_range > 0.0)) throw std::invalid_argument("init_range must be > 0");
  Rng rng(derive_seed(seed, Stream::Init));
  NetworkParams p;
  p.for_each_scalar([&](double& v) { v = rng.uniform(-init_range, init_range); });
  return p;
}

DatasetSplit split_dataset(const LabeledDataset& data, const SplitFractions& fractions,
                           std::uint64_t seed) {
  if (data.empty()) throw std::invalid_argument("cannot split an empty dataset");
  fractions.validate();
  const std::size_t n = data.size();
  // The epsilon keeps products such as 100 * 0.29 from flooring one short.
  const auto part = [n](double f) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9));
  };
  const std::size_t n_val = std::min(part(fractions.validation), n);
  const std::size_t n_test = std::min(part(fractions.test), n - n_val);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, Stream::Split));
  rng.shuffle(std::span<std::size_t>(order));

  const auto take = [&](std::size_t from, std::size_t count) {
    std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(from),
                                 order.begin() + static_cast<std::ptrdiff_t>(from + count));
    std::sort(idx.begin(), idx.end());
    LabeledDataset out;
    out.samples.reserve(idx.size());
    for (std::size_t i : idx) out.samples.push_back(data.samples[i]);
    return out;
  };
  DatasetSplit split;
  split.validation = take(0, n_val);
  split.test = take(n_val, n_test);
  split.train = take(n_val + n_test, n - n_val - n_test);
  return split;
}

ParamGradient analytic_gradient(const NetworkParams& params, const InputVector& input,
                                const TargetVector& target) noexcept {
  const Activations acts = forward(params, input);
  const Sensitivities sens = backpropagate(params, target, acts);
  ParamGradient g;
  for (std::size_t i = 0; i < kOutputs; ++i) {
    for (std::size_t j = 0; j < kHidden; ++j) g.output_weights[i][j] = sens.output_s[i] * acts.hidden_out[j];
    g.output_bias[i] = sens.output_s[i];
  }
  for (std::size_t j = 0; j < kHidden; ++j) {
    for (std::size_t k = 0; k < kInputs; ++k) g.hidden_weights[j][k] = sens.hidden_s[j] * input.values[k];
    g.hidden_bias[j] = sens.hidden_s[j];
  }
  return g;
}

ParamGradient finite_difference_gradient(const NetworkParams& params, const InputVector& input,
                                         const TargetVector& target, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite difference step must be > 0");
  NetworkParams probe = params;
  ParamGradient grad;
  std::vector<double*> slots;
  slots.reserve(NetworkParams::kScalarCount);
  probe.for_each_scalar([&](double& v) { slots.push_back(&v); });
  std::vector<double*> out;
  out.reserve(NetworkParams::kScalarCount);
  grad.for_each_scalar([&](double& v) { out.push_back(&v); });

  for (std::size_t k = 0; k < slots.size(); ++k) {
    const double saved = *slots[k];
    *slots[k] = saved + h;
    const double up = mse(target, forward(probe, input).output_out);
    *slots[k] = saved - h;
    const double down = mse(target, forward(probe, input).output_out);
    *slots[k] = saved;
    *out[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

double mean_error(const NetworkParams& params, std::span<const Sample> samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (const Sample& s : samples) {
    sum += mse(TargetVector(s.label), forward(params, s.input).output_out);
  }
  return sum / static_cast<double>(samples.size());
}

double classification_accuracy(const NetworkParams& params, std::span<const Sample> samples) {
  if (samples.empty()) return 0.0;
  std::size_t hits = 0;
  for (const Sample& s : samples) {
    if (argmax(forward(params, s.input).output_out) == label_index(s.label)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

std::vector<Sample> to_samples(const LabeledDataset& data, const Normalizer& norm) {
  std::vector<Sample> out;
  out.reserve(data.size());
  for (const auto& lf : data.samples) out.push_back(Sample{normalize(norm, lf.frame), lf.label});
  return out;
}

TrainReport train_samples(std::span<const Sample> train_set, std::span<const Sample> validation_set,
                          const NetworkParams& initial, const TrainConfig& config) {
  config.validate();
  std::array<std::size_t, kOutputs> counts{};
  for (const Sample& s : train_set) ++counts[label_index(s.label)];
  for (std::size_t i = 0; i < kOutputs; ++i) {
    if (counts[i] == 0) {
      throw std::invalid_argument("class '" + std::string(label_file_name(kClasses[i])) +
                                  "' is absent from the training split");
    }
  }
  std::array<double, kOutputs> rate{};
  for (std::size_t i = 0; i < kOutputs; ++i) {
    rate[i] = config.base_learning_rate * balanced_alpha(counts, kClasses[i]);
  }

  TrainReport report;
  report.initial_params = initial;
  report.final_params = initial;
  report.stop_reason = StopReason::MaxEpochs;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(config.seed, Stream::Shuffle));

  NetworkParams params = initial;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t idx : order) {
      const Sample& s = train_set[idx];
      const TargetVector target(s.label);
      const Activations acts = forward(params, s.input);
      const Sensitivities sens = backpropagate(params, target, acts);
      params = sgd_step(params, s.input, acts, sens, rate[label_index(s.label)]);
    }

    report.epoch_mse.push_back(mean_error(params, train_set));
    report.epochs_run = epoch + 1;
    report.final_params = params;
    if (!validation_set.empty()) report.validation_mse.push_back(mean_error(params, validation_set));

    if (report.epoch_mse.back() <= config.target_mse) {
      report.stop_reason = StopReason::TargetReached;
      break;
    }
    if (config.validation_patience > 0 && !validation_set.empty()) {
      const double v = report.validation_mse.back();
      if (v < best_val) {
        best_val = v;
        stale = 0;
      } else if (++stale >= config.validation_patience) {
        report.stop_reason = StopReason::ValidationEarlyStop;
        break;
      }
    }
  }
  return report;
}

TrainReport train(const LabeledDataset& data, const TrainConfig& config) {
  config.validate();
  if (data.empty()) throw std::invalid_argument("cannot train on an empty dataset");
  DatasetSplit split = split_dataset(data, config.split_fractions, config.seed);
  const auto counts = split.train.class_counts();
  for (std::size_t i = 0; i < kOutputs; ++i) {
    if (counts[i] == 0) {
      throw std::invalid_argument("class '" + std::string(label_file_name(kClasses[i])) +
                                  "' is absent from the training split");
    }
  }
  const Normalizer norm = fit_normalizer(split.train);
  const auto train_set = to_samples(split.train, norm);
  const auto validation_set = to_samples(split.validation, norm);

  TrainReport report =
      train_samples(train_set, validation_set, init_params(config.seed, config.init_range), config);
  report.normalizer = norm;
  report.split = std::move(split);
  return report;
}

}  // namespace tinynose
