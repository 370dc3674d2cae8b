#include "tinynose/pipeline.hpp"

#include <stdexcept>
#include <thread>

#include "tinynose/text.hpp"

namespace tinynose {

CompoundLabel decide(const Vec3& scores, double threshold) noexcept {
  const std::size_t best = argmax(scores);
  if (scores[best] < threshold) return CompoundLabel::Unknown;
  return kClasses[best];
}

Decision classify_frame(const NetworkParams& params, const Normalizer& norm,
                        const SensorFrame& frame, double threshold) noexcept {
  Decision d;
  d.scores = forward(params, normalize(norm, frame)).output_out;
  d.label = decide(d.scores, threshold);
  d.timestamp_ms = frame.timestamp_ms;
  return d;
}

std::string format_decision(const Decision& d) {
  std::string line = std::to_string(d.timestamp_ms);
  line += ',';
  line += label_name(d.label);
  for (double s : d.scores) {
    line += ',';
    line += text::format_significant(s, 9);
  }
  return line;
}

FrameSource frames_from(std::span<const SensorFrame> frames) {
  return [frames, next = std::size_t{0}]() mutable -> std::optional<SensorFrame> {
    if (next >= frames.size()) return std::nullopt;
    return frames[next++];
  };
}

StreamSummary run_stream(const NetworkParams& params, const Normalizer& norm,
                         const FrameSource& source, const DecisionSink& sink,
                         const StreamOptions& options) {
  using Clock = std::chrono::steady_clock;
  StreamSummary summary;
  std::optional<std::uint64_t> last_ts;
  auto deadline = Clock::now();
  const auto period = std::chrono::milliseconds(options.sample_period_ms);

  while (auto frame = source()) {
    if (last_ts && frame->timestamp_ms < *last_ts) {
      throw std::runtime_error("frame " + std::to_string(summary.frames) + " has timestamp " +
                               std::to_string(frame->timestamp_ms) + " ms, earlier than " +
                               std::to_string(*last_ts) + " ms");
    }
    last_ts = frame->timestamp_ms;
    const Decision d = classify_frame(params, norm, *frame, options.threshold);
    if (options.pacing == Pacing::RealTime) {
      if (summary.frames > 0) {
        deadline += period;
        std::this_thread::sleep_until(deadline);
      } else {
        deadline = Clock::now();
      }
    }
    sink(d);
    ++summary.frames;
    ++summary.per_label[static_cast<std::size_t>(d.label)];
  }
  return summary;
}

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (std::size_t t = 0; t < kOutputs; ++t) {
    for (std::size_t p = 0; p < kOutputs; ++p) n += counts[t][p];
    n += unknown[t];
  }
  return n;
}

ConfusionMatrix confusion_matrix(std::span<const Decision> decisions,
                                 std::span<const CompoundLabel> truths) {
  if (decisions.size() != truths.size()) {
    throw std::invalid_argument("confusion matrix: " + std::to_string(decisions.size()) +
                                " decisions vs " + std::to_string(truths.size()) + " truths");
  }
  ConfusionMatrix cm;
  for (std::size_t k = 0; k < decisions.size(); ++k) {
    if (truths[k] == CompoundLabel::Unknown) {
      throw std::invalid_argument("confusion matrix: truth " + std::to_string(k) + " is Unknown");
    }
    const std::size_t t = label_index(truths[k]);
    if (decisions[k].label == CompoundLabel::Unknown) {
      ++cm.unknown[t];
    } else {
      ++cm.counts[t][label_index(decisions[k].label)];
    }
  }
  return cm;
}

Metrics precision_metrics(const ConfusionMatrix& cm) {
  Metrics m;
  std::size_t trace = 0;
  for (std::size_t c = 0; c < kOutputs; ++c) {
    std::size_t column = 0;
    std::size_t row = cm.unknown[c];
    for (std::size_t k = 0; k < kOutputs; ++k) {
      column += cm.counts[k][c];
      row += cm.counts[c][k];
    }
    const double hit = static_cast<double>(cm.counts[c][c]);
    if (column > 0) m.per_class[c].precision = hit / static_cast<double>(column);
    if (row > 0) m.per_class[c].recall = hit / static_cast<double>(row);
    trace += cm.counts[c][c];
  }
  if (const std::size_t total = cm.total(); total > 0) {
    m.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  }
  return m;
}

}  // namespace tinynose
