#pragma once

// Streaming classification: frame -> normalize -> forward -> label.

#include <array>
#include <chrono>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "tinynose/net.hpp"
#include "tinynose/sensing.hpp"
#include "tinynose/types.hpp"

namespace tinynose {

struct Decision {
  CompoundLabel label = CompoundLabel::Unknown;
  Vec3 scores{};
  std::uint64_t timestamp_ms = 0;
};

/// Argmax over scores with lowest-index tie-break; Unknown when the winning
/// score is below threshold. threshold 0 never rejects.
CompoundLabel decide(const Vec3& scores, double threshold) noexcept;

Decision classify_frame(const NetworkParams& params, const Normalizer& norm,
                        const SensorFrame& frame, double threshold = 0.0) noexcept;

/// `timestamp_ms,label,score0,score1,score2` with scores at 9 significant digits.
std::string format_decision(const Decision& d);

enum class Pacing { SimulatedTime, RealTime };

struct StreamOptions {
  double threshold = 0.0;
  std::uint32_t sample_period_ms = 500;
  Pacing pacing = Pacing::SimulatedTime;
};

struct StreamSummary {
  std::size_t frames = 0;
  std::array<std::size_t, 4> per_label{};  // Lemon, Banana, Grape, Unknown

  std::size_t count(CompoundLabel label) const { return per_label[static_cast<std::size_t>(label)]; }
};

/// Pulls the next frame; std::nullopt ends the stream.
using FrameSource = std::function<std::optional<SensorFrame>()>;
using DecisionSink = std::function<void(const Decision&)>;

FrameSource frames_from(std::span<const SensorFrame> frames);

/// Consumes every frame in order, emitting one decision each. Decisions for the
/// frames before an out-of-order timestamp are emitted; then std::runtime_error
/// names the offending frame. RealTime pacing sleeps so successive emissions are
/// sample_period_ms apart.
StreamSummary run_stream(const NetworkParams& params, const Normalizer& norm,
                         const FrameSource& source, const DecisionSink& sink,
                         const StreamOptions& options = {});

struct ConfusionMatrix {
  std::array<std::array<std::size_t, kOutputs>, kOutputs> counts{};  // [truth][prediction]
  std::array<std::size_t, kOutputs> unknown{};                       // per truth class

  std::size_t total() const;
};

/// Throws std::invalid_argument on length mismatch or an Unknown truth label.
ConfusionMatrix confusion_matrix(std::span<const Decision> decisions,
                                 std::span<const CompoundLabel> truths);

struct ClassMetrics {
  std::optional<double> precision;  // nullopt when nothing was predicted as this class
  std::optional<double> recall;     // nullopt when the class never occurs
};

struct Metrics {
  std::array<ClassMetrics, kOutputs> per_class;
  std::optional<double> accuracy;  // trace / total, nullopt when empty
};

Metrics precision_metrics(const ConfusionMatrix& cm);

}  // namespace tinynose
