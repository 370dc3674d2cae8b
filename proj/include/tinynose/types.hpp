#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tinynose {

inline constexpr std::size_t kInputs = 5;
inline constexpr std::size_t kHidden = 5;
inline constexpr std::size_t kOutputs = 3;
inline constexpr std::size_t kChannels = kInputs;

using Vec5 = std::array<double, 5>;
using Vec3 = std::array<double, 3>;
using Mat5x5 = std::array<Vec5, 5>;
using Mat3x5 = std::array<Vec5, 3>;

// Canonical channel order, matching the column order of the recorded lemon table.
inline constexpr std::array<std::string_view, kChannels> kChannelNames = {
    "MQ-2", "MQ-135", "TGS2610", "TGS2611", "MQ-3"};

enum class CompoundLabel : std::uint8_t { Lemon = 0, Banana = 1, Grape = 2, Unknown = 3 };

inline constexpr std::array<CompoundLabel, kOutputs> kClasses = {
    CompoundLabel::Lemon, CompoundLabel::Banana, CompoundLabel::Grape};

/// One-hot index of a class label. Unknown has no index and throws.
std::size_t label_index(CompoundLabel label);
CompoundLabel label_from_index(std::size_t index);

/// "Lemon", "Banana", "Grape", "Unknown".
std::string_view label_name(CompoundLabel label);
/// Lower-case form used in dataset files.
std::string_view label_file_name(CompoundLabel label);
/// Strict, case-sensitive inverse of label_file_name (Unknown is not accepted).
std::optional<CompoundLabel> parse_file_label(std::string_view text);

struct SensorFrame {
  std::uint64_t timestamp_ms = 0;
  std::array<std::uint16_t, kChannels> raw{};

  friend bool operator==(const SensorFrame&, const SensorFrame&) = default;
};

struct LabeledFrame {
  SensorFrame frame;
  CompoundLabel label = CompoundLabel::Lemon;

  friend bool operator==(const LabeledFrame&, const LabeledFrame&) = default;
};

struct LabeledDataset {
  std::vector<LabeledFrame> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  /// Per-class sample counts indexed by one-hot index.
  std::array<std::size_t, kOutputs> class_counts() const;

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

/// Malformed text input; carries the 1-based line number it was detected on.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tinynose
