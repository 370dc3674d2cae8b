#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "tinynose/net.hpp"
#include "tinynose/types.hpp"

namespace tinynose {

/// Electrical description of one gas sensor in its load-resistor divider.
struct SensorChannel {
  std::string name;
  double supply_voltage = 5.0;      // V_C
  double load_resistance = 10000.0; // R_L, ohms
  int adc_resolution_bits = 10;
  double adc_reference = 5.0;

  /// Throws std::invalid_argument when the channel description is unusable.
  void validate() const;
  std::uint32_t adc_max() const { return (1u << adc_resolution_bits) - 1u; }
};

/// Arduino Uno defaults (10-bit, 5 V) for each canonical channel.
std::array<SensorChannel, kChannels> default_channels();

/// Sensor resistance from the voltage measured across the load resistor:
/// R_s = (V_C - V_RL) / V_RL * R_L.
/// Throws std::domain_error for v_rl <= 0 or v_rl > V_C.
double sensor_resistance(const SensorChannel& channel, double v_rl);

/// raw * ref / (2^bits - 1). Throws std::out_of_range for counts above full scale.
double adc_to_voltage(const SensorChannel& channel, std::int64_t raw);
/// Nearest ADC count for a voltage, clamped to the converter range.
std::uint32_t voltage_to_adc(const SensorChannel& channel, double volts);

struct Normalizer {
  Vec5 per_channel_min{};
  Vec5 per_channel_max{};

  /// True when every channel has max > min and all bounds are finite.
  bool valid() const;

  friend bool operator==(const Normalizer&, const Normalizer&) = default;
};

/// Per-channel min/max over all frames. Needs at least two frames; a constant
/// channel is rejected with a message naming it.
Normalizer fit_normalizer(const LabeledDataset& data);

/// (raw - min) / (max - min) per channel, clamped to [0, 1].
InputVector normalize(const Normalizer& norm, const SensorFrame& frame) noexcept;

/// Synthetic response of one compound: readings approach per_channel_mean with
/// a first-order lag after the chamber closes, plus Gaussian noise.
struct CompoundProfile {
  CompoundLabel label = CompoundLabel::Lemon;
  Vec5 per_channel_mean{};
  Vec5 per_channel_stddev{};
  double rise_time_constant_s = 0.1;
};

/// Warm up, then for each compound: close chamber, capture, open, purge.
struct AcquisitionProtocol {
  double warmup_s = 600.0;
  double capture_s = 300.0;
  double purge_s = 300.0;
  std::uint32_t sample_period_ms = 500;
  int adc_resolution_bits = 10;
  /// Clean-air reading the chamber returns to during purge.
  Vec5 baseline{120.0, 60.0, 60.0, 85.0, 100.0};
  std::vector<CompoundProfile> compounds;

  void validate() const;
  /// floor(capture_s * 1000 / sample_period_ms).
  std::size_t frames_per_compound() const;
};

/// Lemon means are the column averages of the published lemon readings; the
/// banana and grape profiles are made-up but well separated.
std::vector<CompoundProfile> default_profiles();
AcquisitionProtocol default_protocol();

/// Frames exist only inside capture windows. Capture window c opens at
/// warmup + c * (capture + purge); frame k of that window is taken
/// (k + 1) * sample_period_ms after it opens.
LabeledDataset simulate_acquisition(const AcquisitionProtocol& protocol, std::uint64_t seed);

/// Reads a protocol from its INI-style text form:
///
///   [protocol]
///   warmup_s = 600
///   capture_s = 300
///   purge_s = 300
///   sample_period_ms = 500
///   adc_bits = 10
///   baseline = 120 60 60 85 100
///
///   [compound lemon]
///   mean = 171 75.857 91.143 92.286 157
///   stddev = 3 3 3 3 3
///   rise_time_s = 0.1
///
/// '#' starts a comment. Every [protocol] key is optional; each compound needs
/// mean and stddev. Errors are ParseError naming the line and the key.
AcquisitionProtocol parse_protocol(std::string_view text);
std::string format_protocol(const AcquisitionProtocol& protocol);

}  // namespace tinynose
