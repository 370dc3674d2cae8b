#include "tinynose/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tinynose/rng.hpp"
#include "tinynose/text.hpp"

namespace tinynose {

void SensorChannel::validate() const {
  if (!(supply_voltage > 0.0)) throw std::invalid_argument(name + ": supply voltage must be > 0");
  if (!(load_resistance > 0.0)) throw std::invalid_argument(name + ": load resistance must be > 0");
  if (adc_resolution_bits < 1 || adc_resolution_bits > 16) {
    throw std::invalid_argument(name + ": ADC resolution must be 1..16 bits");
  }
  if (!(adc_reference > 0.0)) throw std::invalid_argument(name + ": ADC reference must be > 0");
}

std::array<SensorChannel, kChannels> default_channels() {
  std::array<SensorChannel, kChannels> out;
  for (std::size_t c = 0; c < kChannels; ++c) out[c].name = std::string(kChannelNames[c]);
  return out;
}

double sensor_resistance(const SensorChannel& channel, double v_rl) {
  if (!(v_rl > 0.0)) {
    throw std::domain_error(channel.name + ": load voltage must be > 0 (division by zero)");
  }
  if (v_rl > channel.supply_voltage) {
    throw std::domain_error(channel.name + ": load voltage exceeds supply (negative resistance)");
  }
  return (channel.supply_voltage - v_rl) / v_rl * channel.load_resistance;
}

double adc_to_voltage(const SensorChannel& channel, std::int64_t raw) {
  if (raw < 0 || raw > static_cast<std::int64_t>(channel.adc_max())) {
    throw std::out_of_range(channel.name + ": ADC count " + std::to_string(raw) +
                            " outside [0, " + std::to_string(channel.adc_max()) + "]");
  }
  return static_cast<double>(raw) * channel.adc_reference / static_cast<double>(channel.adc_max());
}

std::uint32_t voltage_to_adc(const SensorChannel& channel, double volts) {
  const double counts = std::round(volts * channel.adc_max() / channel.adc_reference);
  return static_cast<std::uint32_t>(std::clamp(counts, 0.0, static_cast<double>(channel.adc_max())));
}

bool Normalizer::valid() const {
  for (std::size_t c = 0; c < kChannels; ++c) {
    if (!std::isfinite(per_channel_min[c]) || !std::isfinite(per_channel_max[c])) return false;
    if (!(per_channel_max[c] > per_channel_min[c])) return false;
  }
  return true;
}

Normalizer fit_normalizer(const LabeledDataset& data) {
  if (data.size() < 2) {
    throw std::invalid_argument("normalizer needs at least 2 frames, got " +
                                std::to_string(data.size()));
  }
  Normalizer norm;
  norm.per_channel_min.fill(std::numeric_limits<double>::infinity());
  norm.per_channel_max.fill(-std::numeric_limits<double>::infinity());
  for (const auto& s : data.samples) {
    for (std::size_t c = 0; c < kChannels; ++c) {
      const double v = s.frame.raw[c];
      norm.per_channel_min[c] = std::min(norm.per_channel_min[c], v);
      norm.per_channel_max[c] = std::max(norm.per_channel_max[c], v);
    }
  }
  for (std::size_t c = 0; c < kChannels; ++c) {
    if (!(norm.per_channel_max[c] > norm.per_channel_min[c])) {
      throw std::invalid_argument("channel " + std::string(kChannelNames[c]) +
                                  " is constant; cannot normalize");
    }
  }
  return norm;
}

InputVector normalize(const Normalizer& norm, const SensorFrame& frame) noexcept {
  InputVector in;
  for (std::size_t c = 0; c < kChannels; ++c) {
    const double span = norm.per_channel_max[c] - norm.per_channel_min[c];
    const double v = (static_cast<double>(frame.raw[c]) - norm.per_channel_min[c]) / span;
    in.values[c] = std::clamp(v, 0.0, 1.0);
  }
  return in;
}

// --- acquisition -----------------------------------------------------------

void AcquisitionProtocol::validate() const {
  if (!(warmup_s > 0.0)) throw std::invalid_argument("warmup_s must be > 0");
  if (!(capture_s > 0.0)) throw std::invalid_argument("capture_s must be > 0");
  if (!(purge_s > 0.0)) throw std::invalid_argument("purge_s must be > 0");
  if (sample_period_ms < 1) throw std::invalid_argument("sample_period_ms must be >= 1");
  if (adc_resolution_bits < 1 || adc_resolution_bits > 16) {
    throw std::invalid_argument("adc_bits must be 1..16");
  }
  if (compounds.empty()) throw std::invalid_argument("protocol needs at least one compound");
  const double adc_max = static_cast<double>((1u << adc_resolution_bits) - 1u);
  for (const auto& p : compounds) {
    const std::string who(label_file_name(p.label));
    if (p.label == CompoundLabel::Unknown) throw std::invalid_argument("compound label missing");
    if (!(p.rise_time_constant_s > 0.0)) {
      throw std::invalid_argument(who + ": rise_time_s must be > 0");
    }
    for (std::size_t c = 0; c < kChannels; ++c) {
      if (!(p.per_channel_mean[c] >= 0.0 && p.per_channel_mean[c] <= adc_max)) {
        throw std::invalid_argument(who + ": mean outside ADC range");
      }
      if (!(p.per_channel_stddev[c] >= 0.0) || !std::isfinite(p.per_channel_stddev[c])) {
        throw std::invalid_argument(who + ": stddev must be finite and >= 0");
      }
    }
  }
}

std::size_t AcquisitionProtocol::frames_per_compound() const {
  const auto capture_ms = static_cast<std::uint64_t>(std::llround(capture_s * 1000.0));
  return static_cast<std::size_t>(capture_ms / sample_period_ms);
}

std::vector<CompoundProfile> default_profiles() {
  // Lemon: column means of the seven published lemon rows.
  CompoundProfile lemon{CompoundLabel::Lemon,
                        {1197.0 / 7, 531.0 / 7, 638.0 / 7, 646.0 / 7, 1099.0 / 7},
                        {3, 3, 3, 3, 3},
                        0.1};
  // Synthetic, not measured.
  CompoundProfile banana{CompoundLabel::Banana, {240, 110, 70, 120, 300}, {3, 3, 3, 3, 3}, 0.1};
  CompoundProfile grape{CompoundLabel::Grape, {150, 140, 130, 80, 420}, {3, 3, 3, 3, 3}, 0.1};
  return {lemon, banana, grape};
}

AcquisitionProtocol default_protocol() {
  AcquisitionProtocol p;
  p.compounds = default_profiles();
  return p;
}

LabeledDataset simulate_acquisition(const AcquisitionProtocol& protocol, std::uint64_t seed) {
  protocol.validate();
  Rng rng(derive_seed(seed, Stream::Noise));
  const double adc_max = static_cast<double>((1u << protocol.adc_resolution_bits) - 1u);
  const auto warmup_ms = static_cast<std::uint64_t>(std::llround(protocol.warmup_s * 1000.0));
  const auto cycle_ms = static_cast<std::uint64_t>(
      std::llround((protocol.capture_s + protocol.purge_s) * 1000.0));
  const std::size_t per_compound = protocol.frames_per_compound();

  LabeledDataset out;
  out.samples.reserve(per_compound * protocol.compounds.size());
  for (std::size_t w = 0; w < protocol.compounds.size(); ++w) {
    const CompoundProfile& profile = protocol.compounds[w];
    const std::uint64_t window_start = warmup_ms + w * cycle_ms;
    for (std::size_t k = 0; k < per_compound; ++k) {
      const std::uint64_t since_close = (k + 1) * std::uint64_t{protocol.sample_period_ms};
      const double lag = std::exp(-(static_cast<double>(since_close) / 1000.0) /
                                  profile.rise_time_constant_s);
      LabeledFrame lf;
      lf.label = profile.label;
      lf.frame.timestamp_ms = window_start + since_close;
      for (std::size_t c = 0; c < kChannels; ++c) {
        const double target = profile.per_channel_mean[c];
        const double level = target + (protocol.baseline[c] - target) * lag;
        const double noise =
            profile.per_channel_stddev[c] > 0.0 ? profile.per_channel_stddev[c] * rng.normal() : 0.0;
        const double v = std::clamp(std::round(level + noise), 0.0, adc_max);
        lf.frame.raw[c] = static_cast<std::uint16_t>(v);
      }
      out.samples.push_back(lf);
    }
  }
  return out;
}

// --- protocol text form ----------------------------------------------------

namespace {

Vec5 parse_vec5(std::string_view value, std::size_t line, std::string_view key) {
  const auto tokens = text::split_whitespace(value);
  if (tokens.size() != kChannels) {
    throw ParseError(line, "key '" + std::string(key) + "' needs 5 values, got " +
                               std::to_string(tokens.size()));
  }
  Vec5 out{};
  for (std::size_t c = 0; c < kChannels; ++c) {
    const auto v = text::parse_real(tokens[c]);
    if (!v) throw ParseError(line, "key '" + std::string(key) + "': bad number '" +
                                       std::string(tokens[c]) + "'");
    out[c] = *v;
  }
  return out;
}

double parse_scalar(std::string_view value, std::size_t line, std::string_view key) {
  const auto v = text::parse_real(value);
  if (!v) throw ParseError(line, "key '" + std::string(key) + "': bad number '" +
                                     std::string(value) + "'");
  return *v;
}

std::string join_vec(const Vec5& v) {
  std::string s;
  for (std::size_t c = 0; c < kChannels; ++c) {
    if (c) s += ' ';
    s += text::format_real(v[c]);
  }
  return s;
}

}  // namespace

AcquisitionProtocol parse_protocol(std::string_view source) {
  AcquisitionProtocol p;
  enum class Section { None, Protocol, Compound } section = Section::None;
  struct Pending {
    CompoundProfile profile;
    std::size_t line = 0;
    bool has_mean = false;
    bool has_stddev = false;
  };
  std::vector<Pending> pending;

  const auto all = text::lines(source);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = all[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      const auto words = text::split_whitespace(line.substr(1, line.size() - 2));
      if (words.size() == 1 && words[0] == "protocol") {
        section = Section::Protocol;
      } else if (words.size() == 2 && words[0] == "compound") {
        const auto label = parse_file_label(words[1]);
        if (!label) {
          throw ParseError(line_no, "unknown compound '" + std::string(words[1]) +
                                        "' (expected lemon, banana or grape)");
        }
        section = Section::Compound;
        pending.push_back(Pending{CompoundProfile{*label, {}, {}, 0.1}, line_no});
      } else {
        throw ParseError(line_no, "unknown section '" + std::string(line) + "'");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string_view key = text::trim(line.substr(0, eq));
    const std::string_view value = text::trim(line.substr(eq + 1));

    if (section == Section::Protocol) {
      if (key == "warmup_s") {
        p.warmup_s = parse_scalar(value, line_no, key);
      } else if (key == "capture_s") {
        p.capture_s = parse_scalar(value, line_no, key);
      } else if (key == "purge_s") {
        p.purge_s = parse_scalar(value, line_no, key);
      } else if (key == "sample_period_ms") {
        const auto v = text::parse_int(value);
        if (!v || *v < 1 || *v > 0xffffffffLL) {
          throw ParseError(line_no, "key 'sample_period_ms' must be a positive integer");
        }
        p.sample_period_ms = static_cast<std::uint32_t>(*v);
      } else if (key == "adc_bits") {
        const auto v = text::parse_int(value);
        if (!v || *v < 1 || *v > 16) throw ParseError(line_no, "key 'adc_bits' must be 1..16");
        p.adc_resolution_bits = static_cast<int>(*v);
      } else if (key == "baseline") {
        p.baseline = parse_vec5(value, line_no, key);
      } else {
        throw ParseError(line_no, "unknown key '" + std::string(key) + "' in [protocol]");
      }
    } else if (section == Section::Compound) {
      Pending& cur = pending.back();
      if (key == "mean") {
        cur.profile.per_channel_mean = parse_vec5(value, line_no, key);
        cur.has_mean = true;
      } else if (key == "stddev") {
        cur.profile.per_channel_stddev = parse_vec5(value, line_no, key);
        cur.has_stddev = true;
      } else if (key == "rise_time_s") {
        cur.profile.rise_time_constant_s = parse_scalar(value, line_no, key);
      } else {
        throw ParseError(line_no, "unknown key '" + std::string(key) + "' in [compound]");
      }
    } else {
      throw ParseError(line_no, "key '" + std::string(key) + "' outside of any section");
    }
  }

  for (const auto& c : pending) {
    if (!c.has_mean) throw ParseError(c.line, "compound section is missing key 'mean'");
    if (!c.has_stddev) throw ParseError(c.line, "compound section is missing key 'stddev'");
    p.compounds.push_back(c.profile);
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(all.size(), e.what());
  }
  return p;
}

std::string format_protocol(const AcquisitionProtocol& p) {
  std::ostringstream os;
  os << "[protocol]\n"
     << "warmup_s = " << text::format_real(p.warmup_s) << '\n'
     << "capture_s = " << text::format_real(p.capture_s) << '\n'
     << "purge_s = " << text::format_real(p.purge_s) << '\n'
     << "sample_period_ms = " << p.sample_period_ms << '\n'
     << "adc_bits = " << p.adc_resolution_bits << '\n'
     << "baseline = " << join_vec(p.baseline) << '\n';
  for (const auto& c : p.compounds) {
    os << "\n[compound " << label_file_name(c.label) << "]\n"
       << "mean = " << join_vec(c.per_channel_mean) << '\n'
       << "stddev = " << join_vec(c.per_channel_stddev) << '\n'
       << "rise_time_s = " << text::format_real(c.rise_time_constant_s) << '\n';
  }
  return os.str();
}

}  // namespace tinynose
