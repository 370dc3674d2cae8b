#include "tinynose/model_io.hpp"

#include <fstream>
#include <span>
#include <sstream>

#include "tinynose/text.hpp"

namespace tinynose {

namespace {

template <std::size_t N>
void append_reals(std::string& out, const std::array<double, N>& values) {
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out += ' ';
    out += text::format_real(values[i]);
  }
}

// Cursor over the model file's lines with 1-based numbering for diagnostics.
class LineReader {
 public:
  explicit LineReader(std::string_view source) : lines_(text::lines(source)) {}

  std::size_t line_no() const { return next_; }

  std::vector<std::string_view> next(std::string_view expecting) {
    if (next_ >= lines_.size()) {
      throw ParseError(next_ + 1, "unexpected end of file, expected " + std::string(expecting));
    }
    std::string_view line = lines_[next_++];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return text::split_whitespace(line);
  }

  void expect_end() const {
    if (next_ < lines_.size()) {
      throw ParseError(next_ + 1, "unexpected content after OLB");
    }
  }

 private:
  std::vector<std::string_view> lines_;
  std::size_t next_ = 0;
};

template <std::size_t N>
std::array<double, N> parse_reals(std::span<const std::string_view> tokens, std::size_t line,
                                  std::string_view section) {
  if (tokens.size() != N) {
    throw ParseError(line, std::string(section) + " expects " + std::to_string(N) +
                               " values, got " + std::to_string(tokens.size()));
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    const auto v = text::parse_real(tokens[i]);
    if (!v) {
      throw ParseError(line, std::string(section) + ": '" + std::string(tokens[i]) +
                                 "' is not a finite real");
    }
    out[i] = *v;
  }
  return out;
}

// "KEY v1 ... vN" on one line.
template <std::size_t N>
std::array<double, N> parse_keyed(LineReader& in, std::string_view key) {
  const auto tokens = in.next(key);
  const std::size_t line = in.line_no();
  if (tokens.empty() || tokens[0] != key) {
    throw ParseError(line, "expected section " + std::string(key));
  }
  return parse_reals<N>(std::span(tokens).subspan(1), line, key);
}

// "KEY" followed by R lines of C reals.
template <std::size_t R, std::size_t C>
std::array<std::array<double, C>, R> parse_matrix(LineReader& in, std::string_view key) {
  const auto header = in.next(key);
  if (header.size() != 1 || header[0] != key) {
    throw ParseError(in.line_no(), "expected section header '" + std::string(key) + "' alone");
  }
  std::array<std::array<double, C>, R> out{};
  for (std::size_t r = 0; r < R; ++r) {
    const std::string row_name = std::string(key) + " row " + std::to_string(r + 1);
    const auto tokens = in.next(row_name);
    out[r] = parse_reals<C>(tokens, in.line_no(), row_name);
  }
  return out;
}

std::string c_float(double v) {
  std::string s = text::format_significant(v, 9);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s + "f";
}

template <std::size_t N>
std::string c_float_list(const std::array<double, N>& values) {
  std::string s = "{ ";
  for (std::size_t i = 0; i < N; ++i) {
    if (i) s += ", ";
    s += c_float(values[i]);
  }
  return s + " }";
}

template <std::size_t N>
std::string plain_list(const std::array<double, N>& values) {
  std::string s = "{ ";
  for (std::size_t i = 0; i < N; ++i) {
    if (i) s += ", ";
    s += text::format_significant(values[i], 9);
  }
  return s + " }";
}

}  // namespace

std::string emit_model(const ModelFile& model) {
  std::string out;
  out += std::string(kModelMagic) + ' ' + std::to_string(kModelVersion) + '\n';
  out += "DIMS 5 5 3\n";
  out += "NORM ";
  append_reals(out, model.normalizer.per_channel_min);
  out += ' ';
  append_reals(out, model.normalizer.per_channel_max);
  out += "\nHLW\n";
  for (const auto& row : model.params.hidden_weights) {
    append_reals(out, row);
    out += '\n';
  }
  out += "HLB ";
  append_reals(out, model.params.hidden_bias);
  out += "\nOLW\n";
  for (const auto& row : model.params.output_weights) {
    append_reals(out, row);
    out += '\n';
  }
  out += "OLB ";
  append_reals(out, model.params.output_bias);
  out += '\n';
  return out;
}

ModelFile parse_model(std::string_view source) {
  LineReader in(source);
  ModelFile model;

  {
    const auto t = in.next("magic");
    if (t.size() != 2 || t[0] != kModelMagic) {
      throw ParseError(in.line_no(), "expected magic 'TINYNOSE 1'");
    }
    if (t[1] != std::to_string(kModelVersion)) {
      throw ParseError(in.line_no(), "unsupported version '" + std::string(t[1]) + "', expected 1");
    }
  }
  {
    const auto t = in.next("DIMS");
    if (t.size() != 4 || t[0] != "DIMS" || t[1] != "5" || t[2] != "5" || t[3] != "3") {
      throw ParseError(in.line_no(), "dimension error: expected 'DIMS 5 5 3'");
    }
  }
  {
    const auto norm = parse_keyed<10>(in, "NORM");
    for (std::size_t c = 0; c < kChannels; ++c) {
      model.normalizer.per_channel_min[c] = norm[c];
      model.normalizer.per_channel_max[c] = norm[c + kChannels];
    }
    if (!model.normalizer.valid()) {
      throw ParseError(in.line_no(), "NORM: every channel maximum must exceed its minimum");
    }
  }
  model.params.hidden_weights = parse_matrix<kHidden, kInputs>(in, "HLW");
  model.params.hidden_bias = parse_keyed<kHidden>(in, "HLB");
  model.params.output_weights = parse_matrix<kOutputs, kHidden>(in, "OLW");
  model.params.output_bias = parse_keyed<kOutputs>(in, "OLB");
  in.expect_end();
  return model;
}

LabeledDataset load_dataset_csv(std::string_view source, int adc_bits) {
  if (adc_bits < 1 || adc_bits > 16) throw std::invalid_argument("adc_bits must be 1..16");
  const std::int64_t adc_max = (std::int64_t{1} << adc_bits) - 1;
  const auto all = text::lines(source);
  if (all.empty() || all[0] != kDatasetHeader) {
    throw ParseError(1, "expected header '" + std::string(kDatasetHeader) + "'");
  }
  LabeledDataset data;
  data.samples.reserve(all.size() - 1);
  for (std::size_t i = 1; i < all.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto fields = text::split(all[i], ',');
    if (fields.size() != 7) {
      throw ParseError(line_no, "expected 7 comma-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    LabeledFrame lf;
    const auto ts = text::parse_int(fields[0]);
    if (!ts || *ts < 0) {
      throw ParseError(line_no, "timestamp_ms '" + std::string(fields[0]) +
                                    "' is not a non-negative integer");
    }
    lf.frame.timestamp_ms = static_cast<std::uint64_t>(*ts);
    if (!data.samples.empty() && lf.frame.timestamp_ms < data.samples.back().frame.timestamp_ms) {
      throw ParseError(line_no, "timestamp " + std::string(fields[0]) +
                                    " is earlier than the previous frame");
    }
    for (std::size_t c = 0; c < kChannels; ++c) {
      const auto v = text::parse_int(fields[c + 1]);
      if (!v || *v < 0 || *v > adc_max) {
        throw ParseError(line_no, std::string(kChannelNames[c]) + " count '" +
                                      std::string(fields[c + 1]) + "' outside [0, " +
                                      std::to_string(adc_max) + "]");
      }
      lf.frame.raw[c] = static_cast<std::uint16_t>(*v);
    }
    const auto label = parse_file_label(fields[6]);
    if (!label) {
      throw ParseError(line_no, "unknown label '" + std::string(fields[6]) +
                                    "' (expected lemon, banana or grape)");
    }
    lf.label = *label;
    data.samples.push_back(lf);
  }
  return data;
}

std::string write_dataset_csv(const LabeledDataset& data) {
  std::string out(kDatasetHeader);
  out += '\n';
  for (const auto& lf : data.samples) {
    out += std::to_string(lf.frame.timestamp_ms);
    for (auto v : lf.frame.raw) {
      out += ',';
      out += std::to_string(v);
    }
    out += ',';
    out += label_file_name(lf.label);
    out += '\n';
  }
  return out;
}

std::array<InputVector, 3> verification_inputs() {
  return {InputVector{{0.0, 0.0, 0.0, 0.0, 0.0}}, InputVector{{1.0, 1.0, 1.0, 1.0, 1.0}},
          InputVector{{0.25, 0.5, 0.75, 1.0, 0.0}}};
}

std::string emit_embedded_source(const ModelFile& model) {
  const NetworkParams& p = model.params;
  std::ostringstream os;
  os << "/* tinynose classifier, generated from a trained 5-5-3 model.\n"
        " *\n"
        " * Channel order: MQ-2, MQ-135, TGS2610, TGS2611, MQ-3.\n"
        " * Classes: 0 = lemon, 1 = banana, 2 = grape.\n"
        " *\n"
        " * Verification vectors (normalized input -> expected output):\n";
  for (const InputVector& in : verification_inputs()) {
    const Vec3 out = forward(p, in).output_out;
    os << " *   in  = " << plain_list(in.values) << "\n"
       << " *   out = " << plain_list(out) << "\n";
  }
  os << " */\n\n"
        "#include <math.h>\n\n";

  os << "static const float TN_NORM_MIN[5] = " << c_float_list(model.normalizer.per_channel_min)
     << ";\n";
  os << "static const float TN_NORM_MAX[5] = " << c_float_list(model.normalizer.per_channel_max)
     << ";\n\n";
  os << "static const float TN_HLW[5][5] = {\n";
  for (const auto& row : p.hidden_weights) os << "  " << c_float_list(row) << ",\n";
  os << "};\n";
  os << "static const float TN_HLB[5] = " << c_float_list(p.hidden_bias) << ";\n";
  os << "static const float TN_OLW[3][5] = {\n";
  for (const auto& row : p.output_weights) os << "  " << c_float_list(row) << ",\n";
  os << "};\n";
  os << "static const float TN_OLB[3] = " << c_float_list(p.output_bias) << ";\n\n";

  os << R"(static float tn_logsig(float n) {
  if (n >= 0.0f) {
    return 1.0f / (1.0f + expf(-n));
  }
  float e = expf(n);
  return e / (1.0f + e);
}

void tn_normalize(const int raw[5], float out[5]) {
  for (int c = 0; c < 5; ++c) {
    float v = ((float)raw[c] - TN_NORM_MIN[c]) / (TN_NORM_MAX[c] - TN_NORM_MIN[c]);
    out[c] = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
  }
}

void tn_forward(const float in[5], float out[3]) {
  float hidden[5];
  for (int j = 0; j < 5; ++j) {
    float n = TN_HLB[j];
    for (int k = 0; k < 5; ++k) n += TN_HLW[j][k] * in[k];
    hidden[j] = tn_logsig(n);
  }
  for (int i = 0; i < 3; ++i) {
    float n = TN_OLB[i];
    for (int j = 0; j < 5; ++j) n += TN_OLW[i][j] * hidden[j];
    out[i] = tn_logsig(n);
  }
}

int tn_classify(const int raw[5], float scores[3]) {
  float in[5];
  tn_normalize(raw, in);
  tn_forward(in, scores);
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}
)";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace tinynose
