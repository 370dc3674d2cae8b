#include "tinynose/types.hpp"

namespace tinynose {

std::size_t label_index(CompoundLabel label) {
  switch (label) {
    case CompoundLabel::Lemon: return 0;
    case CompoundLabel::Banana: return 1;
    case CompoundLabel::Grape: return 2;
    case CompoundLabel::Unknown: break;
  }
  throw std::invalid_argument("Unknown label has no class index");
}

CompoundLabel label_from_index(std::size_t index) {
  if (index >= kOutputs) {
    throw std::out_of_range("class index " + std::to_string(index) + " out of range");
  }
  return kClasses[index];
}

std::string_view label_name(CompoundLabel label) {
  switch (label) {
    case CompoundLabel::Lemon: return "Lemon";
    case CompoundLabel::Banana: return "Banana";
    case CompoundLabel::Grape: return "Grape";
    case CompoundLabel::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view label_file_name(CompoundLabel label) {
  switch (label) {
    case CompoundLabel::Lemon: return "lemon";
    case CompoundLabel::Banana: return "banana";
    case CompoundLabel::Grape: return "grape";
    case CompoundLabel::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<CompoundLabel> parse_file_label(std::string_view text) {
  for (CompoundLabel c : kClasses) {
    if (text == label_file_name(c)) return c;
  }
  return std::nullopt;
}

std::array<std::size_t, kOutputs> LabeledDataset::class_counts() const {
  std::array<std::size_t, kOutputs> counts{};
  for (const auto& s : samples) {
    if (s.label != CompoundLabel::Unknown) ++counts[label_index(s.label)];
  }
  return counts;
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace tinynose
