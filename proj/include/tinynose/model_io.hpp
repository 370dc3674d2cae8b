#pragma once

// Text persistence.
//
// Model file (`.tnn`), one section per line, reals in shortest round-trip form:
//
//   TINYNOSE 1
//   DIMS 5 5 3
//   NORM <5 channel minima> <5 channel maxima>
//   HLW
//   <5 reals>          x5, row j = hidden unit j
//   HLB <5 reals>
//   OLW
//   <5 reals>          x3, row i = output unit i
//   OLB <3 reals>
//
// Dataset CSV:
//
//   timestamp_ms,mq2,mq135,tgs2610,tgs2611,mq3,label
//   0,138,64,68,90,111,lemon

#include <string>
#include <string_view>

#include "tinynose/net.hpp"
#include "tinynose/sensing.hpp"
#include "tinynose/types.hpp"

namespace tinynose {

inline constexpr std::string_view kModelMagic = "TINYNOSE";
inline constexpr int kModelVersion = 1;
inline constexpr std::string_view kDatasetHeader =
    "timestamp_ms,mq2,mq135,tgs2610,tgs2611,mq3,label";

struct ModelFile {
  Normalizer normalizer;
  NetworkParams params;

  friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

std::string emit_model(const ModelFile& model);

/// Strict inverse of emit_model. Throws ParseError naming the line and what was
/// expected there.
ModelFile parse_model(std::string_view text);

/// Rejects counts outside [0, 2^adc_bits - 1], unknown or mis-cased labels and
/// decreasing timestamps with a ParseError for the offending line.
LabeledDataset load_dataset_csv(std::string_view text, int adc_bits = 10);
std::string write_dataset_csv(const LabeledDataset& data);

/// Inputs used for the verification vectors in the exported firmware source.
std::array<InputVector, 3> verification_inputs();

/// Self-contained C translation unit: float parameter tables, the normalizer,
/// a stable logsig, a forward function, and a comment block of verification
/// vectors computed with the double-precision forward pass.
std::string emit_embedded_source(const ModelFile& model);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace tinynose
