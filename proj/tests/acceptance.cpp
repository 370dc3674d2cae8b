// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <regex>
#include <sstream>
#include <string>

#include "support/oracle.hpp"
#include "tinynose/model_io.hpp"
#include "tinynose/pipeline.hpp"
#include "tinynose/text.hpp"
#include "tinynose/training.hpp"

using namespace tinynose;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

std::string data_path(const char* name) { return std::string(TINYNOSE_DATA_DIR) + "/" + name; }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome golden_forward() {
  const std::string text = read_file(data_path("published_model.tnn"));
  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) {
    if (tok.find('.') != std::string::npos) tokens.push_back(tok);
  }
  if (tokens != oracle::published_tokens()) return {false, "model file tokens differ from the printed values"};

  const ModelFile model = parse_model(text);
  const auto net = oracle::published_dense();
  oracle::Generator gen(20);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const InputVector x = gen.input();
    const auto want = oracle::forward(net, {x.values[0], x.values[1], x.values[2], x.values[3], x.values[4]});
    const Vec3 got = forward(model.params, x).output_out;
    for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, oracle::relative_error(got[i], want[i]));
  }
  return {worst <= 1e-12, "max relative error " + sci(worst) + " over 20 inputs"};
}

Outcome gradient_check() {
  oracle::Generator gen(77);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const NetworkParams p = gen.params(2.0);
    const InputVector x = gen.input();
    const TargetVector t(kClasses[gen.index(3)]);
    std::vector<double> a, n;
    analytic_gradient(p, x, t).for_each_scalar([&](double v) { a.push_back(v); });
    finite_difference_gradient(p, x, t, 1e-5).for_each_scalar([&](double v) { n.push_back(v); });
    for (std::size_t i = 0; i < a.size(); ++i) {
      // Components that vanish to within differencing noise are compared absolutely.
      const double scale = std::max({std::abs(a[i]), std::abs(n[i]), 1e-6});
      worst = std::max(worst, std::abs(a[i] - n[i]) / scale);
    }
  }
  return {worst < 1e-4, "max relative error " + sci(worst) + " over 50 instances"};
}

Outcome end_to_end() {
  const AcquisitionProtocol protocol = default_protocol();
  // Separation: some channel differs by at least 6 sigma for every pair of compounds.
  for (std::size_t a = 0; a < protocol.compounds.size(); ++a) {
    for (std::size_t b = a + 1; b < protocol.compounds.size(); ++b) {
      double best = 0.0;
      for (std::size_t c = 0; c < kChannels; ++c) {
        const auto& pa = protocol.compounds[a];
        const auto& pb = protocol.compounds[b];
        const double sigma = std::max(pa.per_channel_stddev[c], pb.per_channel_stddev[c]);
        best = std::max(best, std::abs(pa.per_channel_mean[c] - pb.per_channel_mean[c]) / sigma);
      }
      if (best < 6.0) return {false, "profiles are not 6-sigma separated"};
    }
  }

  const TrainConfig config;
  const TrainReport r = train(simulate_acquisition(protocol, 1), config);
  const double final_mse = r.epoch_mse.empty() ? INFINITY : r.epoch_mse.back();
  std::vector<Decision> d;
  std::vector<CompoundLabel> t;
  for (const auto& lf : r.split.test.samples) {
    d.push_back(classify_frame(r.final_params, r.normalizer, lf.frame));
    t.push_back(lf.label);
  }
  const Metrics m = precision_metrics(confusion_matrix(d, t));
  double min_precision = 1.0;
  for (const auto& c : m.per_class) min_precision = std::min(min_precision, c.precision.value_or(0.0));
  const bool ok = r.stop_reason == StopReason::TargetReached && final_mse <= 1e-4 &&
                  r.epochs_run <= 5000 && m.accuracy == 1.0 && min_precision >= 0.99;
  return {ok, std::string(stop_reason_name(r.stop_reason)) + " after " + std::to_string(r.epochs_run) +
                  " epochs, mse " + sci(final_mse) + ", test accuracy " + sci(m.accuracy.value_or(0)) +
                  ", min precision " + sci(min_precision)};
}

Outcome class_balance() {
  const std::array<std::size_t, 3> counts{689, 728, 692};
  const double lemon = balanced_alpha(counts, CompoundLabel::Lemon);
  const double banana = balanced_alpha(counts, CompoundLabel::Banana);
  const double grape = balanced_alpha(counts, CompoundLabel::Grape);
  const bool ok = banana == 1.0 && lemon > 1.0 && grape > 1.0 &&
                  std::abs(lemon - 1.0279123375000933) < 1e-9 && std::abs(grape - 1.0256817836869695) < 1e-9;
  return {ok, "alpha = " + text::format_real(lemon) + ", " + text::format_real(banana) + ", " +
                  text::format_real(grape)};
}

Outcome sensor_math() {
  const SensorChannel ch = default_channels()[0];
  if (sensor_resistance(ch, ch.supply_voltage / 2) != ch.load_resistance) {
    return {false, "midpoint does not give R_L"};
  }
  double previous = INFINITY;
  for (int k = 1; k <= 1000; ++k) {
    const double r = sensor_resistance(ch, ch.supply_voltage * k / 1000.0);
    if (!(r < previous)) return {false, "not strictly decreasing at grid point " + std::to_string(k)};
    previous = r;
  }
  return {true, "midpoint exact, strictly monotone on 1000 points"};
}

Outcome round_trips() {
  oracle::Generator gen(606);
  for (int k = 0; k < 1000; ++k) {
    ModelFile m;
    m.params = gen.params(gen.uniform(1e-6, 50.0));
    for (std::size_t c = 0; c < kChannels; ++c) {
      m.normalizer.per_channel_min[c] = gen.uniform(-1e3, 1e3);
      m.normalizer.per_channel_max[c] = m.normalizer.per_channel_min[c] + gen.uniform(1e-3, 1e3);
    }
    const ModelFile back = parse_model(emit_model(m));
    if (!(back.params == m.params && back.normalizer == m.normalizer)) {
      return {false, "model " + std::to_string(k) + " changed on round trip"};
    }
  }
  const LabeledDataset sim = simulate_acquisition(default_protocol(), 3);
  if (!(load_dataset_csv(write_dataset_csv(sim)) == sim)) return {false, "dataset CSV changed on round trip"};

  const std::string table = read_file(data_path("lemon_readings.csv"));
  const LabeledDataset lemon = load_dataset_csv(table);
  const std::array<std::array<std::uint16_t, 5>, 7> rows{{{138, 64, 68, 90, 111},
                                                           {139, 64, 69, 90, 111},
                                                           {167, 79, 93, 95, 123},
                                                           {167, 77, 91, 95, 124},
                                                           {168, 78, 91, 96, 129},
                                                           {208, 84, 112, 90, 249},
                                                           {210, 85, 114, 90, 252}}};
  if (lemon.size() != 7) return {false, "lemon table has " + std::to_string(lemon.size()) + " rows"};
  for (std::size_t i = 0; i < 7; ++i) {
    if (lemon.samples[i].frame.raw != rows[i] || lemon.samples[i].label != CompoundLabel::Lemon) {
      return {false, "lemon row " + std::to_string(i + 1) + " differs"};
    }
  }
  if (write_dataset_csv(lemon) != table) return {false, "lemon table does not re-serialize identically"};
  return {true, "1000 models, 1800-frame dataset, 7 lemon rows"};
}

Outcome stream_conservation() {
  const LabeledDataset data = simulate_acquisition(default_protocol(), 1);
  const ModelFile model = parse_model(read_file(data_path("published_model.tnn")));
  std::vector<SensorFrame> frames;
  for (const auto& lf : data.samples) frames.push_back(lf.frame);
  std::vector<Decision> out;
  run_stream(model.params, model.normalizer, frames_from(frames), [&](const Decision& d) { out.push_back(d); });
  if (frames.size() != 1800 || out.size() != frames.size()) {
    return {false, std::to_string(out.size()) + " decisions for " + std::to_string(frames.size()) + " frames"};
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].timestamp_ms != frames[i].timestamp_ms) return {false, "decision " + std::to_string(i) + " out of order"};
  }
  oracle::Generator gen(31);
  for (int k = 0; k < 100; ++k) {
    const Vec3 s{gen.uniform(0, 1), gen.uniform(0, 1), gen.uniform(0, 1)};
    const double lo = gen.uniform(0, 1);
    const double hi = gen.uniform(lo, 1);
    const CompoundLabel a = decide(s, lo);
    const CompoundLabel b = decide(s, hi);
    if (!(b == a || b == CompoundLabel::Unknown)) return {false, "threshold raise changed a label"};
  }
  return {true, "1800 ordered decisions; 100 threshold pairs monotone"};
}

Outcome export_self_check() {
  const ModelFile model = parse_model(read_file(data_path("published_model.tnn")));
  const std::string src = emit_embedded_source(model);
  static const std::regex out_line(R"( \*   out = \{ ([^}]*) \})");
  static const std::regex number(R"([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)");
  const auto inputs = verification_inputs();
  std::size_t vec = 0;
  double worst = 0.0;
  for (auto it = std::sregex_iterator(src.begin(), src.end(), out_line); it != std::sregex_iterator(); ++it, ++vec) {
    if (vec >= inputs.size()) return {false, "more verification vectors than inputs"};
    const std::string body = (*it)[1].str();
    const Vec3 want = forward(model.params, inputs[vec]).output_out;
    std::size_t i = 0;
    for (auto n = std::sregex_iterator(body.begin(), body.end(), number); n != std::sregex_iterator(); ++n, ++i) {
      if (i >= 3) return {false, "verification vector has too many values"};
      worst = std::max(worst, std::abs(std::stod(n->str()) - want[i]));
    }
    if (i != 3) return {false, "verification vector has " + std::to_string(i) + " values"};
  }
  if (vec != inputs.size()) return {false, "found " + std::to_string(vec) + " verification vectors"};
  return {worst <= 1e-5, "max absolute error " + sci(worst) + " over " + std::to_string(vec) + " vectors"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
    double budget_s;
  };
  const std::vector<Criterion> criteria{
      {"golden forward pass", golden_forward, 1.0},
      {"gradient correctness", gradient_check, 10.0},
      {"end-to-end training", end_to_end, 60.0},
      {"class-balance rule", class_balance, 1.0},
      {"sensor math", sensor_math, 1.0},
      {"round trips", round_trips, 10.0},
      {"stream conservation", stream_conservation, 10.0},
      {"embedded export self-check", export_self_check, 1.0},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > criteria[k].budget_s) {
      o.ok = false;
      o.detail += "; over the " + sci(criteria[k].budget_s) + " s budget";
    }
    if (!o.ok) ++failures;
    std::printf("%s [%zu] %s: %s (%.3f s)\n", o.ok ? "PASS" : "FAIL", k + 1, criteria[k].name, o.detail.c_str(),
                secs);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
