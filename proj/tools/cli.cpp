#include "tinynose/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tinynose/model_io.hpp"
#include "tinynose/pipeline.hpp"
#include "tinynose/sensing.hpp"
#include "tinynose/text.hpp"
#include "tinynose/training.hpp"

namespace tinynose {

namespace {

struct Globals {
  std::uint64_t seed = 1;
  bool quiet = false;
};

AcquisitionProtocol load_protocol(const std::string& path) {
  if (path.empty()) return default_protocol();
  try {
    return parse_protocol(read_file(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

LabeledDataset load_dataset(const std::string& path) {
  try {
    return load_dataset_csv(read_file(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

ModelFile load_model(const std::string& path) {
  try {
    return parse_model(read_file(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string fixed_or_na(const std::optional<double>& v) { return v ? fixed(*v) : "undefined"; }

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string protocol;
  std::string out;
  std::string dump_protocol;
};

void cmd_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out) {
  const AcquisitionProtocol protocol = load_protocol(a.protocol);
  if (!a.dump_protocol.empty()) write_file(a.dump_protocol, format_protocol(protocol));
  const LabeledDataset data = simulate_acquisition(protocol, g.seed);
  write_file(a.out, write_dataset_csv(data));
  if (!g.quiet) {
    const auto counts = data.class_counts();
    for (std::size_t i = 0; i < kOutputs; ++i) {
      out << label_file_name(kClasses[i]) << ": " << counts[i] << " frames\n";
    }
    out << "total: " << data.size() << " frames -> " << a.out << '\n';
  }
}

// --- train --------------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string out;
  std::string report;
  TrainConfig config;
  std::vector<double> split{0.70, 0.15, 0.15};
};

std::string report_csv(const TrainReport& r) {
  std::string s = "epoch,train_mse,val_mse\n";
  for (std::size_t e = 0; e < r.epochs_run; ++e) {
    s += std::to_string(e + 1);
    s += ',';
    s += text::format_real(r.epoch_mse[e]);
    s += ',';
    if (e < r.validation_mse.size()) s += text::format_real(r.validation_mse[e]);
    s += '\n';
  }
  return s;
}

void cmd_train(TrainArgs a, const Globals& g, std::ostream& out) {
  a.config.seed = g.seed;
  a.config.split_fractions = SplitFractions{a.split[0], a.split[1], a.split[2]};
  const LabeledDataset data = load_dataset(a.data);
  const TrainReport r = train(data, a.config);
  write_file(a.out, emit_model(ModelFile{r.normalizer, r.final_params}));
  if (!a.report.empty()) write_file(a.report, report_csv(r));
  if (!g.quiet) {
    out << "stop_reason: " << stop_reason_name(r.stop_reason) << '\n';
    out << "epochs: " << r.epochs_run << '\n';
    if (!r.epoch_mse.empty()) out << "train_mse: " << text::format_real(r.epoch_mse.back()) << '\n';
    if (!r.validation_mse.empty()) {
      out << "val_mse: " << text::format_real(r.validation_mse.back()) << '\n';
    }
    out << "split: " << r.split.train.size() << " train, " << r.split.validation.size()
        << " validation, " << r.split.test.size() << " test\n";
    if (!r.split.test.empty()) {
      const auto test = to_samples(r.split.test, r.normalizer);
      out << "test_accuracy: " << fixed(classification_accuracy(r.final_params, test)) << '\n';
    }
  }
}

// --- eval ---------------------------------------------------------------------

struct EvalArgs {
  std::string model;
  std::string data;
  std::string matrix_csv;
  double threshold = 0.0;
};

void print_evaluation(const ConfusionMatrix& cm, std::ostream& out) {
  const Metrics m = precision_metrics(cm);
  out << "confusion matrix (rows = truth, columns = prediction)\n";
  out << std::left << std::setw(8) << "truth" << std::right;
  for (CompoundLabel c : kClasses) out << std::setw(9) << label_file_name(c);
  out << std::setw(9) << "unknown" << '\n';
  for (std::size_t t = 0; t < kOutputs; ++t) {
    out << std::left << std::setw(8) << label_file_name(kClasses[t]) << std::right;
    for (std::size_t p = 0; p < kOutputs; ++p) out << std::setw(9) << cm.counts[t][p];
    out << std::setw(9) << cm.unknown[t] << '\n';
  }
  out << '\n' << std::left << std::setw(8) << "class" << std::right << std::setw(11) << "precision"
      << std::setw(11) << "recall" << '\n';
  for (std::size_t c = 0; c < kOutputs; ++c) {
    out << std::left << std::setw(8) << label_file_name(kClasses[c]) << std::right << std::setw(11)
        << fixed_or_na(m.per_class[c].precision) << std::setw(11)
        << fixed_or_na(m.per_class[c].recall) << '\n';
  }
  out << "accuracy: " << fixed_or_na(m.accuracy) << '\n';
}

void cmd_eval(const EvalArgs& a, std::ostream& out) {
  const ModelFile model = load_model(a.model);
  const LabeledDataset data = load_dataset(a.data);
  if (data.empty()) throw std::runtime_error(a.data + ": dataset has no frames");
  std::vector<Decision> decisions;
  std::vector<CompoundLabel> truths;
  decisions.reserve(data.size());
  truths.reserve(data.size());
  for (const auto& lf : data.samples) {
    decisions.push_back(classify_frame(model.params, model.normalizer, lf.frame, a.threshold));
    truths.push_back(lf.label);
  }
  const ConfusionMatrix cm = confusion_matrix(decisions, truths);
  print_evaluation(cm, out);
  if (!a.matrix_csv.empty()) {
    std::string csv = "truth,lemon,banana,grape,unknown\n";
    for (std::size_t t = 0; t < kOutputs; ++t) {
      csv += label_file_name(kClasses[t]);
      for (std::size_t p = 0; p < kOutputs; ++p) csv += ',' + std::to_string(cm.counts[t][p]);
      csv += ',' + std::to_string(cm.unknown[t]) + '\n';
    }
    write_file(a.matrix_csv, csv);
  }
}

// --- classify -----------------------------------------------------------------

struct ClassifyArgs {
  std::string model;
  std::vector<int> frame;
  double threshold = 0.0;
};

void cmd_classify(const ClassifyArgs& a, std::ostream& out) {
  const ModelFile model = load_model(a.model);
  if (a.frame.size() != kChannels) {
    throw std::runtime_error("--frame needs 5 comma-separated ADC counts");
  }
  SensorFrame frame;
  for (std::size_t c = 0; c < kChannels; ++c) {
    if (a.frame[c] < 0 || a.frame[c] > 0xffff) {
      throw std::runtime_error("--frame value " + std::to_string(a.frame[c]) + " out of range");
    }
    frame.raw[c] = static_cast<std::uint16_t>(a.frame[c]);
  }
  out << format_decision(classify_frame(model.params, model.normalizer, frame, a.threshold))
      << '\n';
}

// --- stream -------------------------------------------------------------------

struct StreamArgs {
  std::string model;
  std::string data;
  bool live_sim = false;
  std::string protocol;
  std::uint32_t period_ms = 500;
  double threshold = 0.0;
  bool realtime = false;
};

void cmd_stream(const StreamArgs& a, const Globals& g, std::ostream& out) {
  const ModelFile model = load_model(a.model);
  std::vector<SensorFrame> frames;
  {
    const LabeledDataset data =
        a.live_sim ? simulate_acquisition(load_protocol(a.protocol), g.seed) : load_dataset(a.data);
    frames.reserve(data.size());
    for (const auto& lf : data.samples) frames.push_back(lf.frame);
  }
  StreamOptions options;
  options.threshold = a.threshold;
  options.sample_period_ms = a.period_ms;
  options.pacing = a.realtime ? Pacing::RealTime : Pacing::SimulatedTime;
  run_stream(
      model.params, model.normalizer, frames_from(frames),
      [&out, realtime = a.realtime](const Decision& d) {
        out << format_decision(d) << '\n';
        if (realtime) out.flush();
      },
      options);
}

// --- export -------------------------------------------------------------------

struct ExportArgs {
  std::string model;
  std::string out;
};

void cmd_export(const ExportArgs& a, const Globals& g, std::ostream& out) {
  const ModelFile model = load_model(a.model);
  write_file(a.out, emit_embedded_source(model));
  if (!g.quiet) out << "wrote " << a.out << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tinynose: electronic-nose VOC classifier toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for simulation, initialization, split and shuffle");
  app.add_flag("--quiet", g.quiet, "Suppress informational output");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate an acquisition session to CSV");
  simulate->add_option("--protocol", sim.protocol, "Protocol file (default: built-in)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--out", sim.out, "Output dataset CSV")->required();
  simulate->add_option("--dump-protocol", sim.dump_protocol, "Also write the protocol used");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a dataset CSV");
  train_cmd->add_option("--data", tr.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", tr.out, "Output model file")->required();
  train_cmd->add_option("--report", tr.report, "Per-epoch CSV: epoch,train_mse,val_mse");
  train_cmd->add_option("--base-learning-rate", tr.config.base_learning_rate)->capture_default_str();
  train_cmd->add_option("--max-epochs", tr.config.max_epochs)->capture_default_str();
  train_cmd->add_option("--target-mse", tr.config.target_mse)->capture_default_str();
  train_cmd->add_option("--init-range", tr.config.init_range)->capture_default_str();
  train_cmd->add_option("--validation-patience", tr.config.validation_patience)
      ->capture_default_str();
  train_cmd->add_option("--split-fractions", tr.split, "train,validation,test")
      ->expected(3)
      ->delimiter(',');

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Confusion matrix and precision/recall on a dataset");
  eval->add_option("--model", ev.model)->required()->check(CLI::ExistingFile);
  eval->add_option("--data", ev.data)->required()->check(CLI::ExistingFile);
  eval->add_option("--threshold", ev.threshold)->check(CLI::Range(0.0, 1.0));
  eval->add_option("--matrix-csv", ev.matrix_csv, "Also write the matrix as CSV");

  ClassifyArgs cl;
  auto* classify = app.add_subcommand("classify", "Classify one frame of raw ADC counts");
  classify->add_option("--model", cl.model)->required()->check(CLI::ExistingFile);
  classify->add_option("--frame", cl.frame, "mq2,mq135,tgs2610,tgs2611,mq3")
      ->required()
      ->expected(5)
      ->delimiter(',');
  classify->add_option("--threshold", cl.threshold)->check(CLI::Range(0.0, 1.0));

  StreamArgs st;
  auto* stream = app.add_subcommand("stream", "Classify a frame stream, one decision per line");
  stream->add_option("--model", st.model)->required()->check(CLI::ExistingFile);
  auto* data_opt = stream->add_option("--data", st.data)->check(CLI::ExistingFile);
  auto* live_opt = stream->add_flag("--live-sim", st.live_sim, "Stream a simulated session");
  data_opt->excludes(live_opt);
  stream->add_option("--protocol", st.protocol, "Protocol for --live-sim")
      ->check(CLI::ExistingFile)
      ->needs(live_opt);
  stream->add_option("--period-ms", st.period_ms)->check(CLI::PositiveNumber);
  stream->add_option("--threshold", st.threshold)->check(CLI::Range(0.0, 1.0));
  stream->add_flag("--realtime", st.realtime, "Pace output to --period-ms");

  ExportArgs ex;
  auto* export_cmd = app.add_subcommand("export", "Write C source for the embedded target");
  export_cmd->add_option("--model", ex.model)->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--out", ex.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*simulate) {
      cmd_simulate(sim, g, out);
    } else if (*train_cmd) {
      cmd_train(tr, g, out);
    } else if (*eval) {
      cmd_eval(ev, out);
    } else if (*classify) {
      cmd_classify(cl, out);
    } else if (*stream) {
      if (!st.live_sim && st.data.empty()) throw std::runtime_error("stream needs --data or --live-sim");
      cmd_stream(st, g, out);
    } else if (*export_cmd) {
      cmd_export(ex, g, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace tinynose
