// mcqbci: synthetic data generation, LDA training, exam sessions and noise
// sweeps from the command line.
//
// Exit codes: 0 success, 2 usage/config error, 3 domain error, 4 I/O error.

#include "mcqbci/config.hpp"
#include "mcqbci/error.hpp"
#include "mcqbci/exam.hpp"
#include "mcqbci/lda_io.hpp"
#include "mcqbci/recording_io.hpp"
#include "mcqbci/robustness.hpp"
#include "mcqbci/synthgen.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mcqbci;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SharedOptions {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_shared(CLI::App* cmd, SharedOptions& shared) {
  cmd->add_option("--seed", shared.seed, "Seed for every random stream");
  cmd->add_option("--config", shared.config_path, "Flat JSON config file");
  cmd->add_option("--set", shared.overrides, "Override one config key (key=value)");
}

RunConfig build_config(const SharedOptions& shared) {
  RunConfig config;
  if (!shared.config_path.empty()) config.merge_file(shared.config_path);
  for (const auto& kv : shared.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (shared.seed) config.seed = *shared.seed;
  config.validate();
  return config;
}

void require_file(const std::string& path, const std::string& what) {
  if (!fs::exists(path)) throw UsageError(what + " not found: " + path);
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::ConfigError:
    case Errc::InvalidBand:
    case Errc::AliasRisk:
      return kExitUsage;
    case Errc::IoError:
      return kExitIo;
    default:
      return kExitDomain;
  }
}

SessionConfig session_config(const RunConfig& config) { return {config.pipeline, config.student_id}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"P300 multiple-choice exam toolkit"};
  app.require_subcommand(1);

  SharedOptions shared;
  std::string exam_path, recording_out, training_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic session recording and training set");
  add_shared(synth, shared);
  synth->add_option("--exam", exam_path, "Exam JSON")->required();
  synth->add_option("--recording", recording_out, "Output recording JSON")->required();
  synth->add_option("--training", training_out, "Output training dataset JSON")->required();

  std::string training_path, model_path;
  std::optional<double> shrinkage;
  std::optional<std::string> weighting;
  auto* train = app.add_subcommand("train", "Fit the LDA model on a training dataset");
  add_shared(train, shared);
  train->add_option("--training", training_path, "Training dataset JSON")->required();
  train->add_option("--model", model_path, "Output model JSON")->required();
  train->add_option("--shrinkage", shrinkage, "Relative shrinkage of the within-class scatter");
  train->add_option("--weighting", weighting, "paper_unweighted or count_weighted");

  std::vector<std::string> recordings;
  std::string result_out;
  auto* exam_run = app.add_subcommand("exam-run", "Answer and grade an exam from a recording");
  add_shared(exam_run, shared);
  exam_run->add_option("--exam", exam_path, "Exam JSON")->required();
  exam_run->add_option("--model", model_path, "Model JSON")->required();
  exam_run->add_option("--recording", recordings, "Recording JSON")->required()->expected(1);
  exam_run->add_option("--result", result_out, "Output session result JSON")->required();

  std::string levels_spec = "0..100";
  int trials = 5;
  std::string csv_out, svg_out;
  auto* sweep = app.add_subcommand("sweep", "Accuracy under increasing injected noise");
  add_shared(sweep, shared);
  sweep->add_option("--exam", exam_path, "Exam JSON")->required();
  sweep->add_option("--model", model_path, "Model JSON")->required();
  sweep->add_option("--recording", recordings, "Recording JSON (repeatable)")->required();
  sweep->add_option("--levels", levels_spec, "Levels: a..b, a..b:step or a,b,c");
  sweep->add_option("--trials", trials, "Noise trials per level");
  sweep->add_option("--csv", csv_out, "Output CSV")->required();
  sweep->add_option("--svg", svg_out, "Output SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth->parsed()) {
      require_file(exam_path, "exam");
      auto config = build_config(shared);
      const auto exam = load_exam(exam_path);
      const auto synth_cfg = config.synth_config();
      const auto recording = gen_session(exam, answer_key(exam), synth_cfg);
      const auto training = gen_training_set(synth_cfg, config.pipeline, config.n_target, config.n_nontarget);
      save_recording(recording, recording_out);
      save_dataset(training, training_out);
      std::printf("synth: exam=%s questions=%zu events=%zu samples=%lld training=%lld dim=%lld seed=%llu\n",
                  exam.exam_id.c_str(), exam.questions.size(), recording.events.size(),
                  static_cast<long long>(recording.n_samples()), static_cast<long long>(training.size()),
                  static_cast<long long>(training.dim()), static_cast<unsigned long long>(config.seed));
    } else if (train->parsed()) {
      require_file(training_path, "training set");
      auto config = build_config(shared);
      if (shrinkage) config.shrinkage = *shrinkage;
      if (weighting) config.sb_weighting = parse_weighting(*weighting);
      config.validate();
      const auto data = load_dataset(training_path);
      const auto model = fit(data, config.shrinkage, config.sb_weighting);
      long long correct = 0;
      for (Eigen::Index k = 0; k < data.size(); ++k) {
        if (classify(model, data.samples.row(k).transpose()) == data.labels[static_cast<std::size_t>(k)]) ++correct;
      }
      save_model(model, model_path);
      std::printf("train_acc=%.2f\n", 100.0 * static_cast<double>(correct) / static_cast<double>(data.size()));
    } else if (exam_run->parsed()) {
      require_file(exam_path, "exam");
      require_file(model_path, "model");
      require_file(recordings.front(), "recording");
      const auto config = build_config(shared);
      const auto result = run_session(load_exam(exam_path), load_model(model_path), load_recording(recordings.front()),
                                      session_config(config));
      save_session_result(result, result_out);
      std::printf("exam=%s student=%s correct=%d/%zu grade=%.2f\n", result.exam_id.c_str(),
                  result.student_id.c_str(), result.n_correct, result.selections.size(), result.grade_percent);
    } else if (sweep->parsed()) {
      require_file(exam_path, "exam");
      require_file(model_path, "model");
      for (const auto& r : recordings) require_file(r, "recording");
      const auto config = build_config(shared);
      const auto levels = parse_levels(levels_spec);
      std::vector<Recording> sessions;
      for (const auto& r : recordings) sessions.push_back(load_recording(r));
      const auto report = noise_sweep(load_model(model_path), load_exam(exam_path), sessions, levels, trials,
                                      config.seed, config.pipeline);
      write_report_csv(report, csv_out);
      if (!svg_out.empty()) write_curve_svg(report, svg_out);
      std::printf("sweep: levels=%zu trials=%d clean=%.2f first=%.2f last=%.2f\n", report.levels.size(), trials,
                  report.clean_accuracy_pct, report.accuracy_pct.front(), report.accuracy_pct.back());
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDomain;
  }
  return 0;
}
