#include "mcqbci/synthgen.hpp"

#include "mcqbci/error.hpp"
#include "mcqbci/rng.hpp"
#include "mcqbci/speller.hpp"

#include <cmath>

namespace mcqbci {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) throw Error(Errc::ConfigError, std::string(name) + " must be positive");
}

Eigen::Index to_samples(double seconds, double fs) { return static_cast<Eigen::Index>(std::llround(seconds * fs)); }

void add_bump(Eigen::MatrixXd& samples, Eigen::Index onset, const SynthConfig& config) {
  const double fs = config.sample_rate_hz;
  const auto first = static_cast<Eigen::Index>(
      std::ceil((config.p300_latency_s - 3.0 * config.p300_width_s) * fs - 1e-9));
  const auto last = static_cast<Eigen::Index>(
      std::floor((config.p300_latency_s + 3.0 * config.p300_width_s) * fs + 1e-9));
  for (Eigen::Index k = std::max<Eigen::Index>(first, 0); k <= last; ++k) {
    const Eigen::Index row = onset + k;
    if (row >= samples.rows()) break;
    samples.row(row).array() += p300_template(config, static_cast<double>(k) / fs);
  }
}

void add_noise(Eigen::MatrixXd& samples, double rms, std::uint64_t seed) {
  if (rms == 0.0) return;
  Rng rng(seed);
  for (Eigen::Index i = 0; i < samples.rows(); ++i)
    for (Eigen::Index c = 0; c < samples.cols(); ++c) samples(i, c) += rms * rng.normal();
}

}  // namespace

void SynthConfig::validate() const {
  require_positive(sample_rate_hz, "sample_rate_hz");
  if (n_channels < 1) throw Error(Errc::ConfigError, "n_channels must be positive");
  require_positive(p300_amplitude_uv, "p300_amplitude_uv");
  require_positive(p300_latency_s, "p300_latency_s");
  require_positive(p300_width_s, "p300_width_s");
  if (!(background_noise_uv_rms >= 0.0) || !std::isfinite(background_noise_uv_rms))
    throw Error(Errc::ConfigError, "background_noise_uv_rms must be nonnegative");
  if (repetitions < 1) throw Error(Errc::ConfigError, "repetitions must be positive");
  require_positive(isi_s, "isi_s");
  require_positive(window_s, "window_s");
  if (!(lead_in_s >= 0.0)) throw Error(Errc::ConfigError, "lead_in_s must be nonnegative");
  if (!(question_gap_s >= 0.0)) throw Error(Errc::ConfigError, "question_gap_s must be nonnegative");
  if (!(p300_latency_s + 3.0 * p300_width_s < window_s))
    throw Error(Errc::ConfigError, "p300_latency_s + 3 * p300_width_s must be shorter than window_s");
}

std::vector<std::string> default_channel_labels(int n_channels) {
  static const char* const kNames[] = {"Fz", "Cz", "Pz", "Oz"};
  std::vector<std::string> labels;
  for (int c = 0; c < n_channels; ++c) labels.emplace_back(c < 4 ? kNames[c] : "Ch" + std::to_string(c + 1));
  return labels;
}

double p300_template(const SynthConfig& config, double t_seconds) {
  const double dt = t_seconds - config.p300_latency_s;
  if (std::abs(dt) > 3.0 * config.p300_width_s + 1e-12) return 0.0;
  return config.p300_amplitude_uv * std::exp(-dt * dt / (2.0 * config.p300_width_s * config.p300_width_s));
}

std::map<std::string, Option> answer_key(const Exam& exam) {
  std::map<std::string, Option> key;
  for (const auto& q : exam.questions) key.emplace(q.question_id, q.answer);
  return key;
}

Recording gen_session(const Exam& exam, const std::map<std::string, Option>& target_answers,
                      const SynthConfig& config) {
  config.validate();
  const double fs = config.sample_rate_hz;
  const Eigen::Index isi = to_samples(config.isi_s, fs);
  if (isi < 1) throw Error(Errc::ConfigError, "isi_s shorter than one sample");
  const Eigen::Index gap = to_samples(config.question_gap_s, fs);
  const Eigen::Index tail = std::max(to_samples(config.window_s, fs),
                                     to_samples(config.p300_latency_s + 3.0 * config.p300_width_s, fs) + 1);

  Recording rec;
  rec.sample_rate_hz = fs;
  rec.channels = default_channel_labels(config.n_channels);

  const std::uint64_t schedule_seed = mix_seed(config.seed, "schedule");
  Eigen::Index cursor = to_samples(config.lead_in_s, fs);
  for (const auto& q : exam.questions) {
    const auto target = target_answers.find(q.question_id);
    if (target == target_answers.end())
      throw Error(Errc::ConfigError, "target_answers has no entry for question '" + q.question_id + "'");
    const auto schedule = make_schedule(q.question_id, config.repetitions, schedule_seed);
    for (const auto& block : schedule.blocks) {
      for (Option o : block) {
        rec.events.push_back({cursor, q.question_id, o, o == target->second});
        cursor += isi;
      }
    }
    cursor += gap;
  }
  const Eigen::Index last_onset = rec.events.empty() ? 0 : rec.events.back().onset_sample;
  const Eigen::Index n_samples = std::max(cursor, last_onset + tail);

  rec.samples = Eigen::MatrixXd::Zero(n_samples, config.n_channels);
  for (const auto& e : rec.events) {
    if (*e.is_target) add_bump(rec.samples, e.onset_sample, config);
  }
  add_noise(rec.samples, config.background_noise_uv_rms, mix_seed(config.seed, "noise"));
  return rec;
}

LabeledDataset gen_training_set(const SynthConfig& config, const PipelineSpec& pipeline, int n_target,
                                int n_nontarget) {
  config.validate();
  if (n_target < 2 || n_nontarget < 2) throw Error(Errc::ConfigError, "training counts must be at least 2 per class");
  const double fs = config.sample_rate_hz;
  const Eigen::Index lead = to_samples(config.lead_in_s, fs);
  const Eigen::Index length = lead + to_samples(config.window_s, fs) + pipeline.decimation + 1;

  LabeledDataset data;
  data.class_labels = {"nontarget", "target"};
  const int total = n_target + n_nontarget;
  const std::uint64_t base = mix_seed(config.seed, "training");

  for (int k = 0; k < total; ++k) {
    const bool is_target = k < n_target;
    Recording rec;
    rec.sample_rate_hz = fs;
    rec.channels = default_channel_labels(config.n_channels);
    rec.samples = Eigen::MatrixXd::Zero(length, config.n_channels);
    rec.events.push_back({lead, is_target ? "train-target" : "train-nontarget", Option::A, is_target});
    if (is_target) add_bump(rec.samples, lead, config);
    add_noise(rec.samples, config.background_noise_uv_rms, mix_seed(base, static_cast<std::uint64_t>(k)));

    const auto epochs = segment(preprocess(rec, pipeline), pipeline.window_s);
    const auto fv = features(epochs.front(), pipeline.standardize);
    if (k == 0) data.samples.resize(total, fv.values.size());
    data.samples.row(k) = fv.values.transpose();
    data.labels.push_back(is_target ? 1 : 0);
  }
  return data;
}

}  // namespace mcqbci
