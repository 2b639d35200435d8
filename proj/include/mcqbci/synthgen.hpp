#pragma once

#include "mcqbci/exam.hpp"
#include "mcqbci/lda.hpp"
#include "mcqbci/signal.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace mcqbci {

// Synthetic ERP source. Targets get a Gaussian bump of p300_amplitude_uv
// centred at p300_latency_s after onset, truncated to +/- 3 widths, on every
// channel. White Gaussian background noise is added everywhere.
struct SynthConfig {
  double sample_rate_hz = 250.0;
  int n_channels = 4;
  double p300_amplitude_uv = 5.0;
  double p300_latency_s = 0.30;
  double p300_width_s = 0.08;
  double background_noise_uv_rms = 2.0;
  int repetitions = 10;
  double isi_s = 0.4;
  double window_s = 0.6;
  double lead_in_s = 2.0;
  double question_gap_s = 1.0;
  std::uint64_t seed = 0;

  // ConfigError naming the offending field.
  void validate() const;
};

// Default labels Fz, Cz, Pz, Oz, then ChN beyond four channels.
std::vector<std::string> default_channel_labels(int n_channels);

// Bump value at time t seconds after onset (0 outside the truncated support).
double p300_template(const SynthConfig& config, double t_seconds);

// One continuous recording: lead-in, then per question R shuffled blocks of
// four flashes spaced isi_s apart, question_gap_s between questions, and a
// tail long enough for the last window.
Recording gen_session(const Exam& exam, const std::map<std::string, Option>& target_answers,
                      const SynthConfig& config);

// Answer key of the exam as the intended targets.
std::map<std::string, Option> answer_key(const Exam& exam);

// Standalone labeled epochs (class 0 "nontarget", class 1 "target"), each
// generated as a short recording with lead_in_s of settling, run through
// preprocess/segment/features.
LabeledDataset gen_training_set(const SynthConfig& config, const PipelineSpec& pipeline, int n_target,
                                int n_nontarget);

}  // namespace mcqbci
