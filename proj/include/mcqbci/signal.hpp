#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcqbci {

enum class Option : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };

inline constexpr std::array<Option, 4> kAllOptions{Option::A, Option::B, Option::C, Option::D};

constexpr char option_char(Option o) noexcept { return static_cast<char>('A' + static_cast<int>(o)); }
constexpr std::size_t option_index(Option o) noexcept { return static_cast<std::size_t>(o); }

// Accepts exactly "A".."D".
std::optional<Option> parse_option(std::string_view text) noexcept;

struct StimulusEvent {
  std::int64_t onset_sample = 0;
  std::string question_id;
  Option option = Option::A;
  std::optional<bool> is_target;

  bool operator==(const StimulusEvent&) const = default;
};

// Continuous multichannel EEG. samples is [n_samples x n_channels] in
// microvolts. band_limit_hz is set by apply_filter and checked by decimate.
struct Recording {
  double sample_rate_hz = 0.0;
  std::vector<std::string> channels;
  Eigen::MatrixXd samples;
  std::vector<StimulusEvent> events;
  std::optional<double> band_limit_hz;

  Eigen::Index n_samples() const noexcept { return samples.rows(); }
  Eigen::Index n_channels() const noexcept { return samples.cols(); }

  // Throws SchemaError on a broken invariant.
  void validate() const;
};

bool operator==(const Recording& a, const Recording& b);

struct FilterSpec {
  double low_cut_hz = 0.5;
  double high_cut_hz = 30.0;
  int order = 4;
};

// One biquad, normalized so a0 = 1:
//   y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

struct FilterCoefficients {
  std::vector<Biquad> sections;
  double sample_rate_hz = 0.0;
  double low_cut_hz = 0.0;
  double high_cut_hz = 0.0;
  int order = 0;
};

// Butterworth band-pass as a cascade of order/2 high-pass sections at
// low_cut followed by order/2 low-pass sections at high_cut, each discretized
// with the prewarped bilinear transform.
FilterCoefficients design_bandpass(const FilterSpec& spec, double fs);

std::complex<double> frequency_response(const FilterCoefficients& coeffs, double freq_hz);

// Causal, single pass, zero initial state, channels independent.
Recording apply_filter(const FilterCoefficients& coeffs, const Recording& recording);

// Filters one channel. Exposed for impulse-response checks.
Eigen::VectorXd filter_signal(const FilterCoefficients& coeffs, const Eigen::VectorXd& x);

Recording decimate(const Recording& recording, int factor);

struct Epoch {
  std::string question_id;
  Option option = Option::A;
  std::optional<bool> is_target;
  Eigen::MatrixXd data;  // [n_window_samples x n_channels]
  double effective_rate_hz = 0.0;
};

std::vector<Epoch> segment(const Recording& recording, double window_seconds);

struct FeatureVector {
  Eigen::VectorXd values;
  std::string question_id;
  Option option = Option::A;
};

// Channel-major flattening; optional per-vector z-scoring (population std,
// zero variance maps to all zeros).
FeatureVector features(const Epoch& epoch, bool standardize);

// Periodogram power (|DFT|^2 / n) summed over bins with |f| in [low, high],
// one value per channel.
Eigen::VectorXd band_power(const Epoch& epoch, double band_low_hz, double band_high_hz);

inline constexpr double kAlphaLowHz = 8.0;
inline constexpr double kAlphaHighHz = 12.0;

// Filter -> decimate; shared by the session runner and the training set
// generator so both see the same chain.
struct PipelineSpec {
  FilterSpec filter{0.5, 12.0, 4};
  int decimation = 10;
  double window_s = 0.6;
  bool standardize = true;
};

Recording preprocess(const Recording& raw, const PipelineSpec& spec);

}  // namespace mcqbci
