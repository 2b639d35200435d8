#include "mcqbci/signal.hpp"

#include "mcqbci/error.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace mcqbci {

std::optional<Option> parse_option(std::string_view text) noexcept {
  if (text.size() != 1 || text[0] < 'A' || text[0] > 'D') return std::nullopt;
  return static_cast<Option>(text[0] - 'A');
}

void Recording::validate() const {
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
    throw Error(Errc::SchemaError, "sample_rate_hz must be positive");
  if (channels.empty()) throw Error(Errc::SchemaError, "channels must be nonempty");
  if (static_cast<Eigen::Index>(channels.size()) != samples.cols())
    throw Error(Errc::SchemaError, "samples row length must equal channel count");
  std::set<std::string> seen;
  for (const auto& label : channels) {
    if (!seen.insert(label).second) throw Error(Errc::SchemaError, "duplicate channel label '" + label + "'");
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].onset_sample < 0 || events[i].onset_sample >= samples.rows())
      throw Error(Errc::SchemaError, "events[" + std::to_string(i) + "].onset_sample out of range");
  }
}

bool operator==(const Recording& a, const Recording& b) {
  return a.sample_rate_hz == b.sample_rate_hz && a.channels == b.channels &&
         a.samples.rows() == b.samples.rows() && a.samples.cols() == b.samples.cols() &&
         a.samples == b.samples && a.events == b.events && a.band_limit_hz == b.band_limit_hz;
}

namespace {

void check_band(const FilterSpec& spec, double fs) {
  if (!(fs > 0.0)) throw Error(Errc::InvalidBand, "sample rate must be positive");
  if (spec.order <= 0 || spec.order % 2 != 0)
    throw Error(Errc::InvalidBand, "order must be an even positive integer, got " + std::to_string(spec.order));
  if (!(spec.low_cut_hz > 0.0)) throw Error(Errc::InvalidBand, "low_cut_hz must be positive");
  if (!(spec.low_cut_hz < spec.high_cut_hz))
    throw Error(Errc::InvalidBand, "low_cut_hz must be below high_cut_hz");
  if (!(spec.high_cut_hz < fs / 2.0)) throw Error(Errc::InvalidBand, "high_cut_hz must be below Nyquist");
}

}  // namespace

FilterCoefficients design_bandpass(const FilterSpec& spec, double fs) {
  check_band(spec, fs);
  FilterCoefficients out;
  out.sample_rate_hz = fs;
  out.low_cut_hz = spec.low_cut_hz;
  out.high_cut_hz = spec.high_cut_hz;
  out.order = spec.order;

  const int n = spec.order;
  const double k_low = std::tan(std::numbers::pi * spec.low_cut_hz / fs);
  const double k_high = std::tan(std::numbers::pi * spec.high_cut_hz / fs);

  // Butterworth pole pairs: Q_k = 1 / (2 sin((2k+1) pi / 2n)).
  auto section = [](double k, double q, bool high_pass) {
    const double norm = 1.0 / (1.0 + k / q + k * k);
    Biquad s;
    if (high_pass) {
      s.b0 = norm;
      s.b1 = -2.0 * norm;
      s.b2 = norm;
    } else {
      s.b0 = k * k * norm;
      s.b1 = 2.0 * s.b0;
      s.b2 = s.b0;
    }
    s.a1 = 2.0 * (k * k - 1.0) * norm;
    s.a2 = (1.0 - k / q + k * k) * norm;
    return s;
  };

  for (int i = 0; i < n / 2; ++i) {
    const double q = 1.0 / (2.0 * std::sin(std::numbers::pi * (2 * i + 1) / (2.0 * n)));
    out.sections.push_back(section(k_low, q, true));
  }
  for (int i = 0; i < n / 2; ++i) {
    const double q = 1.0 / (2.0 * std::sin(std::numbers::pi * (2 * i + 1) / (2.0 * n)));
    out.sections.push_back(section(k_high, q, false));
  }
  return out;
}

std::complex<double> frequency_response(const FilterCoefficients& coeffs, double freq_hz) {
  const double omega = 2.0 * std::numbers::pi * freq_hz / coeffs.sample_rate_hz;
  const std::complex<double> z1 = std::polar(1.0, -omega);
  const std::complex<double> z2 = z1 * z1;
  std::complex<double> h(1.0, 0.0);
  for (const auto& s : coeffs.sections) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

Eigen::VectorXd filter_signal(const FilterCoefficients& coeffs, const Eigen::VectorXd& x) {
  Eigen::VectorXd y = x;
  for (const auto& s : coeffs.sections) {
    // Direct form II transposed.
    double z1 = 0.0, z2 = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double in = y[i];
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      y[i] = out;
    }
  }
  return y;
}

Recording apply_filter(const FilterCoefficients& coeffs, const Recording& recording) {
  if (std::abs(coeffs.sample_rate_hz - recording.sample_rate_hz) > 1e-9 * recording.sample_rate_hz)
    throw Error(Errc::InvalidBand, "filter designed for " + std::to_string(coeffs.sample_rate_hz) +
                                       " Hz applied to a " + std::to_string(recording.sample_rate_hz) +
                                       " Hz recording");
  Recording out = recording;
  for (Eigen::Index c = 0; c < out.samples.cols(); ++c) {
    out.samples.col(c) = filter_signal(coeffs, recording.samples.col(c));
  }
  out.band_limit_hz = recording.band_limit_hz ? std::min(*recording.band_limit_hz, coeffs.high_cut_hz)
                                              : coeffs.high_cut_hz;
  return out;
}

Recording decimate(const Recording& recording, int factor) {
  if (factor < 1) throw Error(Errc::ConfigError, "decimation factor must be >= 1");
  if (factor == 1) return recording;
  const double new_rate = recording.sample_rate_hz / factor;
  if (!recording.band_limit_hz)
    throw Error(Errc::AliasRisk, "recording carries no band limit; filter before decimating");
  if (!(*recording.band_limit_hz < new_rate / 2.0))
    throw Error(Errc::AliasRisk, "band limit " + std::to_string(*recording.band_limit_hz) +
                                     " Hz is not below the decimated Nyquist " + std::to_string(new_rate / 2.0) +
                                     " Hz");
  Recording out;
  out.sample_rate_hz = new_rate;
  out.channels = recording.channels;
  out.band_limit_hz = recording.band_limit_hz;
  const Eigen::Index n_out = (recording.n_samples() + factor - 1) / factor;
  out.samples.resize(n_out, recording.n_channels());
  for (Eigen::Index i = 0; i < n_out; ++i) out.samples.row(i) = recording.samples.row(i * factor);
  out.events = recording.events;
  for (auto& e : out.events) e.onset_sample /= factor;
  return out;
}

std::vector<Epoch> segment(const Recording& recording, double window_seconds) {
  if (!(window_seconds > 0.0)) throw Error(Errc::ConfigError, "window_seconds must be positive");
  const auto window = static_cast<Eigen::Index>(std::llround(window_seconds * recording.sample_rate_hz));
  if (window < 1) throw Error(Errc::ConfigError, "window shorter than one sample");
  std::vector<Epoch> epochs;
  epochs.reserve(recording.events.size());
  for (std::size_t i = 0; i < recording.events.size(); ++i) {
    const auto& e = recording.events[i];
    if (e.onset_sample < 0 || e.onset_sample + window > recording.n_samples()) {
      throw Error(Errc::WindowOutOfRange, "event " + std::to_string(i) + " (question " + e.question_id +
                                              ", option " + option_char(e.option) + ", onset " +
                                              std::to_string(e.onset_sample) + ") window does not fit");
    }
    Epoch ep;
    ep.question_id = e.question_id;
    ep.option = e.option;
    ep.is_target = e.is_target;
    ep.data = recording.samples.middleRows(e.onset_sample, window);
    ep.effective_rate_hz = recording.sample_rate_hz;
    epochs.push_back(std::move(ep));
  }
  return epochs;
}

FeatureVector features(const Epoch& epoch, bool standardize) {
  FeatureVector fv;
  fv.question_id = epoch.question_id;
  fv.option = epoch.option;
  // Column-major storage of [samples x channels] is already channel-major.
  fv.values = epoch.data.reshaped();
  if (standardize && fv.values.size() > 0) {
    const double mean = fv.values.mean();
    fv.values.array() -= mean;
    const double sd = std::sqrt(fv.values.squaredNorm() / static_cast<double>(fv.values.size()));
    if (sd > 0.0) {
      fv.values /= sd;
    } else {
      fv.values.setZero();
    }
  }
  return fv;
}

Eigen::VectorXd band_power(const Epoch& epoch, double band_low_hz, double band_high_hz) {
  const double fs = epoch.effective_rate_hz;
  const double tol = 1e-9 * fs;
  if (!(band_low_hz >= 0.0) || !(band_low_hz < band_high_hz) || !(band_high_hz <= fs / 2.0 + tol))
    throw Error(Errc::InvalidBand, "band must satisfy 0 <= low < high <= rate/2");
  const Eigen::Index n = epoch.data.rows();
  Eigen::VectorXd power = Eigen::VectorXd::Zero(epoch.data.cols());
  if (n == 0) return power;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double freq = static_cast<double>(std::min(k, n - k)) * fs / static_cast<double>(n);
    if (freq < band_low_hz - tol || freq > band_high_hz + tol) continue;
    for (Eigen::Index c = 0; c < epoch.data.cols(); ++c) {
      std::complex<double> acc(0.0, 0.0);
      for (Eigen::Index t = 0; t < n; ++t) {
        const double phase = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
        acc += epoch.data(t, c) * std::polar(1.0, phase);
      }
      power[c] += std::norm(acc) / static_cast<double>(n);
    }
  }
  return power;
}

Recording preprocess(const Recording& raw, const PipelineSpec& spec) {
  const auto coeffs = design_bandpass(spec.filter, raw.sample_rate_hz);
  return decimate(apply_filter(coeffs, raw), spec.decimation);
}

}  // namespace mcqbci
