#include "mcqbci/config.hpp"

#include "mcqbci/error.hpp"
#include "mcqbci/lda_io.hpp"
#include "mcqbci/recording_io.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>

namespace mcqbci {

namespace {

double to_double(std::string_view key, std::string_view text) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::ConfigError, std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  }
}

template <typename Int>
Int to_int(std::string_view key, std::string_view text) {
  Int v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw Error(Errc::ConfigError, std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  return v;
}

bool to_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw Error(Errc::ConfigError, std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

using Setter = std::function<void(RunConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"low_cut_hz", [](RunConfig& c, auto k, auto v) { c.pipeline.filter.low_cut_hz = to_double(k, v); }},
      {"high_cut_hz", [](RunConfig& c, auto k, auto v) { c.pipeline.filter.high_cut_hz = to_double(k, v); }},
      {"filter_order", [](RunConfig& c, auto k, auto v) { c.pipeline.filter.order = to_int<int>(k, v); }},
      {"decimation", [](RunConfig& c, auto k, auto v) { c.pipeline.decimation = to_int<int>(k, v); }},
      {"window_s", [](RunConfig& c, auto k, auto v) { c.pipeline.window_s = to_double(k, v); }},
      {"standardize", [](RunConfig& c, auto k, auto v) { c.pipeline.standardize = to_bool(k, v); }},
      {"shrinkage", [](RunConfig& c, auto k, auto v) { c.shrinkage = to_double(k, v); }},
      {"sb_weighting", [](RunConfig& c, auto, auto v) { c.sb_weighting = parse_weighting(v); }},
      {"n_target", [](RunConfig& c, auto k, auto v) { c.n_target = to_int<int>(k, v); }},
      {"n_nontarget", [](RunConfig& c, auto k, auto v) { c.n_nontarget = to_int<int>(k, v); }},
      {"student_id", [](RunConfig& c, auto, auto v) { c.student_id = std::string(v); }},
      {"seed", [](RunConfig& c, auto k, auto v) { c.seed = to_int<std::uint64_t>(k, v); }},
      {"sample_rate_hz", [](RunConfig& c, auto k, auto v) { c.synth.sample_rate_hz = to_double(k, v); }},
      {"n_channels", [](RunConfig& c, auto k, auto v) { c.synth.n_channels = to_int<int>(k, v); }},
      {"p300_amplitude_uv", [](RunConfig& c, auto k, auto v) { c.synth.p300_amplitude_uv = to_double(k, v); }},
      {"p300_latency_s", [](RunConfig& c, auto k, auto v) { c.synth.p300_latency_s = to_double(k, v); }},
      {"p300_width_s", [](RunConfig& c, auto k, auto v) { c.synth.p300_width_s = to_double(k, v); }},
      {"background_noise_uv_rms",
       [](RunConfig& c, auto k, auto v) { c.synth.background_noise_uv_rms = to_double(k, v); }},
      {"repetitions", [](RunConfig& c, auto k, auto v) { c.synth.repetitions = to_int<int>(k, v); }},
      {"isi_s", [](RunConfig& c, auto k, auto v) { c.synth.isi_s = to_double(k, v); }},
      {"lead_in_s", [](RunConfig& c, auto k, auto v) { c.synth.lead_in_s = to_double(k, v); }},
      {"question_gap_s", [](RunConfig& c, auto k, auto v) { c.synth.question_gap_s = to_double(k, v); }},
  };
  return table;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw Error(Errc::ConfigError, "unknown config key '" + std::string(key) + "'");
  it->second(*this, key, value);
}

void RunConfig::merge_json(const nlohmann::json& flat) {
  if (!flat.is_object()) throw Error(Errc::ConfigError, "config must be a flat JSON object");
  for (const auto& [key, value] : flat.items()) {
    if (value.is_string()) {
      set(key, value.get<std::string>());
    } else if (value.is_number() || value.is_boolean()) {
      set(key, value.dump());
    } else {
      throw Error(Errc::ConfigError, key + ": nested values are not allowed");
    }
  }
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(Errc::ConfigError, "config file not found: " + path.string());
  nlohmann::json doc;
  try {
    doc = read_json_file(path);
  } catch (const Error& e) {
    throw Error(Errc::ConfigError, e.what());
  }
  merge_json(doc);
}

void RunConfig::validate() const {
  const auto& f = pipeline.filter;
  const double fs = synth.sample_rate_hz;
  if (!(fs > 0.0)) throw Error(Errc::ConfigError, "sample_rate_hz: must be positive");
  if (f.order <= 0 || f.order % 2 != 0) throw Error(Errc::ConfigError, "filter_order: must be an even positive integer");
  if (!(f.low_cut_hz > 0.0)) throw Error(Errc::ConfigError, "low_cut_hz: must be positive");
  if (!(f.low_cut_hz < f.high_cut_hz)) throw Error(Errc::ConfigError, "high_cut_hz: must exceed low_cut_hz");
  if (!(f.high_cut_hz < fs / 2.0)) throw Error(Errc::ConfigError, "high_cut_hz: must be below sample_rate_hz/2");
  if (pipeline.decimation < 1) throw Error(Errc::ConfigError, "decimation: must be >= 1");
  if (pipeline.decimation > 1 && !(f.high_cut_hz < fs / pipeline.decimation / 2.0))
    throw Error(Errc::ConfigError, "high_cut_hz: must be below the decimated Nyquist rate (AliasRisk)");
  if (!(pipeline.window_s > 0.0)) throw Error(Errc::ConfigError, "window_s: must be positive");
  if (std::llround(pipeline.window_s * fs / pipeline.decimation) < 1)
    throw Error(Errc::ConfigError, "window_s: shorter than one decimated sample");
  if (!(shrinkage >= 0.0)) throw Error(Errc::ConfigError, "shrinkage: must be nonnegative");
  if (n_target < 2) throw Error(Errc::ConfigError, "n_target: must be at least 2");
  if (n_nontarget < 2) throw Error(Errc::ConfigError, "n_nontarget: must be at least 2");
  synth_config().validate();
}

SynthConfig RunConfig::synth_config() const {
  SynthConfig s = synth;
  s.seed = seed;
  s.window_s = pipeline.window_s;
  return s;
}

nlohmann::json RunConfig::to_json() const {
  return {{"low_cut_hz", pipeline.filter.low_cut_hz},
          {"high_cut_hz", pipeline.filter.high_cut_hz},
          {"filter_order", pipeline.filter.order},
          {"decimation", pipeline.decimation},
          {"window_s", pipeline.window_s},
          {"standardize", pipeline.standardize},
          {"shrinkage", shrinkage},
          {"sb_weighting", std::string(weighting_name(sb_weighting))},
          {"n_target", n_target},
          {"n_nontarget", n_nontarget},
          {"student_id", student_id},
          {"seed", seed},
          {"sample_rate_hz", synth.sample_rate_hz},
          {"n_channels", synth.n_channels},
          {"p300_amplitude_uv", synth.p300_amplitude_uv},
          {"p300_latency_s", synth.p300_latency_s},
          {"p300_width_s", synth.p300_width_s},
          {"background_noise_uv_rms", synth.background_noise_uv_rms},
          {"repetitions", synth.repetitions},
          {"isi_s", synth.isi_s},
          {"lead_in_s", synth.lead_in_s},
          {"question_gap_s", synth.question_gap_s}};
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& [k, _] : setters()) out.push_back(k);
  return out;
}

}  // namespace mcqbci
