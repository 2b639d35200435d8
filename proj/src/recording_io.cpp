#include "mcqbci/recording_io.hpp"

#include "mcqbci/error.hpp"

#include <fstream>
#include <sstream>

namespace mcqbci {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw Error(Errc::SchemaError, "missing field " + path + key);
  return obj.at(key);
}

double require_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw Error(Errc::SchemaError, path + " must be a number");
  return v.get<double>();
}

}  // namespace

json recording_to_json(const Recording& recording) {
  json doc;
  doc["sample_rate_hz"] = recording.sample_rate_hz;
  doc["channels"] = recording.channels;
  json rows = json::array();
  for (Eigen::Index i = 0; i < recording.n_samples(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < recording.n_channels(); ++c) row.push_back(recording.samples(i, c));
    rows.push_back(std::move(row));
  }
  doc["samples"] = std::move(rows);
  json events = json::array();
  for (const auto& e : recording.events) {
    json ev{{"onset_sample", e.onset_sample},
            {"question_id", e.question_id},
            {"option", std::string(1, option_char(e.option))}};
    if (e.is_target) ev["is_target"] = *e.is_target;
    events.push_back(std::move(ev));
  }
  doc["events"] = std::move(events);
  if (recording.band_limit_hz) doc["band_limit_hz"] = *recording.band_limit_hz;
  return doc;
}

Recording recording_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(Errc::SchemaError, "recording must be a JSON object");
  Recording r;
  r.sample_rate_hz = require_number(require(doc, "sample_rate_hz", ""), "sample_rate_hz");
  const auto& channels = require(doc, "channels", "");
  if (!channels.is_array()) throw Error(Errc::SchemaError, "channels must be an array");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (!channels[i].is_string())
      throw Error(Errc::SchemaError, "channels[" + std::to_string(i) + "] must be a string");
    r.channels.push_back(channels[i].get<std::string>());
  }
  const auto& rows = require(doc, "samples", "");
  if (!rows.is_array()) throw Error(Errc::SchemaError, "samples must be an array");
  const auto n_ch = static_cast<Eigen::Index>(r.channels.size());
  r.samples.resize(static_cast<Eigen::Index>(rows.size()), n_ch);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string path = "samples[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || static_cast<Eigen::Index>(rows[i].size()) != n_ch)
      throw Error(Errc::SchemaError, path + " must be an array of " + std::to_string(n_ch) + " numbers");
    for (Eigen::Index c = 0; c < n_ch; ++c) {
      r.samples(static_cast<Eigen::Index>(i), c) =
          require_number(rows[i][static_cast<std::size_t>(c)], path + "[" + std::to_string(c) + "]");
    }
  }
  const auto& events = require(doc, "events", "");
  if (!events.is_array()) throw Error(Errc::SchemaError, "events must be an array");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string path = "events[" + std::to_string(i) + "].";
    const auto& ev = events[i];
    StimulusEvent e;
    const auto& onset = require(ev, "onset_sample", path);
    if (!onset.is_number_integer()) throw Error(Errc::SchemaError, path + "onset_sample must be an integer");
    e.onset_sample = onset.get<std::int64_t>();
    const auto& qid = require(ev, "question_id", path);
    if (!qid.is_string()) throw Error(Errc::SchemaError, path + "question_id must be a string");
    e.question_id = qid.get<std::string>();
    const auto& opt = require(ev, "option", path);
    const auto parsed = opt.is_string() ? parse_option(opt.get<std::string>()) : std::nullopt;
    if (!parsed) throw Error(Errc::SchemaError, path + "option must be one of A, B, C, D");
    e.option = *parsed;
    if (ev.contains("is_target")) {
      if (!ev["is_target"].is_boolean()) throw Error(Errc::SchemaError, path + "is_target must be a boolean");
      e.is_target = ev["is_target"].get<bool>();
    }
    r.events.push_back(std::move(e));
  }
  if (doc.contains("band_limit_hz")) r.band_limit_hz = require_number(doc["band_limit_hz"], "band_limit_hz");
  r.validate();
  return r;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::SchemaError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
  write_text_file(doc.dump(2) + "\n", path);
}

Recording load_recording(const std::filesystem::path& path) { return recording_from_json(read_json_file(path)); }

void save_recording(const Recording& recording, const std::filesystem::path& path) {
  write_json_file(recording_to_json(recording), path);
}

}  // namespace mcqbci
