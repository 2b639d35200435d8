#pragma once

#include "mcqbci/signal.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace mcqbci {

nlohmann::json recording_to_json(const Recording& recording);
Recording recording_from_json(const nlohmann::json& doc);

Recording load_recording(const std::filesystem::path& path);
void save_recording(const Recording& recording, const std::filesystem::path& path);

// Shared file helpers. Output is dump(2) of a sorted-key document plus a
// trailing newline, so equal documents give equal bytes.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);
void write_text_file(const std::string& text, const std::filesystem::path& path);

}  // namespace mcqbci
