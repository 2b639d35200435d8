#pragma once

#include "mcqbci/lda.hpp"
#include "mcqbci/signal.hpp"
#include "mcqbci/synthgen.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mcqbci {

// Every tunable of the pipeline as one flat document. Precedence is
// defaults < config file < command-line overrides.
struct RunConfig {
  PipelineSpec pipeline;
  SynthConfig synth;
  double shrinkage = 1e-3;
  SbWeighting sb_weighting = SbWeighting::paper_unweighted;
  int n_target = 50;
  int n_nontarget = 150;
  std::string student_id = "student";
  std::uint64_t seed = 0;

  // Sets one key from its textual value. ConfigError on unknown keys or
  // unparsable values.
  void set(std::string_view key, std::string_view value);
  void merge_json(const nlohmann::json& flat);
  void merge_file(const std::filesystem::path& path);

  // Checks every module precondition up front; ConfigError names the field.
  void validate() const;

  nlohmann::json to_json() const;

  // synth with the shared seed and window folded in.
  SynthConfig synth_config() const;

  static std::vector<std::string> keys();
};

}  // namespace mcqbci
