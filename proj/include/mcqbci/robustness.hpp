#pragma once

#include "mcqbci/exam.hpp"
#include "mcqbci/lda.hpp"
#include "mcqbci/rng.hpp"
#include "mcqbci/signal.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mcqbci {

// x -> (1 - a) x + a e with a = level/100 and e white Gaussian rescaled so
// its RMS equals the epoch RMS (1 uV for a silent epoch). Level 0 returns
// the epoch untouched and draws nothing.
Epoch inject_noise(const Epoch& epoch, int level_pct, Rng& noise_stream);

struct SweepReport {
  std::vector<int> levels;
  std::vector<double> accuracy_pct;
  double clean_accuracy_pct = 0.0;
  int trials_per_level = 0;
  std::uint64_t seed = 0;
};

// Stream for one (level, trial) cell: mix_seed(seed, level * 1e6 + trial).
std::uint64_t sweep_cell_seed(std::uint64_t seed, int level, int trial) noexcept;

// Model trained clean; noise goes into every evaluation epoch. Accuracy is
// the percent of questions answered correctly, pooled over sessions and
// trials.
SweepReport noise_sweep(const LdaModel& model, const Exam& exam, std::span<const Recording> sessions,
                        std::span<const int> levels, int trials, std::uint64_t seed, const PipelineSpec& pipeline);

// "0..100" (step 1), "0..100:5", or "0,50,100".
std::vector<int> parse_levels(std::string_view spec);

std::string report_csv(const SweepReport& report);
void write_report_csv(const SweepReport& report, const std::filesystem::path& path);

struct CsvCurve {
  std::vector<int> levels;
  std::vector<double> accuracy_pct;
};
CsvCurve parse_report_csv(std::string_view text);

std::string render_curve_svg(const SweepReport& report);
void write_curve_svg(const SweepReport& report, const std::filesystem::path& path);

}  // namespace mcqbci
