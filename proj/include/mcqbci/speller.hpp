#pragma once

#include "mcqbci/lda.hpp"
#include "mcqbci/signal.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mcqbci {

// Four-option flash plan for one question: R blocks, each a permutation of
// A..D.
struct FlashSchedule {
  std::string question_id;
  std::vector<std::array<Option, 4>> blocks;
  int repetitions = 0;
  std::uint64_t seed = 0;
};

// Fisher-Yates shuffles driven by mix_seed(seed, question_id).
FlashSchedule make_schedule(const std::string& question_id, int repetitions, std::uint64_t seed);

struct OptionScores {
  std::array<std::vector<double>, 4> scores;  // sorted ascending per option
  std::array<double, 4> aggregate{};
};

OptionScores aggregate(std::span<const std::pair<Option, double>> scores);

struct AnswerSelection {
  std::string question_id;
  Option selected = Option::A;
  double margin = 0.0;
  bool tie = false;

  bool operator==(const AnswerSelection&) const = default;
};

// argmax over aggregates; exact ties go to the earliest letter.
AnswerSelection select(const OptionScores& option_scores, std::string question_id = {});

// features -> score -> aggregate -> select for one question's epochs.
AnswerSelection answer_question(const LdaModel& model, std::span<const Epoch> epochs, bool standardize);

}  // namespace mcqbci
