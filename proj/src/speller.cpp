#include "mcqbci/speller.hpp"

#include "mcqbci/error.hpp"
#include "mcqbci/rng.hpp"

#include <algorithm>
#include <limits>

namespace mcqbci {

FlashSchedule make_schedule(const std::string& question_id, int repetitions, std::uint64_t seed) {
  if (repetitions < 1) throw Error(Errc::ConfigError, "repetitions must be >= 1");
  FlashSchedule schedule;
  schedule.question_id = question_id;
  schedule.repetitions = repetitions;
  schedule.seed = seed;
  Rng rng(mix_seed(seed, question_id));
  for (int r = 0; r < repetitions; ++r) {
    std::array<Option, 4> block = kAllOptions;
    for (std::size_t i = block.size() - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng.below(i + 1));
      std::swap(block[i], block[j]);
    }
    schedule.blocks.push_back(block);
  }
  return schedule;
}

OptionScores aggregate(std::span<const std::pair<Option, double>> scores) {
  OptionScores out;
  for (const auto& [option, value] : scores) out.scores[option_index(option)].push_back(value);
  for (Option o : kAllOptions) {
    auto& list = out.scores[option_index(o)];
    if (list.empty()) throw Error(Errc::MissingOption, std::string("no scores for option ") + option_char(o));
    // Sorting makes the mean independent of arrival order, bit for bit.
    std::sort(list.begin(), list.end());
    double sum = 0.0;
    for (double v : list) sum += v;
    out.aggregate[option_index(o)] = sum / static_cast<double>(list.size());
  }
  return out;
}

AnswerSelection select(const OptionScores& option_scores, std::string question_id) {
  const auto& agg = option_scores.aggregate;
  std::size_t best = 0;
  for (std::size_t i = 1; i < agg.size(); ++i) {
    if (agg[i] > agg[best]) best = i;
  }
  double runner_up = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < agg.size(); ++i) {
    if (i != best) runner_up = std::max(runner_up, agg[i]);
  }
  AnswerSelection sel;
  sel.question_id = std::move(question_id);
  sel.selected = static_cast<Option>(best);
  sel.margin = agg[best] - runner_up;
  sel.tie = sel.margin == 0.0;
  return sel;
}

AnswerSelection answer_question(const LdaModel& model, std::span<const Epoch> epochs, bool standardize) {
  std::vector<std::pair<Option, double>> scores;
  scores.reserve(epochs.size());
  for (const auto& epoch : epochs) {
    scores.emplace_back(epoch.option, score(model, features(epoch, standardize).values));
  }
  return select(aggregate(scores), epochs.empty() ? std::string{} : epochs.front().question_id);
}

}  // namespace mcqbci
