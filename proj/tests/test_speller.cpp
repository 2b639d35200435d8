#include "mcqbci/error.hpp"
#include "mcqbci/speller.hpp"
#include "mcqbci/synthgen.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace mcqbci;
using mcqbci::testing::make_exam;

namespace {

OptionScores with_aggregates(std::array<double, 4> agg) {
  OptionScores s;
  s.aggregate = agg;
  for (std::size_t i = 0; i < 4; ++i) s.scores[i] = {agg[i]};
  return s;
}

// Fraction of questions answered with their key, given a model trained at
// the same noise level.
double speller_accuracy(int repetitions, double noise, int n_questions, std::uint64_t seed) {
  SynthConfig sc;
  sc.background_noise_uv_rms = noise;
  sc.repetitions = repetitions;
  sc.seed = seed;
  PipelineSpec ps;
  const auto model = fit(gen_training_set(sc, ps, 50, 150), 1e-3);
  const auto exam = make_exam(n_questions);
  const auto result = run_session(exam, model, gen_session(exam, answer_key(exam), sc), {ps, "s"});
  return result.grade_percent;
}

}  // namespace

TEST_CASE("make_schedule: permutation blocks, deterministic in seed") {
  const auto one = make_schedule("q1", 1, 42);
  REQUIRE(one.blocks.size() == 1);
  std::set<Option> seen(one.blocks[0].begin(), one.blocks[0].end());
  CHECK(seen.size() == 4);

  const auto a = make_schedule("q7", 10, 5);
  const auto b = make_schedule("q7", 10, 5);
  CHECK(a.blocks == b.blocks);
  CHECK(a.repetitions == 10);
  for (const auto& block : a.blocks) {
    auto sorted = block;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == kAllOptions);
  }
  CHECK(make_schedule("q8", 10, 5).blocks != a.blocks);
  CHECK(make_schedule("q7", 10, 6).blocks != a.blocks);
  CHECK_THROWS_AS(make_schedule("q1", 0, 1), Error);
}

TEST_CASE("make_schedule: first position is uniform") {
  const auto s = make_schedule("uniform", 1000, 2718);
  std::array<int, 4> first{};
  for (const auto& block : s.blocks) ++first[option_index(block[0])];
  for (int count : first) {
    CHECK(count >= 200);
    CHECK(count <= 300);
  }
}

TEST_CASE("aggregate averages per option") {
  const std::vector<std::pair<Option, double>> basic = {
      {Option::A, 1.0}, {Option::B, 0.0}, {Option::C, 0.0}, {Option::D, 0.0}};
  const auto agg = aggregate(basic);
  CHECK(agg.aggregate == std::array<double, 4>{1.0, 0.0, 0.0, 0.0});

  std::vector<std::pair<Option, double>> two = {
      {Option::A, 1.0}, {Option::A, 3.0}, {Option::B, 0.1}, {Option::C, 0.2}, {Option::D, 0.3}};
  CHECK(aggregate(two).aggregate[0] == 2.0);

  std::vector<std::pair<Option, double>> many;
  Rng rng(4);
  for (int i = 0; i < 40; ++i) many.emplace_back(kAllOptions[static_cast<std::size_t>(i % 4)], rng.normal() * 1e3);
  const auto ref = aggregate(many).aggregate;
  for (int shuffle = 0; shuffle < 10; ++shuffle) {
    for (std::size_t i = many.size() - 1; i > 0; --i) std::swap(many[i], many[rng.below(i + 1)]);
    CHECK(aggregate(many).aggregate == ref);
  }
}

TEST_CASE("aggregate requires every option") {
  const std::vector<std::pair<Option, double>> missing = {{Option::A, 1.0}, {Option::B, 0.0}, {Option::D, 0.0}};
  try {
    aggregate(missing);
    FAIL("expected MissingOption");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingOption);
    CHECK(std::string(e.what()).find("option C") != std::string::npos);
  }
}

TEST_CASE("select picks the argmax with alphabetical ties") {
  auto s = select(with_aggregates({0.9, 0.1, 0.1, 0.1}), "q1");
  CHECK(s.selected == Option::A);
  CHECK(s.margin == doctest::Approx(0.8));
  CHECK_FALSE(s.tie);
  CHECK(s.question_id == "q1");

  s = select(with_aggregates({0.5, 0.5, 0.1, 0.1}));
  CHECK(s.selected == Option::A);
  CHECK(s.margin == 0.0);
  CHECK(s.tie);

  s = select(with_aggregates({0.1, 0.1, 0.1, 0.7}));
  CHECK(s.selected == Option::D);

  s = select(with_aggregates({0.1, 0.6, 0.1, 0.6}));
  CHECK(s.selected == Option::B);
  CHECK(s.tie);
}

TEST_CASE("select is invariant under increasing transforms") {
  Rng rng(10);
  for (int i = 0; i < 200; ++i) {
    std::array<double, 4> agg{};
    for (auto& v : agg) v = rng.normal();
    std::array<double, 4> mapped{};
    for (std::size_t k = 0; k < 4; ++k) mapped[k] = 3.0 * std::exp(agg[k]) + std::atan(agg[k]) - 1.0;
    CHECK(select(with_aggregates(agg)).selected == select(with_aggregates(mapped)).selected);
  }
}

TEST_CASE("answer_question on a noise-free synthetic question") {
  SynthConfig sc;
  sc.background_noise_uv_rms = 0.0;
  sc.seed = 3;
  PipelineSpec ps;
  const auto model = fit(gen_training_set(sc, ps, 10, 30), 1e-3);
  const auto exam = make_exam(1);
  for (Option target : kAllOptions) {
    const auto rec = gen_session(exam, {{"q1", target}}, sc);
    const auto epochs = segment(preprocess(rec, ps), ps.window_s);
    const auto sel = answer_question(model, epochs, ps.standardize);
    CHECK(sel.selected == target);
    CHECK_FALSE(sel.tie);
    CHECK(sel.question_id == "q1");

    auto shuffled = epochs;
    std::reverse(shuffled.begin(), shuffled.end());
    std::swap(shuffled[3], shuffled[17]);
    CHECK(answer_question(model, shuffled, ps.standardize) == sel);
    CHECK(answer_question(model, epochs, ps.standardize) == sel);
  }
}

TEST_CASE("answer_question with a zero projection ties to A") {
  LdaModel model;
  model.projection = Eigen::MatrixXd::Zero(60, 1);
  model.bias = 0.25;
  model.class_labels = {"nontarget", "target"};
  model.class_means_projected = {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)};
  std::vector<Epoch> epochs;
  Rng rng(2);
  for (Option o : kAllOptions) {
    Epoch e;
    e.question_id = "q";
    e.option = o;
    e.data.resize(15, 4);
    for (Eigen::Index i = 0; i < e.data.size(); ++i) e.data.data()[i] = rng.normal();
    epochs.push_back(e);
  }
  const auto sel = answer_question(model, epochs, true);
  CHECK(sel.tie);
  CHECK(sel.selected == Option::A);
  CHECK(sel.margin == 0.0);
}

TEST_CASE("accuracy does not drop with more repetitions") {
  std::vector<double> acc;
  for (int r : {1, 5, 10}) acc.push_back(speller_accuracy(r, 12.0, 200, 555));
  MESSAGE("R=1/5/10 accuracy: " << acc[0] << " " << acc[1] << " " << acc[2]);
  int inversions = 0;
  for (std::size_t i = 1; i < acc.size(); ++i) {
    if (acc[i] < acc[i - 1]) {
      ++inversions;
      CHECK(acc[i - 1] - acc[i] <= 2.0);
    }
  }
  CHECK(inversions <= 1);
  CHECK(acc[0] < 100.0);
}
