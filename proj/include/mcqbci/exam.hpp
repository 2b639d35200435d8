#pragma once

#include "mcqbci/lda.hpp"
#include "mcqbci/signal.hpp"
#include "mcqbci/speller.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mcqbci {

struct Question {
  std::string question_id;
  std::string stem;
  std::array<std::string, 4> options;  // indexed by Option
  Option answer = Option::A;

  bool operator==(const Question&) const = default;
};

struct Exam {
  std::string exam_id;
  std::string title;
  std::vector<Question> questions;

  bool operator==(const Exam&) const = default;

  // SchemaError / DuplicateQuestionId.
  void validate() const;
};

nlohmann::json exam_to_json(const Exam& exam);
Exam exam_from_json(const nlohmann::json& doc);
Exam load_exam(const std::filesystem::path& path);
void save_exam(const Exam& exam, const std::filesystem::path& path);

// Directory of <exam_id>.json files.
class ExamStore {
 public:
  explicit ExamStore(std::filesystem::path root);

  std::filesystem::path put(const Exam& exam) const;
  Exam get(const std::string& exam_id) const;
  bool contains(const std::string& exam_id) const;
  std::vector<std::string> exam_ids() const;

 private:
  std::filesystem::path path_for(const std::string& exam_id) const;
  std::filesystem::path root_;
};

struct SessionResult {
  std::string exam_id;
  std::string student_id;
  std::vector<AnswerSelection> selections;
  double grade_percent = 0.0;
  int n_correct = 0;
};

SessionResult grade(const Exam& exam, std::vector<AnswerSelection> selections, std::string student_id = "student");

nlohmann::json session_result_to_json(const SessionResult& result);
void save_session_result(const SessionResult& result, const std::filesystem::path& path);

struct SessionConfig {
  PipelineSpec pipeline;
  std::string student_id = "student";
};

// Preprocesses and segments a recording, then groups epochs per exam
// question in exam order. Throws QuestionMismatch for events naming unknown
// questions and MissingQuestionEpochs for questions with no events.
std::vector<std::vector<Epoch>> question_epochs(const Exam& exam, const Recording& recording,
                                                const PipelineSpec& pipeline);

SessionResult run_session(const Exam& exam, const LdaModel& model, const Recording& recording,
                          const SessionConfig& config);

}  // namespace mcqbci
