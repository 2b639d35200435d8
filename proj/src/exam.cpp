#include "mcqbci/exam.hpp"

#include "mcqbci/error.hpp"
#include "mcqbci/recording_io.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mcqbci {

using nlohmann::json;

void Exam::validate() const {
  if (exam_id.empty()) throw Error(Errc::SchemaError, "exam_id must be nonempty");
  if (questions.empty()) throw Error(Errc::SchemaError, "questions must contain at least one question");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const auto& q = questions[i];
    const std::string path = "questions[" + std::to_string(i) + "]";
    if (q.question_id.empty()) throw Error(Errc::SchemaError, path + ".question_id must be nonempty");
    for (Option o : kAllOptions) {
      if (q.options[option_index(o)].empty())
        throw Error(Errc::SchemaError, path + ".options." + option_char(o) + " must be nonempty");
    }
    if (!ids.insert(q.question_id).second)
      throw Error(Errc::DuplicateQuestionId, "question_id '" + q.question_id + "' appears more than once");
  }
}

json exam_to_json(const Exam& exam) {
  json questions = json::array();
  for (const auto& q : exam.questions) {
    json options;
    for (Option o : kAllOptions) options[std::string(1, option_char(o))] = q.options[option_index(o)];
    questions.push_back({{"question_id", q.question_id},
                         {"stem", q.stem},
                         {"options", std::move(options)},
                         {"answer", std::string(1, option_char(q.answer))}});
  }
  return {{"exam_id", exam.exam_id}, {"title", exam.title}, {"questions", std::move(questions)}};
}

namespace {

std::string string_field(const json& obj, const std::string& key, const std::string& path) {
  const std::string where = path.empty() ? key : path + "." + key;
  if (!obj.is_object() || !obj.contains(key)) throw Error(Errc::SchemaError, "missing field " + where);
  if (!obj.at(key).is_string()) throw Error(Errc::SchemaError, where + " must be a string");
  return obj.at(key).get<std::string>();
}

}  // namespace

Exam exam_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(Errc::SchemaError, "exam must be a JSON object");
  Exam exam;
  exam.exam_id = string_field(doc, "exam_id", "");
  exam.title = string_field(doc, "title", "");
  if (!doc.contains("questions") || !doc["questions"].is_array())
    throw Error(Errc::SchemaError, "questions must be an array");
  const auto& qs = doc["questions"];
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const std::string path = "questions[" + std::to_string(i) + "]";
    const auto& qj = qs[i];
    if (!qj.is_object()) throw Error(Errc::SchemaError, path + " must be an object");
    Question q;
    q.question_id = string_field(qj, "question_id", path);
    q.stem = string_field(qj, "stem", path);
    if (!qj.contains("options") || !qj["options"].is_object())
      throw Error(Errc::SchemaError, path + ".options must be an object");
    for (Option o : kAllOptions) {
      q.options[option_index(o)] = string_field(qj["options"], std::string(1, option_char(o)), path + ".options");
    }
    const auto answer = parse_option(string_field(qj, "answer", path));
    if (!answer) throw Error(Errc::SchemaError, path + ".answer must be one of A, B, C, D");
    q.answer = *answer;
    exam.questions.push_back(std::move(q));
  }
  exam.validate();
  return exam;
}

Exam load_exam(const std::filesystem::path& path) { return exam_from_json(read_json_file(path)); }

void save_exam(const Exam& exam, const std::filesystem::path& path) {
  exam.validate();
  write_json_file(exam_to_json(exam), path);
}

ExamStore::ExamStore(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw Error(Errc::IoError, "cannot create exam store at " + root_.string());
}

std::filesystem::path ExamStore::path_for(const std::string& exam_id) const {
  if (exam_id.empty() || exam_id.find_first_of("/\\") != std::string::npos || exam_id == "." || exam_id == "..")
    throw Error(Errc::SchemaError, "exam_id '" + exam_id + "' is not usable as a file name");
  return root_ / (exam_id + ".json");
}

std::filesystem::path ExamStore::put(const Exam& exam) const {
  auto path = path_for(exam.exam_id);
  save_exam(exam, path);
  return path;
}

Exam ExamStore::get(const std::string& exam_id) const {
  const auto path = path_for(exam_id);
  if (!std::filesystem::exists(path)) throw Error(Errc::IoError, "exam '" + exam_id + "' not found");
  return load_exam(path);
}

bool ExamStore::contains(const std::string& exam_id) const { return std::filesystem::exists(path_for(exam_id)); }

std::vector<std::string> ExamStore::exam_ids() const {
  std::vector<std::string> ids;
  for (const auto& entry : std::filesystem::directory_iterator(root_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

SessionResult grade(const Exam& exam, std::vector<AnswerSelection> selections, std::string student_id) {
  if (selections.size() != exam.questions.size())
    throw Error(Errc::QuestionMismatch, std::to_string(selections.size()) + " selections for " +
                                            std::to_string(exam.questions.size()) + " questions");
  SessionResult result;
  result.exam_id = exam.exam_id;
  result.student_id = std::move(student_id);
  for (std::size_t i = 0; i < selections.size(); ++i) {
    const auto& q = exam.questions[i];
    if (selections[i].question_id != q.question_id)
      throw Error(Errc::QuestionMismatch, "selection " + std::to_string(i) + " is for '" +
                                              selections[i].question_id + "', expected '" + q.question_id + "'");
    if (selections[i].selected == q.answer) ++result.n_correct;
  }
  result.selections = std::move(selections);
  result.grade_percent = 100.0 * result.n_correct / static_cast<double>(exam.questions.size());
  return result;
}

json session_result_to_json(const SessionResult& result) {
  json selections = json::array();
  for (const auto& s : result.selections) {
    selections.push_back({{"question_id", s.question_id},
                          {"selected", std::string(1, option_char(s.selected))},
                          {"margin", s.margin},
                          {"tie", s.tie}});
  }
  return {{"exam_id", result.exam_id},
          {"student_id", result.student_id},
          {"selections", std::move(selections)},
          {"grade_percent", result.grade_percent},
          {"n_correct", result.n_correct}};
}

void save_session_result(const SessionResult& result, const std::filesystem::path& path) {
  write_json_file(session_result_to_json(result), path);
}

std::vector<std::vector<Epoch>> question_epochs(const Exam& exam, const Recording& recording,
                                                const PipelineSpec& pipeline) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < exam.questions.size(); ++i) index.emplace(exam.questions[i].question_id, i);
  for (const auto& e : recording.events) {
    if (!index.contains(e.question_id))
      throw Error(Errc::QuestionMismatch, "recording has events for question '" + e.question_id +
                                              "' which is not in exam '" + exam.exam_id + "'");
  }
  std::vector<std::vector<Epoch>> grouped(exam.questions.size());
  if (!recording.events.empty()) {
    for (auto& epoch : segment(preprocess(recording, pipeline), pipeline.window_s)) {
      grouped[index.at(epoch.question_id)].push_back(std::move(epoch));
    }
  }
  for (std::size_t i = 0; i < grouped.size(); ++i) {
    if (grouped[i].empty())
      throw Error(Errc::MissingQuestionEpochs, "no epochs for question '" + exam.questions[i].question_id + "'");
  }
  return grouped;
}

SessionResult run_session(const Exam& exam, const LdaModel& model, const Recording& recording,
                          const SessionConfig& config) {
  const auto grouped = question_epochs(exam, recording, config.pipeline);
  std::vector<AnswerSelection> selections;
  selections.reserve(grouped.size());
  for (const auto& epochs : grouped) selections.push_back(answer_question(model, epochs, config.pipeline.standardize));
  return grade(exam, std::move(selections), config.student_id);
}

}  // namespace mcqbci
