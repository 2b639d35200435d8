#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcqbci {

enum class Errc {
  InvalidBand,
  AliasRisk,
  WindowOutOfRange,
  EmptyClass,
  SingularWithin,
  DegenerateClasses,
  DimensionMismatch,
  MissingOption,
  SchemaError,
  DuplicateQuestionId,
  QuestionMismatch,
  MissingQuestionEpochs,
  ConfigError,
  IoError,
};

constexpr std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidBand: return "InvalidBand";
    case Errc::AliasRisk: return "AliasRisk";
    case Errc::WindowOutOfRange: return "WindowOutOfRange";
    case Errc::EmptyClass: return "EmptyClass";
    case Errc::SingularWithin: return "SingularWithin";
    case Errc::DegenerateClasses: return "DegenerateClasses";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::MissingOption: return "MissingOption";
    case Errc::SchemaError: return "SchemaError";
    case Errc::DuplicateQuestionId: return "DuplicateQuestionId";
    case Errc::QuestionMismatch: return "QuestionMismatch";
    case Errc::MissingQuestionEpochs: return "MissingQuestionEpochs";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above. The
// message is prefixed with the code name so it is greppable in CLI output.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mcqbci
