#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "emaviz/core/time.hpp"
#include "emaviz/ema/answer.hpp"
#include "emaviz/ema/survey.hpp"

namespace emaviz::ema {

struct EmaResponse {
  std::string participant;
  Date date;
  SurveyWindow window = SurveyWindow::morning;
  Timestamp submitted_at;
  /// Possibly partial; an absent qid means the question was skipped.
  std::map<std::string, AnswerValue, std::less<>> answers;
  int revision = 1;

  const AnswerValue* answer(std::string_view qid) const {
    auto it = answers.find(qid);
    return it == answers.end() ? nullptr : &it->second;
  }

  template <class T>
  const T* get(std::string_view qid) const {
    const auto* v = answer(qid);
    return v ? std::get_if<T>(v) : nullptr;
  }

  friend bool operator==(const EmaResponse&, const EmaResponse&) = default;
};

struct ValidationError {
  std::string qid;
  Violation violation;
  std::string message;
};

/// Empty result means the response is valid. Missing answers are never an error.
std::vector<ValidationError> validate_response(const SurveyDefinition& def, const EmaResponse& r);

}  // namespace emaviz::ema
