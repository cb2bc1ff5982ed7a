#include "emaviz/ema/response.hpp"

namespace emaviz::ema {

std::vector<ValidationError> validate_response(const SurveyDefinition& def, const EmaResponse& r) {
  std::vector<ValidationError> errors;
  for (const auto& [id, value] : r.answers) {
    const Question* q = def.find(id);
    if (!q) {
      errors.push_back({id, Violation::unknown_qid, "no such question in " + def.version()});
      continue;
    }
    if (!q->asked_in.contains(r.window)) {
      errors.push_back({id, Violation::wrong_window,
                        "not asked in the " + std::string(to_string(r.window)) + " survey"});
      continue;
    }
    if (auto bad = check_value(q->answer, value)) {
      errors.push_back({id, bad->first, std::move(bad->second)});
    }
  }
  return errors;
}

}  // namespace emaviz::ema
