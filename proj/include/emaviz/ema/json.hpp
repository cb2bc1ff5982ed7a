#pragma once

// JSON wire format for survey definitions, responses and weeks. Field names are stable;
// see docs/schemas/ for the documents.

#include <json.hpp>

#include "emaviz/core/time.hpp"
#include "emaviz/ema/response.hpp"
#include "emaviz/ema/survey.hpp"
#include "emaviz/ema/week.hpp"

namespace emaviz {

void to_json(nlohmann::json& j, const ClockTime& t);
void from_json(const nlohmann::json& j, ClockTime& t);
void to_json(nlohmann::json& j, const Timestamp& t);
void from_json(const nlohmann::json& j, Timestamp& t);

}  // namespace emaviz

namespace nlohmann {

template <>
struct adl_serializer<absl::CivilDay> {
  static void to_json(json& j, const absl::CivilDay& d) { j = emaviz::format_date(d); }
  static void from_json(const json& j, absl::CivilDay& d) {
    d = emaviz::parse_date(j.get<std::string>());
  }
};

}  // namespace nlohmann

namespace emaviz::ema {

void to_json(nlohmann::json& j, Facet f);
void from_json(const nlohmann::json& j, Facet& f);
void to_json(nlohmann::json& j, SurveyWindow w);
void from_json(const nlohmann::json& j, SurveyWindow& w);
void to_json(nlohmann::json& j, const WindowSet& ws);
void from_json(const nlohmann::json& j, WindowSet& ws);

/// {"type": "quant-sequential", "min": 0, "max": 10}, {"type": "categorical", "labels": [...],
/// "multi": true}, ...
void to_json(nlohmann::json& j, const AnswerKind& k);
void from_json(const nlohmann::json& j, AnswerKind& k);

/// Single-key tagged objects: {"magnitude": 7}, {"clock": "23:00"}, {"level": 2},
/// {"categories": ["headache"]}, {"flag": true}, {"text": "..."}.
void to_json(nlohmann::json& j, const AnswerValue& v);
void from_json(const nlohmann::json& j, AnswerValue& v);

void to_json(nlohmann::json& j, const Question& q);
void from_json(const nlohmann::json& j, Question& q);
void to_json(nlohmann::json& j, const EmaResponse& r);
void from_json(const nlohmann::json& j, EmaResponse& r);
void to_json(nlohmann::json& j, const WindowTimes& w);
void from_json(const nlohmann::json& j, WindowTimes& w);

nlohmann::json survey_to_json(const SurveyDefinition& def);
SurveyDefinition survey_from_json(const nlohmann::json& j);

/// Accepts either a bare array of responses or {"responses": [...]}.
std::vector<EmaResponse> responses_from_json(const nlohmann::json& j);
nlohmann::json responses_to_json(std::span<const EmaResponse> responses);

nlohmann::json week_to_json(const WeekDataset& week);

}  // namespace emaviz::ema
