#include "emaviz/ema/json.hpp"

#include <stdexcept>

namespace emaviz {

void to_json(nlohmann::json& j, const ClockTime& t) { j = t.str(); }
void from_json(const nlohmann::json& j, ClockTime& t) { t = ClockTime::parse(j.get<std::string>()); }
void to_json(nlohmann::json& j, const Timestamp& t) { j = t.str(); }
void from_json(const nlohmann::json& j, Timestamp& t) { t = Timestamp::parse(j.get<std::string>()); }

}  // namespace emaviz

namespace emaviz::ema {

using nlohmann::json;

void to_json(json& j, Facet f) { j = to_string(f); }
void from_json(const json& j, Facet& f) { f = parse_facet(j.get<std::string>()); }
void to_json(json& j, SurveyWindow w) { j = to_string(w); }
void from_json(const json& j, SurveyWindow& w) { w = parse_window(j.get<std::string>()); }

void to_json(json& j, const WindowSet& ws) {
  j = json::array();
  for (auto w : ws.list()) j.push_back(to_string(w));
}

void from_json(const json& j, WindowSet& ws) {
  ws = WindowSet{};
  for (const auto& w : j) ws.insert(parse_window(w.get<std::string>()));
}

void to_json(json& j, const AnswerKind& k) {
  j = json{{"type", kind_name(k)}};
  if (const auto* q = std::get_if<QuantSequential>(&k)) {
    j["min"] = q->min;
    j["max"] = q->max;
  } else if (const auto* o = std::get_if<OrdinalSequential>(&k)) {
    j["levels"] = o->levels;
  } else if (const auto* d = std::get_if<OrdinalDiverging>(&k)) {
    j["levels"] = d->levels;
  } else if (const auto* c = std::get_if<Categorical>(&k)) {
    j["labels"] = c->labels;
    j["multi"] = c->multi;
  }
}

void from_json(const json& j, AnswerKind& k) {
  const auto type = j.at("type").get<std::string>();
  if (type == "quant-sequential") k = QuantSequential{j.value("min", 0), j.value("max", 10)};
  else if (type == "quant-cyclic") k = QuantCyclic{};
  else if (type == "ordinal-sequential") k = OrdinalSequential{j.at("levels").get<std::vector<std::string>>()};
  else if (type == "ordinal-diverging") k = OrdinalDiverging{j.at("levels").get<std::vector<std::string>>()};
  else if (type == "categorical")
    k = Categorical{j.at("labels").get<std::vector<std::string>>(), j.value("multi", false)};
  else if (type == "binary") k = Binary{};
  else if (type == "free-text") k = FreeText{};
  else throw std::invalid_argument("unknown answer kind '" + type + "'");
}

void to_json(json& j, const AnswerValue& v) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Magnitude>) j = json{{"magnitude", x.value}};
        else if constexpr (std::is_same_v<T, ClockTime>) j = json{{"clock", x.str()}};
        else if constexpr (std::is_same_v<T, Level>) j = json{{"level", x.index}};
        else if constexpr (std::is_same_v<T, Categories>) j = json{{"categories", x.labels}};
        else if constexpr (std::is_same_v<T, Flag>) j = json{{"flag", x.value}};
        else j = json{{"text", x.value}};
      },
      v);
}

void from_json(const json& j, AnswerValue& v) {
  if (!j.is_object() || j.size() != 1)
    throw std::invalid_argument("answer value must be a single-key object");
  const auto it = j.begin();
  const std::string& key = it.key();
  const json& val = it.value();
  if (key == "magnitude") v = Magnitude{val.get<int>()};
  else if (key == "clock") v = ClockTime::parse(val.get<std::string>());
  else if (key == "level") v = Level{val.get<int>()};
  else if (key == "categories") {
    auto labels = val.get<std::vector<std::string>>();
    v = Categories{std::move(labels)};
  } else if (key == "flag") v = Flag{val.get<bool>()};
  else if (key == "text") v = Text{val.get<std::string>()};
  else throw std::invalid_argument("unknown answer value tag '" + key + "'");
}

void to_json(json& j, const Question& q) {
  j = json{{"qid", q.qid},       {"facet", q.facet},       {"prompt", q.prompt},
           {"answer", q.answer}, {"asked_in", q.asked_in}, {"required", q.required}};
}

void from_json(const json& j, Question& q) {
  q.qid = j.at("qid").get<std::string>();
  q.facet = j.at("facet").get<Facet>();
  q.prompt = j.value("prompt", std::string());
  q.answer = j.at("answer").get<AnswerKind>();
  q.asked_in = j.at("asked_in").get<WindowSet>();
  q.required = j.value("required", false);
}

void to_json(json& j, const EmaResponse& r) {
  json answers = json::object();
  for (const auto& [id, v] : r.answers) answers[id] = v;
  j = json{{"participant", r.participant},
           {"date", r.date},
           {"window", r.window},
           {"submitted_at", r.submitted_at},
           {"revision", r.revision},
           {"answers", std::move(answers)}};
}

void from_json(const json& j, EmaResponse& r) {
  r.participant = j.at("participant").get<std::string>();
  r.date = j.at("date").get<Date>();
  r.window = j.at("window").get<SurveyWindow>();
  r.submitted_at = j.at("submitted_at").get<Timestamp>();
  r.revision = j.value("revision", 1);
  r.answers.clear();
  for (const auto& [id, v] : j.at("answers").items()) r.answers.emplace(id, v.get<AnswerValue>());
}

void to_json(json& j, const WindowTimes& w) {
  j = json::object();
  for (auto win : kWindows) {
    j[std::string(to_string(win))] = json{{"open", w[win].open}, {"close", w[win].close}};
  }
}

void from_json(const json& j, WindowTimes& w) {
  std::array<WindowSpan, 3> spans;
  for (auto win : kWindows) {
    const auto& s = j.at(std::string(to_string(win)));
    spans[index_of(win)] = WindowSpan{s.at("open").get<ClockTime>(), s.at("close").get<ClockTime>()};
  }
  w = WindowTimes(spans);
}

json survey_to_json(const SurveyDefinition& def) {
  return json{{"version", def.version()}, {"questions", def.questions()}};
}

SurveyDefinition survey_from_json(const json& j) {
  return SurveyDefinition(j.at("version").get<std::string>(),
                          j.at("questions").get<std::vector<Question>>());
}

std::vector<EmaResponse> responses_from_json(const json& j) {
  const json& arr = j.is_object() ? j.at("responses") : j;
  if (!arr.is_array()) throw std::invalid_argument("expected an array of responses");
  return arr.get<std::vector<EmaResponse>>();
}

json responses_to_json(std::span<const EmaResponse> responses) {
  json arr = json::array();
  for (const auto& r : responses) arr.push_back(r);
  return arr;
}

json week_to_json(const WeekDataset& week) {
  json slots = json::array();
  for (int d = 0; d < kDaysPerWeek; ++d) {
    for (auto w : kWindows) {
      json s{{"day", d}, {"date", week.date_of(d)}, {"window", w}};
      const auto& st = week.at(d, w);
      if (const auto* c = std::get_if<Completed>(&st)) {
        s["status"] = "completed";
        s["response"] = c->response;
      } else {
        s["status"] = std::holds_alternative<Missed>(st) ? "missed" : "pending";
      }
      slots.push_back(std::move(s));
    }
  }
  return json{{"participant", week.participant()}, {"week_start", week.week_start()},
              {"slots", std::move(slots)}};
}

}  // namespace emaviz::ema
