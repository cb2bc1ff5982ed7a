#include "emaviz/ema/survey.hpp"

#include <set>
#include <stdexcept>

namespace emaviz::ema {

HueRole hue_role(Facet f) {
  switch (f) {
    case Facet::sleep: return HueRole::green;
    case Facet::symptoms: return HueRole::red;
    case Facet::emotions: return HueRole::multicolour;
    case Facet::worries: return HueRole::blue;
    case Facet::school:
    case Facet::peers: return HueRole::purple;
  }
  return HueRole::purple;
}

std::string_view to_string(Facet f) {
  switch (f) {
    case Facet::sleep: return "sleep";
    case Facet::symptoms: return "symptoms";
    case Facet::emotions: return "emotions";
    case Facet::worries: return "worries";
    case Facet::school: return "school";
    case Facet::peers: return "peers";
  }
  return "?";
}

std::string_view to_string(HueRole h) {
  switch (h) {
    case HueRole::green: return "green";
    case HueRole::red: return "red";
    case HueRole::multicolour: return "multicolour";
    case HueRole::blue: return "blue";
    case HueRole::purple: return "purple";
  }
  return "?";
}

Facet parse_facet(std::string_view s) {
  for (auto f : kFacets) {
    if (to_string(f) == s) return f;
  }
  throw std::invalid_argument("unknown facet '" + std::string(s) + "'");
}

std::string_view to_string(SurveyWindow w) {
  switch (w) {
    case SurveyWindow::morning: return "morning";
    case SurveyWindow::afternoon: return "afternoon";
    case SurveyWindow::evening: return "evening";
  }
  return "?";
}

SurveyWindow parse_window(std::string_view s) {
  for (auto w : kWindows) {
    if (to_string(w) == s) return w;
  }
  throw std::invalid_argument("unknown survey window '" + std::string(s) + "'");
}

std::vector<SurveyWindow> WindowSet::list() const {
  std::vector<SurveyWindow> out;
  for (auto w : kWindows) {
    if (contains(w)) out.push_back(w);
  }
  return out;
}

SurveyDefinition::SurveyDefinition(std::string version, std::vector<Question> questions)
    : version_(std::move(version)), questions_(std::move(questions)) {
  if (version_.empty()) throw std::invalid_argument("survey definition needs a version");
  std::set<std::string_view> seen;
  for (const auto& q : questions_) {
    if (q.qid.empty()) throw std::invalid_argument("question with empty qid");
    if (!seen.insert(q.qid).second) throw std::invalid_argument("duplicate qid '" + q.qid + "'");
    if (q.asked_in.empty())
      throw std::invalid_argument("question '" + q.qid + "' is asked in no window");
    check_kind(q.answer);
  }
}

const Question* SurveyDefinition::find(std::string_view qid) const {
  for (const auto& q : questions_) {
    if (q.qid == qid) return &q;
  }
  return nullptr;
}

std::vector<const Question*> SurveyDefinition::asked_in(SurveyWindow w) const {
  std::vector<const Question*> out;
  for (const auto& q : questions_) {
    if (q.asked_in.contains(w)) out.push_back(&q);
  }
  return out;
}

namespace {

template <std::size_t N>
std::vector<std::string> labels(const std::array<std::string_view, N>& src) {
  return {src.begin(), src.end()};
}

}  // namespace

SurveyDefinition default_survey_definition() {
  using W = SurveyWindow;
  const WindowSet morning{W::morning};
  const WindowSet afternoon{W::afternoon};
  const WindowSet later{W::afternoon, W::evening};
  const WindowSet all = WindowSet::all();
  const QuantSequential scale{0, 10};

  auto q = [](std::string_view id, Facet f, std::string prompt, AnswerKind kind, WindowSet ws,
              bool required = false) {
    return Question{std::string(id), f, std::move(prompt), std::move(kind), ws, required};
  };

  std::vector<Question> items{
      q(qid::sleep_bedtime, Facet::sleep, "What time did you go to sleep last night?",
        QuantCyclic{}, morning),
      q(qid::sleep_waketime, Facet::sleep, "What time did you wake up this morning?",
        QuantCyclic{}, morning),
      q(qid::sleep_quality, Facet::sleep, "How well did you sleep?",
        OrdinalSequential{labels(kSleepQualityLevels)}, morning),

      q(qid::symptom_types, Facet::symptoms, "Which symptoms are you having right now?",
        Categorical{labels(kSymptomCategories), true}, all),
      q(qid::symptom_other_text, Facet::symptoms, "If other, what is it?", FreeText{}, all),
      q(qid::symptom_intensity, Facet::symptoms, "How strong are your symptoms right now?", scale,
        all),
      q(qid::symptom_worry, Facet::symptoms, "How worried are you about your symptoms?", scale,
        all),
      q(qid::medication_taken, Facet::symptoms, "Did you take medication for your symptoms?",
        Binary{}, all),

      q(qid::emotion_worried, Facet::emotions, "How worried do you feel right now?", scale, all),
      q(qid::emotion_angry, Facet::emotions, "How angry do you feel right now?", scale, all),
      q(qid::emotion_happy, Facet::emotions, "How happy do you feel right now?", scale, all),
      q(qid::emotion_sad, Facet::emotions, "How sad do you feel right now?", scale, all),

      q(qid::worry_target, Facet::worries, "What are you most worried about today?",
        Categorical{labels(kWorryTargets), false}, morning),
      q(qid::worry_text, Facet::worries, "Tell us a bit more about it.", FreeText{}, morning),
      q(qid::worry_level, Facet::worries, "How worried are you about it?", scale, morning),
      q(qid::worry_certainty, Facet::worries, "How sure are you that it will happen?", scale,
        morning),
      q(qid::worry_expected_badness, Facet::worries, "How bad do you think it will be?", scale,
        morning),
      q(qid::worry_happened, Facet::worries, "Did the thing you worried about happen?", Binary{},
        later),
      q(qid::worry_avoided, Facet::worries, "Did you try to avoid it?", Binary{}, later),
      q(qid::worry_actual_badness, Facet::worries, "How bad was it actually?", scale, later),

      q(qid::school_attended, Facet::school, "Did you go to school today?", Binary{}, afternoon),
      q(qid::school_miss_reason, Facet::school, "Why did you miss school?",
        Categorical{labels(kSchoolMissReasons), false}, afternoon),

      q(qid::peer_worry, Facet::peers, "How worried are you about being with friends?", scale,
        all),
      q(qid::peer_interacted, Facet::peers, "Did you spend time with friends since the last check-in?",
        Binary{}, all),
      q(qid::peer_quality, Facet::peers, "How did you get along with your friends?",
        OrdinalDiverging{labels(kPeerQualityLevels)}, all),
  };
  return SurveyDefinition("builtin-1", std::move(items));
}

}  // namespace emaviz::ema
