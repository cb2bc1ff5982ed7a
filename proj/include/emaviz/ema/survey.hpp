#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "emaviz/ema/answer.hpp"

namespace emaviz::ema {

enum class Facet { sleep, symptoms, emotions, worries, school, peers };
enum class HueRole { green, red, multicolour, blue, purple };

inline constexpr std::array<Facet, 6> kFacets = {Facet::sleep,   Facet::symptoms,
                                                 Facet::emotions, Facet::worries,
                                                 Facet::school,  Facet::peers};

HueRole hue_role(Facet f);
std::string_view to_string(Facet f);
std::string_view to_string(HueRole h);
Facet parse_facet(std::string_view s);

enum class SurveyWindow : int { morning = 0, afternoon = 1, evening = 2 };

inline constexpr std::array<SurveyWindow, 3> kWindows = {
    SurveyWindow::morning, SurveyWindow::afternoon, SurveyWindow::evening};

constexpr int index_of(SurveyWindow w) { return static_cast<int>(w); }
std::string_view to_string(SurveyWindow w);
SurveyWindow parse_window(std::string_view s);

class WindowSet {
 public:
  constexpr WindowSet() = default;
  constexpr WindowSet(std::initializer_list<SurveyWindow> ws) {
    for (auto w : ws) insert(w);
  }
  static constexpr WindowSet all() {
    return {SurveyWindow::morning, SurveyWindow::afternoon, SurveyWindow::evening};
  }

  constexpr void insert(SurveyWindow w) { bits_ |= static_cast<std::uint8_t>(1u << index_of(w)); }
  constexpr bool contains(SurveyWindow w) const { return (bits_ >> index_of(w)) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  std::vector<SurveyWindow> list() const;

  friend constexpr bool operator==(WindowSet, WindowSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

struct Question {
  std::string qid;
  Facet facet = Facet::symptoms;
  std::string prompt;
  AnswerKind answer;
  WindowSet asked_in;
  bool required = false;

  friend bool operator==(const Question&, const Question&) = default;
};

class SurveyDefinition {
 public:
  /// Throws std::invalid_argument on duplicate qids, empty windows, or bad kinds.
  SurveyDefinition(std::string version, std::vector<Question> questions);

  const std::string& version() const { return version_; }
  const std::vector<Question>& questions() const { return questions_; }
  const Question* find(std::string_view qid) const;
  std::vector<const Question*> asked_in(SurveyWindow w) const;

  friend bool operator==(const SurveyDefinition&, const SurveyDefinition&) = default;

 private:
  std::string version_;
  std::vector<Question> questions_;
};

/// Question ids of the built-in instrument.
namespace qid {
inline constexpr std::string_view sleep_bedtime = "sleep_bedtime";
inline constexpr std::string_view sleep_waketime = "sleep_waketime";
inline constexpr std::string_view sleep_quality = "sleep_quality";
inline constexpr std::string_view symptom_types = "symptom_types";
inline constexpr std::string_view symptom_other_text = "symptom_other_text";
inline constexpr std::string_view symptom_intensity = "symptom_intensity";
inline constexpr std::string_view symptom_worry = "symptom_worry";
inline constexpr std::string_view medication_taken = "medication_taken";
inline constexpr std::string_view emotion_worried = "emotion_worried";
inline constexpr std::string_view emotion_angry = "emotion_angry";
inline constexpr std::string_view emotion_happy = "emotion_happy";
inline constexpr std::string_view emotion_sad = "emotion_sad";
inline constexpr std::string_view worry_target = "worry_target";
inline constexpr std::string_view worry_text = "worry_text";
inline constexpr std::string_view worry_level = "worry_level";
inline constexpr std::string_view worry_certainty = "worry_certainty";
inline constexpr std::string_view worry_expected_badness = "worry_expected_badness";
inline constexpr std::string_view worry_happened = "worry_happened";
inline constexpr std::string_view worry_avoided = "worry_avoided";
inline constexpr std::string_view worry_actual_badness = "worry_actual_badness";
inline constexpr std::string_view school_attended = "school_attended";
inline constexpr std::string_view school_miss_reason = "school_miss_reason";
inline constexpr std::string_view peer_worry = "peer_worry";
inline constexpr std::string_view peer_interacted = "peer_interacted";
inline constexpr std::string_view peer_quality = "peer_quality";
}  // namespace qid

inline constexpr std::array<std::string_view, 4> kEmotionQids = {
    qid::emotion_worried, qid::emotion_angry, qid::emotion_happy, qid::emotion_sad};

inline constexpr std::array<std::string_view, 9> kSymptomCategories = {
    "stomach ache", "headache", "low back pain", "dizziness", "limb pain",
    "fast heartbeat", "nausea", "body weakness", "other"};

inline constexpr std::array<std::string_view, 6> kWorryTargets = {
    "family", "friends", "strangers", "school", "sports", "health"};

inline constexpr std::array<std::string_view, 8> kSchoolMissReasons = {
    "weekend", "holiday", "vacation", "pain", "sick", "medical appointment", "home-schooled",
    "online"};

inline constexpr std::array<std::string_view, 4> kSleepQualityLevels = {"poor", "okay", "good",
                                                                        "great"};

inline constexpr std::array<std::string_view, 5> kPeerQualityLevels = {
    "very badly", "badly", "okay", "well", "very well"};

SurveyDefinition default_survey_definition();

}  // namespace emaviz::ema
