#include "emaviz/synth/generate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "emaviz/ema/survey.hpp"
#include "emaviz/synth/rng.hpp"

namespace emaviz::synth {

using ema::SurveyWindow;
namespace qid = ema::qid;

std::vector<std::string> check_persona(const SyntheticPersona& p) {
  std::vector<std::string> errors;
  auto in = [&](double v, double lo, double hi, const char* name) {
    if (!(v >= lo && v <= hi))
      errors.push_back(std::string(name) + " must lie in [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  };
  in(p.bedtime, 0, 1439, "bedtime");
  in(p.waketime, 0, 1439, "waketime");
  if (p.bedtime == p.waketime) errors.push_back("bedtime and waketime must differ");
  in(p.sleep_jitter, 0, 180, "sleep_jitter");
  for (double v : p.symptom_propensity) in(v, 0, 1, "symptom_propensity");
  in(p.symptom_base, 0, 10, "symptom_base");
  in(p.worry_base, 0, 10, "worry_base");
  in(p.happy_base, 0, 10, "happy_base");
  in(p.sleep_to_symptom, -3, 3, "sleep_to_symptom");
  in(p.symptom_to_worry, -3, 3, "symptom_to_worry");
  in(p.peer_to_happy, -3, 3, "peer_to_happy");
  in(p.noise, 0, 5, "noise");
  return errors;
}

SyntheticPersona random_persona(std::uint64_t seed) {
  SplitMix64 rng(seed);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  SyntheticPersona p;
  p.bedtime = rng.uniform_int(21 * 60, 23 * 60 + 30);
  p.waketime = rng.uniform_int(6 * 60, 8 * 60);
  p.sleep_jitter = between(20, 60);
  for (std::size_t i = 0; i < p.symptom_propensity.size(); ++i)
    p.symptom_propensity[i] = i + 1 == p.symptom_propensity.size() ? between(0, 0.1) : between(0, 0.7);
  p.symptom_base = between(0, 6);
  p.sleep_to_symptom = between(0, 2);
  p.symptom_to_worry = between(0, 0.8);
  p.peer_to_happy = between(0, 1.5);
  p.worry_base = between(1, 6);
  p.happy_base = between(3, 8);
  p.noise = between(0.5, 1.5);
  p.seed = seed;
  return p;
}

void check_profile(const ComplianceProfile& profile) {
  if (const auto* b = std::get_if<Binger>(&profile); b && (b->active_days < 1 || b->active_days > 6))
    throw std::invalid_argument("binger active days must be 1..6");
  if (const auto* r = std::get_if<RandomCompliance>(&profile); r && !(r->p >= 0 && r->p <= 1))
    throw std::invalid_argument("random compliance p must lie in [0, 1]");
}

std::string to_string(const ComplianceProfile& profile) {
  if (std::holds_alternative<Full>(profile)) return "full";
  if (std::holds_alternative<MinimalCompleter>(profile)) return "minimal-completer";
  if (const auto* b = std::get_if<Binger>(&profile)) return "binger:" + std::to_string(b->active_days);
  char buf[32];
  std::snprintf(buf, sizeof buf, "random:%g", std::get<RandomCompliance>(profile).p);
  return buf;
}

ComplianceProfile parse_profile(std::string_view text) {
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const std::string arg(colon == std::string_view::npos ? "" : text.substr(colon + 1));
  ComplianceProfile out;
  try {
    if (head == "full" && arg.empty()) out = Full{};
    else if (head == "minimal-completer" && arg.empty()) out = MinimalCompleter{};
    else if (head == "binger") out = Binger{arg.empty() ? 3 : std::stoi(arg)};
    else if (head == "random") out = RandomCompliance{arg.empty() ? 0.5 : std::stod(arg)};
    else throw std::invalid_argument("");
  } catch (const std::logic_error&) {
    throw std::invalid_argument("unknown compliance profile: " + std::string(text));
  }
  check_profile(out);
  return out;
}

namespace {

int scale(double v) { return std::clamp(static_cast<int>(std::lround(v)), 0, 10); }

template <std::size_t N>
std::string pick(SplitMix64& rng, const std::array<std::string_view, N>& labels) {
  return std::string(labels[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(N) - 1))]);
}

constexpr std::array<std::string_view, 4> kOtherSymptoms = {"itchy eyes", "sore throat", "cough",
                                                            "tired legs"};

std::string worry_text(const std::string& target, SplitMix64& rng) {
  static const std::map<std::string, std::array<std::string_view, 3>, std::less<>> kText = {
      {"family", {"mum is sick", "fight at home", "grandma visiting"}},
      {"friends", {"nobody to sit with", "group chat drama", "party on saturday"}},
      {"strangers", {"new bus driver", "people staring at me", "talking to the nurse"}},
      {"school", {"maths test", "presentation in class", "homework not done"}},
      {"sports", {"football match", "swimming lesson", "being picked last"}},
      {"health", {"tummy pain again", "doctor appointment", "blood test"}},
  };
  const auto& options = kText.at(target);
  return std::string(options[static_cast<std::size_t>(rng.uniform_int(0, 2))]);
}

/// Day-level latent state shared by the three slots.
struct Day {
  int quality = 0;
  int bed = 0;
  int wake = 0;
  double symptoms = 0;
  double peer = 0;
  std::string target;
  double worry = 0;
  int certainty = 0;
  int expected = 0;
  bool school_day = true;
  bool attended = true;
  std::string miss_reason;
};

Day draw_day(const SyntheticPersona& p, Date date, SplitMix64& rng) {
  Day day;
  const double z = rng.normal();
  day.quality = std::clamp(static_cast<int>(std::lround(1.5 + z)), 0, 3);
  const auto wrap = [](double m) { return static_cast<int>(((std::lround(m) % 1440) + 1440) % 1440); };
  day.bed = wrap(p.bedtime + p.sleep_jitter * rng.normal() - 10 * z);
  day.wake = wrap(p.waketime + 0.5 * p.sleep_jitter * rng.normal() + 10 * z);
  if (day.bed == day.wake) day.wake = (day.wake + 1) % 1440;
  day.symptoms = p.symptom_base + p.sleep_to_symptom * (3 - day.quality);
  day.peer = rng.normal();

  // Health worries grow with symptoms.
  const double health_weight = 1 + std::max(0.0, day.symptoms) / 2;
  const double r = rng.uniform() * (static_cast<double>(ema::kWorryTargets.size()) - 1 + health_weight);
  day.target = r < ema::kWorryTargets.size() - 1
                   ? std::string(ema::kWorryTargets[static_cast<std::size_t>(r)])
                   : std::string("health");
  day.worry = p.worry_base + 0.5 * p.symptom_to_worry * day.symptoms;
  day.certainty = scale(0.7 * day.worry + p.noise * rng.normal());
  day.expected = scale(day.worry + 1 + p.noise * rng.normal());

  const auto wd = absl::GetWeekday(date);
  day.school_day = wd != absl::Weekday::saturday && wd != absl::Weekday::sunday;
  if (!day.school_day) {
    day.attended = false;
    day.miss_reason = "weekend";
  } else if (day.symptoms > 6 && rng.bernoulli(0.5)) {
    day.attended = false;
    static constexpr std::array<std::string_view, 3> kIll = {"pain", "sick", "medical appointment"};
    day.miss_reason = pick(rng, kIll);
  } else if (rng.bernoulli(0.04)) {
    day.attended = false;
    static constexpr std::array<std::string_view, 4> kOther = {"holiday", "vacation", "online",
                                                               "home-schooled"};
    day.miss_reason = pick(rng, kOther);
  }
  return day;
}

using Answers = std::map<std::string, ema::AnswerValue, std::less<>>;

Answers draw_slot(const SyntheticPersona& p, const Day& day, SurveyWindow w, SplitMix64& rng) {
  Answers a;
  auto put = [&](std::string_view q, ema::AnswerValue v) { a.emplace(std::string(q), std::move(v)); };
  const double n = p.noise;

  if (w == SurveyWindow::morning) {
    put(qid::sleep_bedtime, ClockTime(day.bed));
    put(qid::sleep_waketime, ClockTime(day.wake));
    put(qid::sleep_quality, ema::Level{day.quality});
  }

  const int intensity = scale(day.symptoms + n * rng.normal());
  std::vector<std::string> types;
  for (std::size_t c = 0; c < ema::kSymptomCategories.size(); ++c) {
    if (rng.bernoulli(p.symptom_propensity[c] * intensity / 10.0))
      types.emplace_back(ema::kSymptomCategories[c]);
  }
  const bool other = std::find(types.begin(), types.end(), "other") != types.end();
  put(qid::symptom_types, ema::make_categories(std::move(types)));
  if (other) put(qid::symptom_other_text, ema::Text{pick(rng, kOtherSymptoms)});
  put(qid::symptom_intensity, ema::Magnitude{intensity});
  put(qid::symptom_worry, ema::Magnitude{scale(p.worry_base / 2 + p.symptom_to_worry * intensity + n * rng.normal())});
  put(qid::medication_taken, ema::Flag{intensity >= 6 && rng.bernoulli(0.6)});

  const double interact_p = w == SurveyWindow::evening ? 0.5 : (day.school_day ? 0.9 : 0.6);
  const bool interacted = rng.bernoulli(interact_p);
  int peer_score = 0;
  put(qid::peer_interacted, ema::Flag{interacted});
  if (interacted) {
    peer_score = std::clamp(static_cast<int>(std::lround(day.peer + 0.5 * rng.normal())), -2, 2);
    put(qid::peer_quality, ema::Level{peer_score + 2});
  }
  put(qid::peer_worry, ema::Magnitude{scale(3 - 1.2 * peer_score + n * rng.normal())});

  const int happy = scale(p.happy_base + p.peer_to_happy * peer_score - 0.3 * intensity + n * rng.normal());
  put(qid::emotion_worried, ema::Magnitude{scale(day.worry + n * rng.normal())});
  put(qid::emotion_angry, ema::Magnitude{scale(2 + 0.5 * (3 - day.quality) + n * rng.normal())});
  put(qid::emotion_happy, ema::Magnitude{happy});
  put(qid::emotion_sad, ema::Magnitude{scale(8 - 0.8 * happy + n * rng.normal())});

  if (w == SurveyWindow::morning) {
    put(qid::worry_target, ema::make_categories({day.target}));
    put(qid::worry_text, ema::Text{worry_text(day.target, rng)});
    put(qid::worry_level, ema::Magnitude{scale(day.worry + n * rng.normal())});
    put(qid::worry_certainty, ema::Magnitude{day.certainty});
    put(qid::worry_expected_badness, ema::Magnitude{day.expected});
  } else {
    put(qid::worry_happened, ema::Flag{rng.bernoulli(day.certainty / 12.0)});
    put(qid::worry_avoided, ema::Flag{rng.bernoulli(0.25 + day.worry / 40)});
    // Things tend to turn out better than feared.
    put(qid::worry_actual_badness, ema::Magnitude{scale(day.expected - 2 + std::max(n, 0.5) * rng.normal())});
  }

  if (w == SurveyWindow::afternoon) {
    put(qid::school_attended, ema::Flag{day.attended});
    if (!day.attended) put(qid::school_miss_reason, ema::make_categories({day.miss_reason}));
  }
  return a;
}

/// Which of the 21 slots (day-major) the profile answers.
std::array<bool, 21> answered_slots(const ComplianceProfile& profile, SplitMix64& rng) {
  std::array<bool, 21> on{};
  std::visit(
      [&](const auto& pr) {
        using T = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<T, Full>) {
          on.fill(true);
        } else if constexpr (std::is_same_v<T, MinimalCompleter>) {
          for (int d = 0; d < 7; ++d) {
            const int first = rng.uniform_int(0, 2);
            on[static_cast<std::size_t>(d * 3 + first)] = true;
            if (rng.bernoulli(0.3)) on[static_cast<std::size_t>(d * 3 + (first + rng.uniform_int(1, 2)) % 3)] = true;
          }
        } else if constexpr (std::is_same_v<T, Binger>) {
          for (int i = 0; i < 3 * pr.active_days; ++i) on[static_cast<std::size_t>(i)] = true;
        } else {
          for (auto& s : on) s = rng.bernoulli(pr.p);
        }
      },
      profile);
  return on;
}

}  // namespace

std::vector<ema::EmaResponse> generate_week(std::uint64_t seed, const SyntheticPersona& persona,
                                            const ComplianceProfile& profile, Date week_start,
                                            const WeekOptions& options) {
  if (const auto errors = check_persona(persona); !errors.empty())
    throw std::invalid_argument("invalid persona: " + errors.front());
  check_profile(profile);
  if (!(options.dropout >= 0 && options.dropout <= 1))
    throw std::invalid_argument("dropout must lie in [0, 1]");

  // Separate streams so that compliance and dropout settings never shift the values.
  SplitMix64 root(seed ^ (persona.seed * 0x9E3779B97F4A7C15ULL));
  auto values = root.split();
  auto slots = root.split();
  auto dropout = root.split();
  auto timing = root.split();

  const auto on = answered_slots(profile, slots);
  std::vector<ema::EmaResponse> out;
  for (int d = 0; d < 7; ++d) {
    const Date date = week_start + d;
    const Day day = draw_day(persona, date, values);
    for (auto w : ema::kWindows) {
      auto answers = draw_slot(persona, day, w, values);
      const double into = timing.uniform();
      if (!on[static_cast<std::size_t>(d * 3 + ema::index_of(w))]) continue;
      std::erase_if(answers, [&](const auto&) { return dropout.bernoulli(options.dropout); });
      ema::EmaResponse r;
      r.participant = options.participant;
      r.date = date;
      r.window = w;
      r.answers = std::move(answers);
      const auto open = options.calendar.opens_at(date, w);
      const auto close = options.calendar.closes_at(date, w);
      const auto at = open + absl::Minutes(std::floor(absl::ToDoubleMinutes(close - open) * 0.9 * into));
      r.submitted_at = Timestamp::in_zone(at, options.calendar.zone);
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<CohortMember> generate_cohort(int n, std::uint64_t seed, const CohortOptions& options) {
  if (n < 1) throw std::invalid_argument("cohort size must be at least 1");
  SplitMix64 rng(seed);
  ema::SlotCalendar calendar;
  calendar.zone = load_zone(options.timezone);
  std::vector<CohortMember> cohort;
  for (int i = 0; i < n; ++i) {
    CohortMember m;
    m.plan = scheduler::make_study_plan(i, options.start, options.timezone);
    m.persona = random_persona(rng.next());
    const double r = rng.uniform();
    if (r < 0.35) m.profile = Full{};
    else if (r < 0.55) m.profile = MinimalCompleter{};
    else if (r < 0.75) m.profile = Binger{rng.uniform_int(1, 6)};
    else m.profile = RandomCompliance{0.3 + 0.65 * rng.uniform()};
    WeekOptions wo{options.dropout, m.plan.participant, calendar};
    const auto week_seed = rng.next();
    for (std::size_t k = 0; k < m.plan.weeks.size(); ++k) {
      const auto& week = m.plan.weeks[k];
      if (week.kind == scheduler::Condition::washout) continue;
      auto rs = generate_week(week_seed + k, m.persona, m.profile, week.week_start, wo);
      m.responses.insert(m.responses.end(), rs.begin(), rs.end());
    }
    cohort.push_back(std::move(m));
  }
  return cohort;
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SyntheticPersona, bedtime, waketime, sleep_jitter,
                                                symptom_propensity, symptom_base, sleep_to_symptom,
                                                symptom_to_worry, peer_to_happy, worry_base,
                                                happy_base, noise, seed)

nlohmann::json to_json(const SyntheticPersona& p) {
  nlohmann::json j;
  to_json(j, p);
  return j;
}

SyntheticPersona persona_from_json(const nlohmann::json& j) {
  SyntheticPersona p = j.get<SyntheticPersona>();
  if (const auto errors = check_persona(p); !errors.empty())
    throw std::invalid_argument("invalid persona: " + errors.front());
  return p;
}

}  // namespace emaviz::synth
