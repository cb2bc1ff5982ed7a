#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "emaviz/ema/json.hpp"
#include "emaviz/scheduler/compliance.hpp"
#include "emaviz/synth/generate.hpp"
#include "emaviz/synth/rng.hpp"

using namespace emaviz;
using namespace emaviz::synth;
using ema::SurveyWindow;
namespace qid = ema::qid;

namespace {

const Date kMonday(2024, 1, 8);
const absl::Time kAfterWeek = absl::FromCivil(absl::CivilSecond(2024, 1, 15, 12, 0, 0), absl::UTCTimeZone());

const ema::SurveyDefinition& survey() {
  static const auto def = ema::default_survey_definition();
  return def;
}

scheduler::Profile classify(const std::vector<ema::EmaResponse>& rs) {
  return scheduler::classify_profile(ema::build_week_dataset("P001", rs, kMonday, kAfterWeek));
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Whether question `q` is only asked after a particular earlier answer.
bool conditional_unmet(const ema::EmaResponse& r, std::string_view q) {
  if (q == qid::school_miss_reason) return r.get<ema::Flag>(qid::school_attended)->value;
  if (q == qid::peer_quality) return !r.get<ema::Flag>(qid::peer_interacted)->value;
  if (q == qid::symptom_other_text) {
    const auto& l = r.get<ema::Categories>(qid::symptom_types)->labels;
    return std::find(l.begin(), l.end(), "other") == l.end();
  }
  return false;
}

WeekOptions no_dropout() {
  WeekOptions o;
  o.dropout = 0;
  return o;
}

}  // namespace

TEST(SplitMix64, MatchesReferenceStream) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

TEST(SplitMix64, HelperDrawsBehave) {
  SplitMix64 rng(42);
  double sum = 0, sq = 0;
  std::array<int, 4> bins{};
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
    const double u = rng.uniform();
    ASSERT_GE(u, 0);
    ASSERT_LT(u, 1);
    const int k = rng.uniform_int(0, 3);
    ASSERT_GE(k, 0);
    ASSERT_LE(k, 3);
    ++bins[static_cast<std::size_t>(k)];
  }
  EXPECT_NEAR(sum / n, 0, 0.02);
  EXPECT_NEAR(sq / n, 1, 0.02);
  for (int b : bins) EXPECT_NEAR(b, n / 4, n / 100);
}

TEST(GenerateWeek, FullWithoutDropoutAnswersEverything) {
  const auto rs = generate_week(1, SyntheticPersona{}, Full{}, kMonday, no_dropout());
  ASSERT_EQ(rs.size(), 21u);
  for (const auto& r : rs) {
    for (const auto* q : survey().asked_in(r.window)) {
      if (!conditional_unmet(r, q->qid)) {
        EXPECT_TRUE(r.answer(q->qid)) << q->qid;
      }
    }
    EXPECT_TRUE(ema::validate_response(survey(), r).empty());
  }
  EXPECT_EQ(classify(rs), scheduler::Profile::full);
}

TEST(GenerateWeek, EveryResponseValidates) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto persona = random_persona(seed);
    ASSERT_TRUE(check_persona(persona).empty());
    for (const ComplianceProfile& profile :
         {ComplianceProfile{Full{}}, ComplianceProfile{RandomCompliance{0.7}}}) {
      for (const auto& r : generate_week(seed, persona, profile, kMonday)) {
        const auto errors = ema::validate_response(survey(), r);
        ASSERT_TRUE(errors.empty()) << seed << " " << errors.front().message;
        ASSERT_EQ(r.participant, "P001");
        const ema::SlotCalendar cal;
        ASSERT_GE(r.submitted_at.instant, cal.opens_at(r.date, r.window));
        ASSERT_LT(r.submitted_at.instant, cal.closes_at(r.date, r.window));
      }
    }
  }
}

TEST(GenerateWeek, BingerAnswersOnlyTheFirstDays) {
  const auto rs = generate_week(7, SyntheticPersona{}, Binger{3}, kMonday);
  ASSERT_EQ(rs.size(), 9u);
  for (const auto& r : rs) EXPECT_LT(r.date - kMonday, 3);
  EXPECT_EQ(classify(rs), scheduler::Profile::binger);
  for (int k = 1; k <= 4; ++k)
    EXPECT_EQ(classify(generate_week(k, SyntheticPersona{}, Binger{k}, kMonday)), scheduler::Profile::binger) << k;
}

TEST(GenerateWeek, MinimalCompleterIsRecognised) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto rs = generate_week(seed, SyntheticPersona{}, MinimalCompleter{}, kMonday);
    std::map<Date, int> per_day;
    for (const auto& r : rs) ++per_day[r.date];
    EXPECT_EQ(per_day.size(), 7u);
    for (const auto& [d, c] : per_day) EXPECT_LE(c, 2);
    EXPECT_EQ(classify(rs), scheduler::Profile::minimal_completer) << seed;
  }
}

TEST(GenerateWeek, RandomComplianceRate) {
  int answered = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed)
    answered += static_cast<int>(generate_week(seed, SyntheticPersona{}, RandomCompliance{0.3}, kMonday).size());
  EXPECT_NEAR(answered / (400.0 * 21), 0.3, 0.02);
  EXPECT_TRUE(generate_week(1, SyntheticPersona{}, RandomCompliance{0}, kMonday).empty());
  EXPECT_EQ(generate_week(1, SyntheticPersona{}, RandomCompliance{1}, kMonday).size(), 21u);
}

TEST(GenerateWeek, DropoutRemovesAboutFivePercentAndNothingElse) {
  std::size_t kept = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto all = generate_week(seed, SyntheticPersona{}, Full{}, kMonday, no_dropout());
    const auto some = generate_week(seed, SyntheticPersona{}, Full{}, kMonday);
    ASSERT_EQ(all.size(), some.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (const auto& [q, v] : some[i].answers) ASSERT_EQ(*all[i].answer(q), v);
      kept += some[i].answers.size();
      total += all[i].answers.size();
    }
  }
  EXPECT_NEAR(1.0 - static_cast<double>(kept) / static_cast<double>(total), 0.05, 0.005);
}

TEST(GenerateWeek, IsDeterministic) {
  const auto p = random_persona(99);
  const auto a = ema::responses_to_json(generate_week(5, p, RandomCompliance{0.6}, kMonday)).dump();
  const auto b = ema::responses_to_json(generate_week(5, p, RandomCompliance{0.6}, kMonday)).dump();
  EXPECT_EQ(a, b);
  const auto c = ema::responses_to_json(generate_week(6, p, RandomCompliance{0.6}, kMonday)).dump();
  EXPECT_NE(a, c);
}

TEST(GenerateWeek, PoorSleepRaisesSymptoms) {
  SyntheticPersona p;
  p.noise = 0;
  p.sleep_to_symptom = 1.5;
  int weeks = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto rs = generate_week(seed, p, Full{}, kMonday, no_dropout());
    std::vector<double> poor, mean_intensity;
    for (int d = 0; d < 7; ++d) {
      double sum = 0;
      for (const auto& r : rs) {
        if (r.date != kMonday + d) continue;
        sum += r.get<ema::Magnitude>(qid::symptom_intensity)->value;
        if (r.window == SurveyWindow::morning) poor.push_back(3 - r.get<ema::Level>(qid::sleep_quality)->index);
      }
      mean_intensity.push_back(sum / 3);
    }
    if (std::all_of(poor.begin(), poor.end(), [&](double v) { return v == poor[0]; })) continue;
    ++weeks;
    EXPECT_GT(pearson(poor, mean_intensity), 0) << seed;
  }
  EXPECT_GT(weeks, 90);
}

TEST(GenerateWeek, RejectsBadInput) {
  SyntheticPersona bad;
  bad.symptom_propensity[0] = 1.5;
  EXPECT_FALSE(check_persona(bad).empty());
  EXPECT_THROW(generate_week(1, bad, Full{}, kMonday), std::invalid_argument);
  EXPECT_THROW(generate_week(1, SyntheticPersona{}, Binger{0}, kMonday), std::invalid_argument);
  EXPECT_THROW(generate_week(1, SyntheticPersona{}, Binger{7}, kMonday), std::invalid_argument);
  EXPECT_THROW(generate_week(1, SyntheticPersona{}, RandomCompliance{1.2}, kMonday), std::invalid_argument);
}

TEST(Profiles, TextRoundTrip) {
  for (const ComplianceProfile& p : {ComplianceProfile{Full{}}, ComplianceProfile{MinimalCompleter{}},
                                     ComplianceProfile{Binger{4}}, ComplianceProfile{RandomCompliance{0.25}}})
    EXPECT_EQ(parse_profile(to_string(p)), p);
  EXPECT_THROW(parse_profile("binger:x"), std::invalid_argument);
  EXPECT_THROW(parse_profile("lazy"), std::invalid_argument);
  EXPECT_THROW(parse_profile("random:2"), std::invalid_argument);
}

TEST(Persona, JsonRoundTrip) {
  const auto p = random_persona(3);
  EXPECT_EQ(persona_from_json(to_json(p)), p);
  EXPECT_EQ(persona_from_json(nlohmann::json::object()), SyntheticPersona{});
  EXPECT_THROW(persona_from_json({{"noise", -1}}), std::invalid_argument);
}

TEST(Cohort, FortyFourIsCounterbalanced) {
  const auto cohort = generate_cohort(44, 2024);
  ASSERT_EQ(cohort.size(), 44u);
  int ab = 0;
  std::set<std::string> codes;
  for (const auto& m : cohort) {
    ab += m.plan.order == scheduler::Order::ab;
    codes.insert(m.plan.participant);
    for (const auto& r : m.responses) {
      EXPECT_EQ(r.participant, m.plan.participant);
      EXPECT_TRUE(m.plan.is_active_day(r.date));
      EXPECT_TRUE(ema::validate_response(survey(), r).empty());
    }
  }
  EXPECT_EQ(ab, 22);
  EXPECT_EQ(codes.size(), 44u);
}

TEST(Cohort, SingleParticipantIsAb) {
  const auto cohort = generate_cohort(1, 5);
  ASSERT_EQ(cohort.size(), 1u);
  EXPECT_EQ(cohort[0].plan.order, scheduler::Order::ab);
  EXPECT_THROW(generate_cohort(0, 5), std::invalid_argument);
}

TEST(Cohort, ReproducibleFromSeed) {
  auto summary = [](const std::vector<CohortMember>& c) {
    std::vector<std::pair<std::string, std::size_t>> s;
    for (const auto& m : c) s.emplace_back(to_string(m.profile), m.responses.size());
    return s;
  };
  const auto a = generate_cohort(20, 77), b = generate_cohort(20, 77), c = generate_cohort(20, 78);
  EXPECT_EQ(summary(a), summary(b));
  EXPECT_NE(summary(a), summary(c));
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(ema::responses_to_json(a[i].responses), ema::responses_to_json(b[i].responses));
}
