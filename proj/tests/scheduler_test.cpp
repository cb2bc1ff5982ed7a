#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "emaviz/ema/json.hpp"
#include "emaviz/scheduler/compliance.hpp"
#include "emaviz/scheduler/plan.hpp"
#include "emaviz/scheduler/reminders.hpp"
#include "support/oracles.hpp"

namespace emaviz::scheduler {
namespace {

using ema::EmaResponse;
using W = ema::SurveyWindow;
const Date kMonday(2024, 1, 8);

absl::Time utc(int y, int mo, int d, int h, int mi = 0) {
  return absl::FromCivil(absl::CivilMinute(y, mo, d, h, mi), absl::UTCTimeZone());
}

EmaResponse response(const std::string& p, Date d, W w) {
  EmaResponse r;
  r.participant = p;
  r.date = d;
  r.window = w;
  r.submitted_at = Timestamp::in_zone(at_local(d, ClockTime::hm(7, 30), absl::UTCTimeZone()),
                                      absl::UTCTimeZone());
  return r;
}

TEST(StudyPlan, ParityDecidesOrder) {
  EXPECT_EQ(make_study_plan(0, kMonday, "UTC").order, Order::ab);
  EXPECT_EQ(make_study_plan(1, kMonday, "UTC").order, Order::ba);
  const auto ab = make_study_plan(0, kMonday, "UTC");
  EXPECT_EQ(ab.weeks[0].kind, Condition::ema_only);
  EXPECT_EQ(ab.weeks[2].kind, Condition::ema_plus_viz);
  const auto ba = make_study_plan(1, kMonday, "UTC");
  EXPECT_EQ(ba.weeks[0].kind, Condition::ema_plus_viz);
  EXPECT_EQ(ba.weeks[2].kind, Condition::ema_only);
  EXPECT_EQ(ab.participant, "P001");
  EXPECT_EQ(ba.participant, "P002");
}

TEST(StudyPlan, WashoutAlwaysInTheMiddle) {
  for (int i = 0; i < 50; ++i) {
    const auto p = make_study_plan(i, kMonday, "UTC");
    EXPECT_EQ(p.weeks[1].kind, Condition::washout);
    EXPECT_EQ(p.weeks[1].week_start, kMonday + 7);
    EXPECT_EQ(p.weeks[2].week_start, kMonday + 14);
    EXPECT_EQ(p.last_day(), kMonday + 20);
  }
}

TEST(StudyPlan, FirstTenIndicesSplitEvenly) {
  int ab = 0, ba = 0;
  for (int i = 0; i < 10; ++i) (make_study_plan(i, kMonday, "UTC").order == Order::ab ? ab : ba)++;
  EXPECT_EQ(ab, 5);
  EXPECT_EQ(ba, 5);
}

TEST(StudyPlan, EvenLengthRangesAreBalanced) {
  for (int lo = 0; lo < 30; ++lo) {
    for (int len = 2; lo + len <= 60; len += 2) {
      int diff = 0;
      for (int i = lo; i < lo + len; ++i)
        diff += make_study_plan(i, kMonday, "UTC").order == Order::ab ? 1 : -1;
      ASSERT_EQ(diff, 0) << lo << "+" << len;
    }
  }
}

TEST(StudyPlan, RejectsMisalignedStartAndBadZone) {
  EXPECT_THROW(make_study_plan(0, kMonday + 1, "UTC"), std::invalid_argument);
  EXPECT_NO_THROW(make_study_plan(0, kMonday + 1, "UTC", absl::Weekday::tuesday));
  EXPECT_THROW(make_study_plan(0, kMonday, "Mars/Olympus"), std::invalid_argument);
}

TEST(StudyPlan, ActiveDays) {
  const auto p = make_study_plan(0, kMonday, "UTC");
  EXPECT_TRUE(p.is_active_day(kMonday));
  EXPECT_TRUE(p.is_active_day(kMonday + 6));
  EXPECT_FALSE(p.is_active_day(kMonday + 7));
  EXPECT_FALSE(p.is_active_day(kMonday + 13));
  EXPECT_TRUE(p.is_active_day(kMonday + 14));
  EXPECT_FALSE(p.is_active_day(kMonday + 21));
  EXPECT_FALSE(p.is_active_day(kMonday - 1));
}

TEST(StudyPlan, JsonRoundTrip) {
  const auto p = make_study_plan(3, kMonday, "America/Vancouver");
  const nlohmann::json j = p;
  EXPECT_EQ(j.at("order"), "BA");
  EXPECT_EQ(j.at("weeks")[1].at("kind"), "washout");
  EXPECT_EQ(j.at("weeks")[0].at("week_start"), "2024-01-08");
  EXPECT_EQ(j.get<StudyPlan>(), p);

  auto broken = j;
  broken["weeks"][1]["kind"] = "ema-only";
  EXPECT_THROW(broken.get<StudyPlan>(), std::invalid_argument);
  broken = j;
  broken["weeks"][2]["week_start"] = "2024-01-30";
  EXPECT_THROW(broken.get<StudyPlan>(), std::invalid_argument);
}

ReminderPolicy two_channels() {
  ReminderPolicy p;
  p.channels = {Channel::text, Channel::email};
  return p;
}

TEST(Reminders, OpenReminderPerChannelAtWindowOpen) {
  const auto plan = make_study_plan(0, kMonday, "UTC");
  const auto events = due_reminders(plan, two_channels(), {}, utc(2024, 1, 8, 7));
  ASSERT_EQ(events.size(), 2u);
  for (const auto& e : events) {
    EXPECT_EQ(e.kind, ReminderKind::open);
    EXPECT_EQ(e.window, W::morning);
    EXPECT_EQ(e.due_at.instant, utc(2024, 1, 8, 7));
    EXPECT_EQ(e.participant, "P001");
  }
  EXPECT_NE(events[0].channel, events[1].channel);
}

TEST(Reminders, NothingBeforeOpenOrAfterClose) {
  const auto plan = make_study_plan(0, kMonday, "UTC");
  EXPECT_TRUE(due_reminders(plan, {}, {}, utc(2024, 1, 8, 6, 59)).empty());
  EXPECT_TRUE(due_reminders(plan, {}, {}, utc(2024, 1, 8, 22)).empty());
}

TEST(Reminders, CompletionSuppressesNudge) {
  const auto plan = make_study_plan(0, kMonday, "UTC");
  const std::vector<EmaResponse> done{response("P001", kMonday, W::morning)};
  EXPECT_TRUE(due_reminders(plan, {}, done, utc(2024, 1, 8, 8)).empty());
  // Another participant's response does not count.
  const std::vector<EmaResponse> other{response("P002", kMonday, W::morning)};
  EXPECT_EQ(due_reminders(plan, {}, other, utc(2024, 1, 8, 8)).size(), 2u);
}

TEST(Reminders, EmissionLogMakesItIdempotent) {
  const auto plan = make_study_plan(0, kMonday, "UTC");
  const auto first = due_reminders(plan, {}, {}, utc(2024, 1, 8, 7, 30));
  ASSERT_EQ(first.size(), 1u);
  EXPECT_TRUE(due_reminders(plan, {}, {}, utc(2024, 1, 8, 7, 31), first).empty());
  const auto nudge = due_reminders(plan, {}, {}, utc(2024, 1, 8, 8), first);
  ASSERT_EQ(nudge.size(), 1u);
  EXPECT_EQ(nudge[0].kind, ReminderKind::nudge);
  EXPECT_EQ(nudge[0].offset_minutes, 60);
}

TEST(Reminders, LateTickCatchesUpInOrder) {
  const auto plan = make_study_plan(0, kMonday, "UTC");
  const auto events = due_reminders(plan, {}, {}, utc(2024, 1, 8, 9));
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0].kind, ReminderKind::open);
  EXPECT_EQ(events[1].kind, ReminderKind::nudge);
}

TEST(Reminders, OffsetsBeyondCloseAreDropped) {
  const auto plan = make_study_plan(0, kMonday, "UTC");
  ReminderPolicy p;
  p.nudge_offsets_minutes = {60, 300, 400};
  const auto events = due_reminders(plan, p, {}, utc(2024, 1, 8, 11, 59));
  EXPECT_EQ(events.size(), 2u);
}

TEST(Reminders, WashoutWeekIsSilent) {
  for (int idx : {0, 1}) {
    const auto plan = make_study_plan(idx, kMonday, "America/Vancouver");
    const auto zone = load_zone(plan.timezone);
    const auto begin = at_local(plan.weeks[1].week_start, ClockTime(0), zone);
    for (auto t = begin; t < begin + absl::Hours(24 * 7); t += absl::Minutes(1))
      ASSERT_TRUE(due_reminders(plan, two_channels(), {}, t).empty()) << absl::FormatTime(t);
  }
}

TEST(Reminders, UsesParticipantLocalTime) {
  const auto plan = make_study_plan(0, kMonday, "America/Vancouver");
  // 07:00 in Vancouver is 15:00 UTC in January.
  EXPECT_TRUE(due_reminders(plan, {}, {}, utc(2024, 1, 8, 7)).empty());
  const auto events = due_reminders(plan, {}, {}, utc(2024, 1, 8, 15));
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].due_at.str(), "2024-01-08T07:00:00-08:00");
}

// Minute-by-minute simulation of a whole study with random submissions.
TEST(Reminders, SoundOverAWholeStudy) {
  std::mt19937 rng(11);
  for (const char* tz : {"UTC", "America/Vancouver", "Asia/Kolkata"}) {
    // The Vancouver plan spans the March clock change.
    const Date start = std::string(tz) == "UTC" ? kMonday : Date(2024, 3, 4);
    const auto plan = make_study_plan(0, start, tz);
    const auto zone = load_zone(tz);
    ReminderPolicy policy = two_channels();
    policy.nudge_offsets_minutes = {60, 180};

    std::vector<EmaResponse> responses;
    std::vector<ReminderEvent> log;
    const auto begin = at_local(plan.first_day(), ClockTime(0), zone);
    const auto end = at_local(plan.last_day() + 1, ClockTime(0), zone);
    std::bernoulli_distribution submit(0.01);
    for (auto t = begin; t < end; t += absl::Minutes(1)) {
      for (auto& e : due_reminders(plan, policy, responses, t, log)) {
        ASSERT_TRUE(plan.is_active_day(e.date));
        const auto open = at_local(e.date, policy.windows[e.window].open, zone);
        const auto close = at_local(e.date, policy.windows[e.window].close, zone);
        ASSERT_GE(e.due_at.instant, open);
        ASSERT_LT(e.due_at.instant, close);
        ASSERT_LE(e.due_at.instant, t);
        ASSERT_EQ(e.due_at.instant, t) << "ticks every minute, so nothing is late";
        for (const auto& r : responses)
          ASSERT_FALSE(r.date == e.date && r.window == e.window) << "reminder for completed slot";
        log.push_back(e);
      }
      const Date today = local_date(t, zone);
      for (auto w : ema::kWindows) {
        const auto open = at_local(today, policy.windows[w].open, zone);
        const auto close = at_local(today, policy.windows[w].close, zone);
        if (t >= open && t < close && plan.is_active_day(today) && submit(rng)) {
          const bool dup = std::any_of(responses.begin(), responses.end(), [&](const auto& r) {
            return r.date == today && r.window == w;
          });
          if (!dup) responses.push_back(response(plan.participant, today, w));
        }
      }
    }
    for (std::size_t i = 0; i < log.size(); ++i)
      for (std::size_t k = i + 1; k < log.size(); ++k) ASSERT_FALSE(log[i].same_occasion(log[k]));
    // 14 active days x 3 windows x 2 channels open reminders; some nudges suppressed.
    const auto opens = std::count_if(log.begin(), log.end(),
                                     [](const auto& e) { return e.kind == ReminderKind::open; });
    EXPECT_EQ(opens, 14 * 3 * 2) << tz;
    EXPECT_LT(static_cast<std::size_t>(opens), log.size());
  }
}

TEST(ReminderPolicy, Validation) {
  ReminderPolicy p;
  EXPECT_NO_THROW(check_policy(p));
  p.channels.clear();
  EXPECT_THROW(check_policy(p), std::invalid_argument);
  p.channels = {Channel::email, Channel::email};
  EXPECT_THROW(check_policy(p), std::invalid_argument);
  p = {};
  p.nudge_offsets_minutes = {0};
  EXPECT_THROW(check_policy(p), std::invalid_argument);
}

TEST(ReminderPolicy, JsonRoundTrip) {
  const auto p = two_channels();
  const nlohmann::json j = p;
  EXPECT_EQ(j.at("channels"), nlohmann::json({"text", "email"}));
  EXPECT_EQ(j.at("nudge_offsets_minutes"), nlohmann::json({60}));
  EXPECT_EQ(j.get<ReminderPolicy>(), p);
  EXPECT_THROW(nlohmann::json({{"channels", nlohmann::json::array()}}).get<ReminderPolicy>(),
               std::invalid_argument);
  EXPECT_THROW(nlohmann::json({{"channels", {"pager"}}}).get<ReminderPolicy>(),
               std::invalid_argument);
  EXPECT_EQ(nlohmann::json::object().get<ReminderPolicy>(), ReminderPolicy{});
}

TEST(ReminderEvent, StreamNotifierWritesJsonLines) {
  const auto plan = make_study_plan(0, kMonday, "UTC");
  std::ostringstream out;
  StreamNotifier n(out);
  const auto events = due_reminders(plan, two_channels(), {}, utc(2024, 1, 8, 12));
  for (const auto& e : events) n.deliver(e);
  std::istringstream in(out.str());
  std::string line;
  std::size_t i = 0;
  while (std::getline(in, line)) {
    ASSERT_LT(i, events.size());
    EXPECT_EQ(nlohmann::json::parse(line).get<ReminderEvent>(), events[i++]);
  }
  EXPECT_EQ(i, 2u);
}

// ---- compliance -----------------------------------------------------------

std::vector<EmaResponse> fill(const std::vector<std::pair<int, int>>& slots) {
  std::vector<EmaResponse> out;
  for (auto [d, w] : slots) out.push_back(response("P001", kMonday + d, ema::kWindows[w]));
  return out;
}

std::vector<EmaResponse> fill_days(int from, int to) {
  std::vector<std::pair<int, int>> s;
  for (int d = from; d < to; ++d)
    for (int w = 0; w < 3; ++w) s.emplace_back(d, w);
  return fill(s);
}

const absl::Time kAfterWeek = utc(2024, 1, 15, 0);

TEST(Compliance, Arithmetic) {
  const auto rs = fill_days(0, 4);
  auto more = fill({{4, 0}, {5, 0}});
  std::vector<EmaResponse> all(rs);
  all.insert(all.end(), more.begin(), more.end());
  const auto week = ema::build_week_dataset(all, kMonday, kAfterWeek);
  EXPECT_EQ(week.counts().completed, 14);
  EXPECT_NEAR(compliance_rate(week), 14.0 / 21.0, 1e-12);
}

TEST(Compliance, VacuousBeforeStart) {
  EXPECT_EQ(compliance_rate(ema::build_week_dataset({}, kMonday, utc(2024, 1, 1, 0))), 1.0);
  EXPECT_EQ(compliance_rate(ema::build_week_dataset({}, kMonday, utc(2024, 1, 8, 11, 59))), 1.0);
  EXPECT_EQ(compliance_rate(ema::build_week_dataset({}, kMonday, utc(2024, 1, 8, 12))), 0.0);
}

TEST(Compliance, MatchesBruteForceOnRandomWeeks) {
  std::mt19937 rng(2024);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::int64_t> when(-86400, 8 * 86400);
  const std::int64_t week_unix = absl::ToUnixSeconds(utc(2024, 1, 8, 0));
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::pair<int, int>> slots;
    const std::int64_t now = week_unix + when(rng);
    for (int d = 0; d < 7; ++d)
      for (int w = 0; w < 3; ++w)
        if (coin(rng)) slots.emplace_back(d, w);
    const auto rs = fill(slots);
    const auto tally = testing::enumerate_slots(rs, kMonday, now);
    const double expect = tally.completed + tally.missed == 0
                              ? 1.0
                              : static_cast<double>(tally.completed) / (tally.completed + tally.missed);
    const auto week = ema::build_week_dataset(rs, kMonday, absl::FromUnixSeconds(now));
    ASSERT_DOUBLE_EQ(compliance_rate(week), expect) << trial;
  }
}

TEST(Compliance, NonIncreasingAsSlotsGetMissed) {
  const auto rs = fill({{0, 0}, {2, 1}, {5, 2}});
  double prev = 1.0;
  for (int h = 0; h <= 8 * 24; ++h) {
    const auto week = ema::build_week_dataset(rs, kMonday, utc(2024, 1, 8, 0) + absl::Hours(h));
    const double r = compliance_rate(week);
    ASSERT_LE(r, prev + 1e-12) << h;
    prev = r;
  }
  EXPECT_NEAR(prev, 3.0 / 21.0, 1e-12);
}

Profile classify(const std::vector<EmaResponse>& rs, const ProfileThresholds& t = {}) {
  return classify_profile(ema::build_week_dataset(rs, kMonday, kAfterWeek), t);
}

TEST(Profile, Full) { EXPECT_EQ(classify(fill_days(0, 7)), Profile::full); }

TEST(Profile, BingerFrontLoadsThenStops) {
  EXPECT_EQ(classify(fill_days(0, 3)), Profile::binger);
  EXPECT_EQ(classify(fill_days(0, 1)), Profile::binger);
  // Silent for the last 7 slots but too much in the second half.
  EXPECT_NE(classify(fill({{0, 0}, {4, 1}, {4, 2}})), Profile::binger);
}

TEST(Profile, MinimalCompleterEveryDay) {
  std::vector<std::pair<int, int>> one_a_day;
  for (int d = 0; d < 7; ++d) one_a_day.emplace_back(d, d % 3);
  EXPECT_EQ(classify(fill(one_a_day)), Profile::minimal_completer);
  one_a_day.emplace_back(3, (3 + 1) % 3);
  EXPECT_EQ(classify(fill(one_a_day)), Profile::minimal_completer);
  one_a_day.emplace_back(3, (3 + 2) % 3);
  EXPECT_EQ(classify(fill(one_a_day)), Profile::sparse);
}

TEST(Profile, SparseOtherwise) {
  EXPECT_EQ(classify({}), Profile::sparse);
  EXPECT_EQ(classify(fill_days(0, 6)), Profile::sparse);
  EXPECT_EQ(classify(fill({{6, 2}})), Profile::sparse);
}

TEST(Profile, ThresholdsAreConfigurable) {
  const auto rs = fill({{0, 0}, {1, 0}, {4, 0}});
  EXPECT_NE(classify(rs), Profile::binger);
  ProfileThresholds loose;
  loose.binger_front_share = 0.6;
  EXPECT_EQ(classify(rs, loose), Profile::binger);
}

TEST(Profile, RefusesUnfinishedWeek) {
  const auto week = ema::build_week_dataset(fill_days(0, 2), kMonday, utc(2024, 1, 10, 9));
  EXPECT_THROW(classify_profile(week), std::invalid_argument);
}

TEST(Profile, TotalAndDeterministic) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::pair<int, int>> slots;
    std::bernoulli_distribution coin(std::uniform_real_distribution<>(0, 1)(rng));
    for (int d = 0; d < 7; ++d)
      for (int w = 0; w < 3; ++w)
        if (coin(rng)) slots.emplace_back(d, w);
    const auto rs = fill(slots);
    const auto a = classify(rs);
    EXPECT_EQ(a, classify(rs));
    if (slots.size() == 21) {
      EXPECT_EQ(a, Profile::full);
    }
  }
}

}  // namespace
}  // namespace emaviz::scheduler
