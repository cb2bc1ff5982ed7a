#include <gtest/gtest.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "emaviz/datastore/export.hpp"
#include "emaviz/datastore/forensics.hpp"
#include "emaviz/ema/json.hpp"
#include "emaviz/service/http_server.hpp"
#include "support/temp_dir.hpp"

using namespace emaviz;
using namespace emaviz::service;
using datastore::EventKind;
using nlohmann::json;

namespace {

const Date kStart(2024, 1, 8);

absl::Time utc(int y, int mo, int d, int h, int mi = 0) {
  return absl::FromCivil(absl::CivilSecond(y, mo, d, h, mi, 0), absl::UTCTimeZone());
}

ServiceConfig base_config() {
  ServiceConfig c;
  c.codes = {{"code-a", "P001", kStart, "UTC", 0},  // AB: EMA-only, washout, EMA+viz
             {"code-b", "P002", kStart, "UTC", 1}};  // BA: EMA+viz, washout, EMA-only
  c.admin_code = "clinic";
  return c;
}

class RecordingNotifier : public scheduler::Notifier {
 public:
  void deliver(const scheduler::ReminderEvent& e) override { events.push_back(e); }
  std::vector<scheduler::ReminderEvent> events;
};

/// A service over a fresh store with a settable clock.
struct Fixture {
  emaviz::testing::TempDir dir;
  datastore::LogStore store{dir / "store.log", {.sync = false}};
  std::shared_ptr<std::atomic<std::int64_t>> now = std::make_shared<std::atomic<std::int64_t>>(0);
  RecordingNotifier notifier;
  Service service;

  explicit Fixture(ServiceConfig c = base_config())
      : service(std::move(c), store, [n = now] { return absl::FromUnixSeconds(n->load()); }, &notifier) {}

  void at(absl::Time t) { now->store(absl::ToUnixSeconds(t)); }

  HttpResponse get(const std::string& path, const std::string& code, std::map<std::string, std::string> query = {}) {
    HttpRequest r;
    r.path = path;
    r.query = std::move(query);
    if (!code.empty()) r.headers["authorization"] = "Bearer " + code;
    return service.handle(r);
  }
  HttpResponse post(const std::string& path, const std::string& code, const std::string& body) {
    HttpRequest r;
    r.method = "POST";
    r.path = path;
    r.body = body;
    if (!code.empty()) r.headers["authorization"] = "Bearer " + code;
    return service.handle(r);
  }
  std::size_t events(EventKind kind, const std::string& participant = "") {
    std::size_t n = 0;
    for (const auto& e : store.all_events())
      n += e.kind == kind && (participant.empty() || e.participant == participant);
    return n;
  }
};

json response_body(Date d, std::string_view window, json answers = json::object()) {
  return {{"date", format_date(d)}, {"window", window}, {"answers", std::move(answers)}};
}

}  // namespace

// ---- config -------------------------------------------------------------------

TEST(Config, ParsesAndResolvesRelativePaths) {
  emaviz::testing::TempDir dir;
  std::ofstream(dir / "survey.json") << ema::survey_to_json(ema::default_survey_definition()).dump();
  const json j = {{"listen", "0.0.0.0:9090"},
                  {"data", "store.log"},
                  {"survey", "survey.json"},
                  {"week_start", "sunday"},
                  {"admin_code", "clinic"},
                  {"participants", {{{"code", "x"}, {"participant", "P001"}, {"start", "2024-01-07"}}}}};
  std::ofstream(dir / "config.json") << j.dump();
  const auto c = load_config(dir / "config.json");
  EXPECT_EQ(c.host, "0.0.0.0");
  EXPECT_EQ(c.port, 9090);
  EXPECT_EQ(c.data_path, dir / "store.log");
  EXPECT_EQ(c.survey, (dir / "survey.json").string());
  EXPECT_EQ(c.week_start, absl::Weekday::sunday);
  ASSERT_EQ(c.codes.size(), 1u);
  EXPECT_EQ(c.codes[0].timezone, "UTC");
  EXPECT_EQ(config_from_json(config_to_json(c)).codes[0].start, Date(2024, 1, 7));
}

TEST(Config, RejectsBadDocuments) {
  auto with = [](json extra) {
    json j = {{"participants", {{{"code", "x"}, {"participant", "P001"}, {"start", "2024-01-08"}}}}};
    if (!extra.is_null()) j.update(extra);
    return j;
  };
  EXPECT_NO_THROW(config_from_json(with(json::object())));
  EXPECT_THROW(config_from_json(with({{"listen", "localhost"}})), std::invalid_argument);
  EXPECT_THROW(config_from_json(with({{"listen", "h:99999"}})), std::invalid_argument);
  EXPECT_THROW(config_from_json(with({{"survey", "/no/such/file.json"}})), std::invalid_argument);
  EXPECT_THROW(config_from_json(with({{"participants",
                                       {{{"code", "x"}, {"participant", "P001"}, {"start", "2024-01-08"}},
                                        {{"code", "x"}, {"participant", "P002"}, {"start", "2024-01-08"}}}}})),
               std::invalid_argument);
  EXPECT_THROW(config_from_json(with({{"participants",
                                       {{{"code", "x"}, {"participant", "P001"}, {"start", "2024-01-09"}}}}})),
               std::invalid_argument);
  EXPECT_THROW(config_from_json(with({{"participants",
                                       {{{"code", "x"}, {"participant", "P001"}, {"start", "2024-01-08"},
                                         {"timezone", "Mars/Olympus"}}}}})),
               std::invalid_argument);
  EXPECT_THROW(load_config("/no/such/config.json"), std::invalid_argument);
}

TEST(Config, EnvironmentOverridesListenAndData) {
  ServiceConfig c;
  apply_env_overrides(c, [](const char* name) -> const char* {
    if (std::string_view(name) == "EMAVIZ_LISTEN") return "10.0.0.1:7000";
    if (std::string_view(name) == "EMAVIZ_DATA") return "/var/lib/emaviz.log";
    return nullptr;
  });
  EXPECT_EQ(c.host, "10.0.0.1");
  EXPECT_EQ(c.port, 7000);
  EXPECT_EQ(c.data_path, "/var/lib/emaviz.log");
  ServiceConfig untouched;
  apply_env_overrides(untouched, [](const char*) -> const char* { return nullptr; });
  EXPECT_EQ(untouched.port, 8080);
}

// ---- survey delivery -----------------------------------------------------------------

TEST(CurrentSurvey, MorningWindowIncludesSleepItems) {
  Fixture f;
  f.at(utc(2024, 1, 9, 8));
  const auto r = f.get("/api/survey/current", "code-a");
  ASSERT_EQ(r.status, 200) << r.body;
  const auto j = json::parse(r.body);
  EXPECT_EQ(j["status"], "open");
  EXPECT_EQ(j["window"], "morning");
  EXPECT_EQ(j["date"], "2024-01-09");
  std::set<std::string> qids;
  for (const auto& q : j["questions"]) qids.insert(q["qid"].get<std::string>());
  EXPECT_TRUE(qids.count("sleep_bedtime") && qids.count("sleep_waketime") && qids.count("sleep_quality"));
  EXPECT_FALSE(qids.count("school_attended"));
  EXPECT_EQ(f.events(EventKind::survey_opened, "P001"), 1u);

  f.at(utc(2024, 1, 9, 13));
  const auto afternoon = json::parse(f.get("/api/survey/current", "code-a").body);
  qids.clear();
  for (const auto& q : afternoon["questions"]) qids.insert(q["qid"].get<std::string>());
  EXPECT_FALSE(qids.count("sleep_bedtime"));
  EXPECT_TRUE(qids.count("school_attended"));
}

TEST(CurrentSurvey, LateEveningPointsToTomorrowMorning) {
  Fixture f;
  f.at(utc(2024, 1, 9, 23, 30));
  const auto j = json::parse(f.get("/api/survey/current", "code-a").body);
  EXPECT_EQ(j["status"], "closed");
  EXPECT_EQ(j["next"]["date"], "2024-01-10");
  EXPECT_EQ(j["next"]["window"], "morning");
  EXPECT_EQ(j["next"]["opens_at"], "2024-01-10T07:00:00+00:00");
  EXPECT_EQ(f.events(EventKind::survey_opened), 0u);
}

TEST(CurrentSurvey, WashoutAndOutsideStudyConflict) {
  Fixture f;
  f.at(utc(2024, 1, 17, 8));
  const auto r = f.get("/api/survey/current", "code-a");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(json::parse(r.body)["error"], "washout");
  f.at(utc(2024, 2, 1, 8));
  EXPECT_EQ(json::parse(f.get("/api/survey/current", "code-a").body)["error"], "outside-study");
}

TEST(Auth, UnknownCodesAreRefusedAndLogged) {
  Fixture f;
  f.at(utc(2024, 1, 9, 8));
  EXPECT_EQ(f.get("/api/survey/current", "nope").status, 401);
  EXPECT_EQ(f.get("/api/survey/current", "").status, 401);
  EXPECT_EQ(f.post("/api/responses", "", response_body(kStart, "morning").dump()).status, 401);
  EXPECT_EQ(f.get("/api/dashboard.svg", "code").status, 401);
  EXPECT_EQ(f.events(EventKind::login_failed), 4u);
  for (const auto& e : f.store.all_events()) EXPECT_EQ(e.detail.find("code"), std::string::npos);
}

TEST(Routing, PublicEndpointsAndErrors) {
  Fixture f;
  EXPECT_EQ(f.get("/api/health", "").status, 200);
  const auto def = f.get("/api/survey/definition", "");
  ASSERT_EQ(def.status, 200);
  EXPECT_EQ(ema::survey_from_json(json::parse(def.body)), ema::default_survey_definition());
  EXPECT_EQ(f.get("/api/nothing", "code-a").status, 404);
  EXPECT_EQ(f.post("/api/survey/current", "code-a", "{}").status, 405);
  EXPECT_EQ(f.get("/api/responses", "code-a").status, 405);
  const auto plan = json::parse(f.get("/api/plan", "code-a").body);
  EXPECT_EQ(plan["participant"], "P001");
}

// ---- submission ----------------------------------------------------------------------

TEST(Submit, RevisionsValidationAndOwnership) {
  Fixture f;
  f.at(utc(2024, 1, 9, 8));
  const auto partial = response_body(Date(2024, 1, 9), "morning", {{"emotion_happy", {{"magnitude", 7}}}});
  auto r = f.post("/api/responses", "code-a", partial.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(json::parse(r.body)["revision"], 1);
  f.at(utc(2024, 1, 9, 9));
  EXPECT_EQ(json::parse(f.post("/api/responses", "code-a", partial.dump()).body)["revision"], 2);

  const auto bad = response_body(Date(2024, 1, 9), "morning", {{"emotion_happy", {{"magnitude", 11}}}});
  r = f.post("/api/responses", "code-a", bad.dump());
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(json::parse(r.body)["errors"][0]["qid"], "emotion_happy");

  EXPECT_EQ(f.post("/api/responses", "code-a", "{not json").status, 400);
  auto foreign = partial;
  foreign["participant"] = "P002";
  EXPECT_EQ(f.post("/api/responses", "code-a", foreign.dump()).status, 403);
  EXPECT_EQ(f.post("/api/responses", "code-a", response_body(Date(2024, 1, 16), "morning").dump()).status, 409);

  // Only the two accepted submissions changed state, each with one event.
  EXPECT_EQ(f.store.responses("P001").size(), 2u);
  EXPECT_EQ(f.events(EventKind::response_submitted, "P001"), 2u);
}

TEST(Submit, KeepsClientTimestamp) {
  Fixture f;
  f.at(utc(2024, 1, 10, 9));
  auto body = response_body(Date(2024, 1, 9), "evening");
  body["submitted_at"] = "2024-01-09T18:30:00Z";
  ASSERT_EQ(f.post("/api/responses", "code-a", body.dump()).status, 200);
  const auto stored = f.store.responses("P001");
  ASSERT_EQ(stored.size(), 1u);
  EXPECT_EQ(stored[0].submitted_at.str(), "2024-01-09T18:30:00+00:00");
  const auto week = f.store.get_week("P001", kStart, utc(2024, 1, 10, 9));
  EXPECT_TRUE(std::holds_alternative<ema::Completed>(week.at(1, ema::SurveyWindow::evening)));
}

TEST(Submit, ConcurrentWritersKeepOneEventPerResponse) {
  Fixture f;
  f.at(utc(2024, 1, 14, 23));
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 20; ++i) {
        const auto code = t % 2 ? "code-b" : "code-a";
        const auto body = response_body(kStart + (i % 7), "afternoon", {{"peer_worry", {{"magnitude", i % 11}}}});
        ok += f.post("/api/responses", code, body.dump()).status == 200;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(ok, 160);
  EXPECT_EQ(f.events(EventKind::response_submitted), 160u);
  std::set<int> revisions;
  for (const auto& r : f.store.responses("P001"))
    if (r.date == kStart) revisions.insert(r.revision);
  EXPECT_EQ(revisions.size(), static_cast<std::size_t>(*revisions.rbegin()));
}

// ---- dashboard ---------------------------------------------------------------------------

TEST(Dashboard, OnlyVisualizationWeeksAreServed) {
  Fixture f;
  f.at(utc(2024, 1, 28, 23));
  const std::array<Date, 3> weeks = {kStart, kStart + 7, kStart + 14};
  // P001 is AB: only the third week shows charts; P002 is BA: only the first.
  for (int w = 0; w < 3; ++w) {
    const auto a = f.get("/api/dashboard.svg", "code-a", {{"week", format_date(weeks[w])}});
    const auto b = f.get("/api/dashboard.svg", "code-b", {{"week", format_date(weeks[w])}});
    EXPECT_EQ(a.status, w == 2 ? 200 : 403) << w;
    EXPECT_EQ(b.status, w == 0 ? 200 : 403) << w;
  }
  const auto ok = f.get("/api/dashboard.svg", "code-a", {{"week", "2024-01-22"}});
  EXPECT_EQ(ok.content_type, "image/svg+xml");
  EXPECT_EQ(ok.headers.at("Cache-Control"), "no-store");
  EXPECT_EQ(ok.body.rfind("<?xml", 0), 0u);
  EXPECT_EQ(f.get("/api/dashboard.svg", "code-a", {{"week", "22/01/2024"}}).status, 400);
  EXPECT_EQ(f.get("/api/dashboard.svg", "code-a", {{"week", "2024-01-23"}}).status, 403);
}

TEST(Dashboard, FutureVisualizationWeekIsRefused) {
  Fixture f;
  f.at(utc(2024, 1, 10, 9));
  EXPECT_EQ(f.get("/api/dashboard.svg", "code-a", {{"week", "2024-01-22"}}).status, 403);
  EXPECT_EQ(f.get("/api/dashboard.svg", "code-b").status, 200);  // current week by default
  EXPECT_EQ(f.get("/api/dashboard.svg", "code-a").status, 403);
}

TEST(Dashboard, MidWeekLeavesPendingDaysBlank) {
  Fixture f;
  f.at(utc(2024, 1, 10, 9));  // P002's visualization week, Wednesday morning
  const auto svg = f.get("/api/dashboard.svg", "code-b").body;
  // Monday and Tuesday are missed, the rest pending: only day 0 and 1 carry glyphs.
  EXPECT_NE(svg.find("miss-peer-worry-d1-w2"), std::string::npos);
  EXPECT_EQ(svg.find("-d2-w1\""), std::string::npos);
  EXPECT_EQ(svg.find("-d5-"), std::string::npos);
}

TEST(Dashboard, EveryFetchIsLoggedOnce) {
  Fixture f;
  f.at(utc(2024, 1, 9, 12));
  for (int i = 0; i < 5; ++i) {
    f.at(utc(2024, 1, 9, 12, i));
    ASSERT_EQ(f.get("/api/dashboard.svg", "code-b").status, 200);
  }
  f.get("/api/dashboard.svg", "code-a");  // refused, not a view
  const auto report = datastore::forensic_report(f.store, "P002", kStart);
  EXPECT_EQ(report.counts.at(EventKind::dashboard_viewed), 5);
  EXPECT_FALSE(report.dashboard_never_viewed);
  EXPECT_EQ(f.events(EventKind::dashboard_viewed, "P001"), 0u);
}

// ---- export ------------------------------------------------------------------------------

TEST(Export, ClinicianCodeOnly) {
  Fixture f;
  const auto empty = f.get("/api/export", "clinic", {{"format", "csv"}});
  ASSERT_EQ(empty.status, 200);
  EXPECT_EQ(empty.body, datastore::rows_to_csv({}));
  EXPECT_EQ(empty.body.find("participant,date,window,qid"), 0u);
  EXPECT_EQ(f.get("/api/export", "code-a").status, 403);
  EXPECT_EQ(f.get("/api/export", "nope").status, 401);
  EXPECT_EQ(f.get("/api/export", "clinic", {{"format", "xml"}}).status, 400);
  f.at(utc(2024, 1, 9, 8));
  f.post("/api/responses", "code-a",
         response_body(Date(2024, 1, 9), "morning", {{"emotion_sad", {{"magnitude", 0}}}}).dump());
  const auto j = json::parse(f.get("/api/export", "clinic", {{"format", "json"}}).body);
  ASSERT_EQ(j["rows"].size(), 1u);
  EXPECT_EQ(j["rows"][0]["value"], "0");
}

// ---- reminders ----------------------------------------------------------------------------

TEST(Reminders, TickSendsLogsAndDeduplicates) {
  Fixture f;
  f.at(utc(2024, 1, 9, 7));
  const auto sent = f.service.tick();
  ASSERT_EQ(sent.size(), 2u);  // both participants' open reminders
  EXPECT_EQ(f.notifier.events.size(), 2u);
  EXPECT_TRUE(f.service.tick().empty());
  EXPECT_EQ(f.events(EventKind::reminder_sent), 2u);

  // A completed slot is not nudged.
  f.post("/api/responses", "code-a", response_body(Date(2024, 1, 9), "morning").dump());
  f.at(utc(2024, 1, 9, 8));
  const auto nudges = f.service.tick();
  ASSERT_EQ(nudges.size(), 1u);
  EXPECT_EQ(nudges[0].participant, "P002");
  EXPECT_EQ(nudges[0].kind, scheduler::ReminderKind::nudge);
}

TEST(Reminders, WashoutWeekIsSilent) {
  Fixture f;
  for (Date d = kStart + 7; d < kStart + 14; ++d) {
    for (int h = 0; h < 24; ++h) {
      f.at(absl::FromCivil(absl::CivilHour(d.year(), d.month(), d.day(), h), absl::UTCTimeZone()));
      EXPECT_TRUE(f.service.tick().empty());
    }
  }
  EXPECT_EQ(f.events(EventKind::reminder_sent), 0u);
}

// ---- socket --------------------------------------------------------------------------------

TEST(HttpServer, ServesOverARealSocket) {
  Fixture f;
  f.at(utc(2024, 1, 9, 8));
  HttpServer server(f.service);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread runner([&] { server.run(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  httplib::Headers auth = {{"Authorization", "Bearer code-a"}};
  auto post = client.Post("/api/responses", auth, response_body(Date(2024, 1, 9), "morning").dump(),
                          "application/json");
  ASSERT_TRUE(post);
  EXPECT_EQ(post->status, 200);
  EXPECT_EQ(json::parse(post->body)["revision"], 1);
  auto current = client.Get("/api/survey/current", auth);
  ASSERT_TRUE(current);
  EXPECT_EQ(json::parse(current->body)["answered"], true);
  auto denied = client.Get("/api/dashboard.svg", auth);
  ASSERT_TRUE(denied);
  EXPECT_EQ(denied->status, 403);

  server.stop();
  runner.join();
}
