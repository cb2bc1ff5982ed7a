#include "emaviz/service/service.hpp"

#include <fstream>

#include "emaviz/datastore/export.hpp"
#include "emaviz/ema/json.hpp"
#include "emaviz/renderer/dashboard.hpp"

namespace emaviz::service {

using datastore::EventKind;
using nlohmann::json;

HttpResponse json_response(int status, const json& body) {
  HttpResponse r;
  r.status = status;
  r.body = body.dump();
  return r;
}

HttpResponse error_response(int status, std::string_view code, std::string_view message) {
  return json_response(status, {{"error", code}, {"message", message}});
}

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string bearer(const HttpRequest& r) {
  const auto it = r.headers.find("authorization");
  if (it == r.headers.end()) return {};
  constexpr std::string_view kPrefix = "Bearer ";
  if (it->second.compare(0, kPrefix.size(), kPrefix) != 0) return {};
  return it->second.substr(kPrefix.size());
}

/// Constant-time comparison so that response timing says nothing about a code.
bool same_code(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  unsigned char diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff |= static_cast<unsigned char>(a[i] ^ b[i]);
  return diff == 0;
}

std::string stamp(absl::Time t, const absl::TimeZone& zone) { return Timestamp::in_zone(t, zone).str(); }

}  // namespace

Service::Service(ServiceConfig config, datastore::LogStore& store, Clock clock,
                 scheduler::Notifier* notifier)
    : config_(std::move(config)),
      store_(store),
      clock_(std::move(clock)),
      notifier_(notifier),
      survey_(config_.survey == "builtin" ? ema::default_survey_definition()
                                          : ema::survey_from_json(read_json_file(config_.survey))),
      theme_(config_.theme == "builtin" ? renderer::default_theme()
                                        : renderer::theme_from_json(read_json_file(config_.theme))) {
  check_config(config_);
  for (std::size_t i = 0; i < config_.codes.size(); ++i) {
    const auto& s = config_.codes[i];
    store_.put_participant(s.participant);
    // The stored plan wins over the config once enrolment has happened.
    if (!store_.plan(s.participant)) {
      store_.put_plan(scheduler::make_study_plan(s.index.value_or(static_cast<int>(i)), s.start,
                                                 s.timezone, config_.week_start, s.participant));
    }
  }
}

ema::SlotCalendar Service::calendar(const scheduler::StudyPlan& plan) const {
  return ema::SlotCalendar{config_.reminders.windows, load_zone(plan.timezone)};
}

std::optional<Service::Caller> Service::authenticate(const HttpRequest& request) {
  const auto token = bearer(request);
  if (token.empty()) return std::nullopt;
  for (const auto& s : config_.codes) {
    if (same_code(s.code, token)) {
      auto plan = store_.plan(s.participant);
      if (!plan) return std::nullopt;
      return Caller{&s, std::move(*plan)};
    }
  }
  return std::nullopt;
}

void Service::log(const std::string& participant, const absl::TimeZone& zone, EventKind kind,
                  std::string detail) {
  std::lock_guard lock(event_mutex_);
  store_.append_event({participant, Timestamp::in_zone(clock_(), zone), kind, std::move(detail)});
}

HttpResponse Service::unauthorized(const HttpRequest& request) {
  // Codes are never written to the log.
  log("unknown", absl::UTCTimeZone(), EventKind::login_failed, request.method + " " + request.path);
  return error_response(401, "unauthorized", "a valid study code is required");
}

HttpResponse Service::handle(const HttpRequest& request) {
  try {
    const auto& path = request.path;
    const bool get = request.method == "GET";
    const bool post = request.method == "POST";

    if (path == "/api/health") {
      if (!get) return error_response(405, "method-not-allowed", "use GET");
      return json_response(200, {{"status", "ok"}});
    }
    if (path == "/api/survey/definition") {
      if (!get) return error_response(405, "method-not-allowed", "use GET");
      return json_response(200, ema::survey_to_json(survey_));
    }
    if (path == "/api/export") {
      if (!get) return error_response(405, "method-not-allowed", "use GET");
      return export_data(request);
    }

    const bool known = path == "/api/survey/current" || path == "/api/responses" ||
                       path == "/api/plan" || path == "/api/dashboard.svg";
    if (!known) return error_response(404, "not-found", "no such endpoint");
    if ((path == "/api/responses" && !post) || (path != "/api/responses" && !get))
      return error_response(405, "method-not-allowed", path == "/api/responses" ? "use POST" : "use GET");

    const auto caller = authenticate(request);
    if (!caller) return unauthorized(request);
    if (path == "/api/survey/current") return current_survey(*caller);
    if (path == "/api/responses") return submit(*caller, request);
    if (path == "/api/dashboard.svg") return dashboard(*caller, request);
    json plan = caller->plan;
    return json_response(200, plan);
  } catch (const datastore::StorageError& e) {
    return error_response(503, "storage", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

HttpResponse Service::current_survey(const Caller& caller) {
  const auto& plan = caller.plan;
  const auto cal = calendar(plan);
  const auto now = clock_();
  const Date today = local_date(now, cal.zone);
  const auto week = plan.week_of(today);
  if (!week) return error_response(409, "outside-study", "no study week covers today");
  if (week->kind == scheduler::Condition::washout)
    return error_response(409, "washout", "no surveys during the washout week");

  for (auto w : ema::kWindows) {
    if (cal.opens_at(today, w) <= now && now < cal.closes_at(today, w)) {
      json questions = json::array();
      for (const auto* q : survey_.asked_in(w)) questions.push_back(*q);
      bool answered = false;
      for (const auto& r : store_.responses(plan.participant))
        answered = answered || (r.date == today && r.window == w);
      log(plan.participant, cal.zone, EventKind::survey_opened,
          format_date(today) + " " + std::string(ema::to_string(w)));
      return json_response(200, {{"status", "open"},
                                 {"participant", plan.participant},
                                 {"date", today},
                                 {"window", w},
                                 {"opens_at", stamp(cal.opens_at(today, w), cal.zone)},
                                 {"closes_at", stamp(cal.closes_at(today, w), cal.zone)},
                                 {"survey_version", survey_.version()},
                                 {"answered", answered},
                                 {"questions", questions}});
    }
  }

  json next = nullptr;
  for (Date d = today; d <= plan.last_day() && next.is_null(); ++d) {
    if (!plan.is_active_day(d)) continue;
    for (auto w : ema::kWindows) {
      if (cal.opens_at(d, w) > now) {
        next = {{"date", d}, {"window", w}, {"opens_at", stamp(cal.opens_at(d, w), cal.zone)}};
        break;
      }
    }
  }
  return json_response(200, {{"status", "closed"}, {"participant", plan.participant}, {"next", next}});
}

HttpResponse Service::submit(const Caller& caller, const HttpRequest& request) {
  const auto& plan = caller.plan;
  const auto cal = calendar(plan);
  ema::EmaResponse r;
  try {
    auto body = json::parse(request.body);
    if (!body.is_object()) throw std::invalid_argument("body must be a JSON object");
    if (!body.contains("participant")) body["participant"] = plan.participant;
    // Offline clients send the original time; live clients may leave it to the server.
    if (!body.contains("submitted_at")) body["submitted_at"] = stamp(clock_(), cal.zone);
    if (!body.contains("answers")) body["answers"] = json::object();
    r = body.get<ema::EmaResponse>();
  } catch (const std::exception& e) {
    return error_response(400, "malformed", e.what());
  }
  if (r.participant != plan.participant)
    return error_response(403, "forbidden", "responses may only be submitted for your own code");

  const auto errors = ema::validate_response(survey_, r);
  if (!errors.empty()) {
    json list = json::array();
    for (const auto& e : errors)
      list.push_back({{"qid", e.qid}, {"violation", ema::to_string(e.violation)}, {"message", e.message}});
    return json_response(400, {{"error", "invalid-response"}, {"errors", list}});
  }
  if (!plan.is_active_day(r.date))
    return error_response(409, "inactive-day", "the date is not an active study day");

  int revision = 0;
  {
    // Store and log together so the event log mirrors the response log.
    std::lock_guard lock(event_mutex_);
    revision = store_.put_response(r);
    store_.append_event({plan.participant, Timestamp::in_zone(clock_(), cal.zone),
                         EventKind::response_submitted,
                         format_date(r.date) + " " + std::string(ema::to_string(r.window)) + " r" +
                             std::to_string(revision)});
  }
  return json_response(200, {{"revision", revision}});
}

HttpResponse Service::dashboard(const Caller& caller, const HttpRequest& request) {
  const auto& plan = caller.plan;
  const auto cal = calendar(plan);
  const auto now = clock_();
  const Date today = local_date(now, cal.zone);
  std::optional<scheduler::ConditionWeek> week;
  if (const auto it = request.query.find("week"); it != request.query.end()) {
    Date start;
    try {
      start = parse_date(it->second);
    } catch (const std::exception&) {
      return error_response(400, "bad-week", "week must be YYYY-MM-DD");
    }
    for (const auto& w : plan.weeks)
      if (w.week_start == start) week = w;
  } else {
    week = plan.week_of(today);
  }
  if (!week || week->kind != scheduler::Condition::ema_plus_viz || week->week_start > today)
    return error_response(403, "no-dashboard", "visualizations are only available in the visualization week");

  const auto data = store_.get_week(plan.participant, week->week_start, now, config_.reminders.windows);
  auto svg = renderer::render_dashboard(data, theme_).svg;
  log(plan.participant, cal.zone, EventKind::dashboard_viewed, format_date(week->week_start));
  HttpResponse r;
  r.content_type = "image/svg+xml";
  r.body = std::move(svg);
  r.headers["Cache-Control"] = "no-store";
  return r;
}

HttpResponse Service::export_data(const HttpRequest& request) {
  const auto token = bearer(request);
  if (token.empty() || config_.admin_code.empty()) return unauthorized(request);
  if (!same_code(token, config_.admin_code)) {
    for (const auto& s : config_.codes)
      if (same_code(s.code, token)) return error_response(403, "forbidden", "export needs the clinician code");
    return unauthorized(request);
  }
  datastore::ExportFilter filter;
  try {
    if (auto it = request.query.find("participant"); it != request.query.end()) filter.participant = it->second;
    if (auto it = request.query.find("from"); it != request.query.end()) filter.from = parse_date(it->second);
    if (auto it = request.query.find("to"); it != request.query.end()) filter.to = parse_date(it->second);
  } catch (const std::exception& e) {
    return error_response(400, "bad-filter", e.what());
  }
  const auto format = request.query.count("format") ? request.query.at("format") : "csv";
  if (format == "json") return json_response(200, datastore::export_json(store_, filter));
  if (format != "csv") return error_response(400, "bad-format", "format must be csv or json");
  HttpResponse r;
  r.content_type = "text/csv; charset=utf-8";
  r.body = datastore::export_csv(store_, filter);
  return r;
}

std::vector<scheduler::ReminderEvent> Service::tick() {
  std::vector<scheduler::ReminderEvent> sent;
  std::lock_guard lock(event_mutex_);
  const auto now = clock_();
  for (const auto& s : config_.codes) {
    const auto plan = store_.plan(s.participant);
    if (!plan) continue;
    std::vector<scheduler::ReminderEvent> emitted;
    for (const auto& e : store_.events(s.participant)) {
      if (e.kind != EventKind::reminder_sent) continue;
      try {
        emitted.push_back(json::parse(e.detail).get<scheduler::ReminderEvent>());
      } catch (const std::exception&) {
        // Foreign detail text; nothing to de-duplicate against.
      }
    }
    const auto responses = store_.responses(s.participant);
    const auto zone = load_zone(plan->timezone);
    for (const auto& e : scheduler::due_reminders(*plan, config_.reminders, responses, now, emitted)) {
      if (notifier_) notifier_->deliver(e);
      store_.append_event({s.participant, Timestamp::in_zone(now, zone), EventKind::reminder_sent,
                           json(e).dump()});
      sent.push_back(e);
    }
  }
  return sent;
}

}  // namespace emaviz::service
