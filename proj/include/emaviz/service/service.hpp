#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>

#include <absl/time/clock.h>

#include "emaviz/datastore/log_store.hpp"
#include "emaviz/renderer/theme.hpp"
#include "emaviz/service/config.hpp"

namespace emaviz::service {

/// Transport-neutral request. Header names are lower-case.
struct HttpRequest {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

using Clock = std::function<absl::Time()>;

/// The HTTP API over one store. Routes:
///   GET  /api/health
///   GET  /api/survey/definition
///   GET  /api/survey/current          bearer study code
///   POST /api/responses               bearer study code
///   GET  /api/plan                    bearer study code
///   GET  /api/dashboard.svg?week=     bearer study code, EMA+viz weeks only
///   GET  /api/export?format=csv|json  bearer admin code
/// Safe to call from many threads.
class Service {
 public:
  /// Registers every configured participant and plan that the store lacks. Throws
  /// std::invalid_argument if the survey or theme file does not parse.
  Service(ServiceConfig config, datastore::LogStore& store, Clock clock = absl::Now,
          scheduler::Notifier* notifier = nullptr);

  HttpResponse handle(const HttpRequest& request);

  /// Sends and logs every reminder due now. Returns what was sent.
  std::vector<scheduler::ReminderEvent> tick();

  const ServiceConfig& config() const { return config_; }
  const ema::SurveyDefinition& survey() const { return survey_; }

 private:
  struct Caller {
    const StudyCode* code = nullptr;
    scheduler::StudyPlan plan;
  };

  std::optional<Caller> authenticate(const HttpRequest& request);
  HttpResponse unauthorized(const HttpRequest& request);
  void log(const std::string& participant, const absl::TimeZone& zone, datastore::EventKind kind,
           std::string detail);
  ema::SlotCalendar calendar(const scheduler::StudyPlan& plan) const;

  HttpResponse current_survey(const Caller& caller);
  HttpResponse submit(const Caller& caller, const HttpRequest& request);
  HttpResponse dashboard(const Caller& caller, const HttpRequest& request);
  HttpResponse export_data(const HttpRequest& request);

  ServiceConfig config_;
  datastore::LogStore& store_;
  Clock clock_;
  scheduler::Notifier* notifier_;
  ema::SurveyDefinition survey_;
  renderer::Theme theme_;
  /// Serialises clock reads with event appends so per-participant event order holds.
  std::mutex event_mutex_;
};

HttpResponse json_response(int status, const nlohmann::json& body);
HttpResponse error_response(int status, std::string_view code, std::string_view message);

}  // namespace emaviz::service
