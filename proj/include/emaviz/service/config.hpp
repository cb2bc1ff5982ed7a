#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "emaviz/scheduler/reminders.hpp"

namespace emaviz::service {

/// A participant's bearer token and enrolment.
struct StudyCode {
  std::string code;
  std::string participant;
  Date start;
  std::string timezone = "UTC";
  /// Position in the randomisation sequence; defaults to the entry's list position.
  std::optional<int> index;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_path = "emaviz.log";
  /// "builtin" or a path to a survey definition document.
  std::string survey = "builtin";
  /// "builtin" or a path to a theme document.
  std::string theme = "builtin";
  scheduler::ReminderPolicy reminders;
  absl::Weekday week_start = absl::Weekday::monday;
  std::vector<StudyCode> codes;
  /// Token for the clinician export; exports are refused when empty.
  std::string admin_code;
};

/// Throws std::invalid_argument on duplicate codes or participants, an unreadable
/// survey or theme path, a bad port, an unknown zone or a misaligned start date.
void check_config(const ServiceConfig& config);

/// Reads the JSON document; relative survey, theme and data paths resolve against the
/// file's directory.
ServiceConfig load_config(const std::filesystem::path& path);
ServiceConfig config_from_json(const nlohmann::json& j,
                               const std::filesystem::path& base = {});
nlohmann::json config_to_json(const ServiceConfig& config);

/// EMAVIZ_LISTEN ("host:port") and EMAVIZ_DATA override the file. `getenv` is
/// injectable for tests.
void apply_env_overrides(ServiceConfig& config,
                         const std::function<const char*(const char*)>& getenv = ::getenv);

/// "host:port" into its parts; throws std::invalid_argument.
std::pair<std::string, int> parse_listen(std::string_view text);

}  // namespace emaviz::service
