#include "emaviz/service/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <stdexcept>

#include "emaviz/ema/json.hpp"
#include "emaviz/scheduler/plan.hpp"

namespace emaviz::service {

namespace {

bool readable(const std::filesystem::path& p) {
  std::ifstream in(p);
  return in.good();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty() || p == "builtin" || base.empty()) return p;
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

std::pair<std::string, int> parse_listen(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0)
    throw std::invalid_argument("listen address must be host:port, got '" + std::string(text) + "'");
  const std::string port_text(text.substr(colon + 1));
  std::size_t used = 0;
  int port = 0;
  try {
    port = std::stoi(port_text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used != port_text.size() || port < 0 || port > 65535)
    throw std::invalid_argument("bad port in listen address '" + std::string(text) + "'");
  return {std::string(text.substr(0, colon)), port};
}

void check_config(const ServiceConfig& c) {
  if (c.port < 0 || c.port > 65535) throw std::invalid_argument("port out of range");
  if (c.survey != "builtin" && !readable(c.survey))
    throw std::invalid_argument("survey definition not readable: " + c.survey);
  if (c.theme != "builtin" && !readable(c.theme))
    throw std::invalid_argument("theme not readable: " + c.theme);
  scheduler::check_policy(c.reminders);
  std::set<std::string> codes, participants;
  if (!c.admin_code.empty()) codes.insert(c.admin_code);
  for (std::size_t i = 0; i < c.codes.size(); ++i) {
    const auto& s = c.codes[i];
    if (s.code.empty()) throw std::invalid_argument("empty study code for " + s.participant);
    if (!codes.insert(s.code).second) throw std::invalid_argument("duplicate study code");
    if (s.participant.empty() || !participants.insert(s.participant).second)
      throw std::invalid_argument("duplicate or empty participant '" + s.participant + "'");
    // Throws for unknown zones and misaligned starts.
    scheduler::make_study_plan(s.index.value_or(static_cast<int>(i)), s.start, s.timezone, c.week_start,
                               s.participant);
  }
}

ServiceConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base) {
  ServiceConfig c;
  try {
    if (j.contains("listen")) std::tie(c.host, c.port) = parse_listen(j.at("listen").get<std::string>());
    if (j.contains("data")) c.data_path = resolve(base, j.at("data").get<std::string>());
    if (j.contains("survey")) c.survey = resolve(base, j.at("survey").get<std::string>()).string();
    if (j.contains("theme")) c.theme = resolve(base, j.at("theme").get<std::string>()).string();
    if (j.contains("reminders")) c.reminders = j.at("reminders").get<scheduler::ReminderPolicy>();
    if (j.contains("week_start")) c.week_start = scheduler::parse_weekday(j.at("week_start").get<std::string>());
    c.admin_code = j.value("admin_code", "");
    for (const auto& e : j.value("participants", nlohmann::json::array())) {
      StudyCode s;
      s.code = e.at("code").get<std::string>();
      s.participant = e.at("participant").get<std::string>();
      s.start = e.at("start").get<Date>();
      s.timezone = e.value("timezone", "UTC");
      if (e.contains("index")) s.index = e.at("index").get<int>();
      c.codes.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  check_config(c);
  return c;
}

nlohmann::json config_to_json(const ServiceConfig& c) {
  nlohmann::json codes = nlohmann::json::array();
  for (const auto& s : c.codes) {
    nlohmann::json e = {{"code", s.code}, {"participant", s.participant}, {"start", s.start}, {"timezone", s.timezone}};
    if (s.index) e["index"] = *s.index;
    codes.push_back(std::move(e));
  }
  return {{"listen", c.host + ":" + std::to_string(c.port)},
          {"data", c.data_path.string()},
          {"survey", c.survey},
          {"theme", c.theme},
          {"reminders", c.reminders},
          {"week_start", scheduler::to_string(c.week_start)},
          {"admin_code", c.admin_code},
          {"participants", codes}};
}

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

void apply_env_overrides(ServiceConfig& c, const std::function<const char*(const char*)>& getenv) {
  if (const char* listen = getenv("EMAVIZ_LISTEN"); listen && *listen)
    std::tie(c.host, c.port) = parse_listen(listen);
  if (const char* data = getenv("EMAVIZ_DATA"); data && *data) c.data_path = data;
}

}  // namespace emaviz::service
