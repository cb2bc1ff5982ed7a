#include "emaviz/datastore/log_store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <mutex>

#include "emaviz/ema/json.hpp"

namespace emaviz::datastore {

namespace {

constexpr std::size_t kHeader = 8;
// Guards against a corrupt length field asking for gigabytes.
constexpr std::uint32_t kMaxPayload = 64u << 20;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

std::uint32_t checksum(std::string_view payload) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(payload.data()), static_cast<uInt>(payload.size())));
}

[[noreturn]] void fail(const std::string& what, const std::filesystem::path& path) {
  throw StorageError(what + " " + path.string() + ": " + std::strerror(errno));
}

}  // namespace

std::string frame_record(std::string_view payload) {
  std::string out;
  out.reserve(kHeader + payload.size());
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  put_u32(out, checksum(payload));
  out.append(payload);
  return out;
}

LogStore::LogStore(std::filesystem::path path, StoreOptions options)
    : path_(std::move(path)), options_(options) {
  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) fail("cannot open", path_);
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fail("store is locked by another process:", path_);
  }
  try {
    recover();
  } catch (...) {
    ::close(fd_);
    throw;
  }
}

LogStore::~LogStore() {
  if (fd_ >= 0) ::close(fd_);
}

void LogStore::recover() {
  struct stat st {};
  if (::fstat(fd_, &st) != 0) fail("cannot stat", path_);
  std::string data(static_cast<std::size_t>(st.st_size), '\0');
  std::size_t got = 0;
  while (got < data.size()) {
    const auto n = ::pread(fd_, data.data() + got, data.size() - got, static_cast<off_t>(got));
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) fail("cannot read", path_);
    if (n == 0) break;
    got += static_cast<std::size_t>(n);
  }
  data.resize(got);

  std::size_t pos = 0;
  while (pos + kHeader <= data.size()) {
    const auto len = get_u32(data.data() + pos);
    const auto crc = get_u32(data.data() + pos + 4);
    if (len > kMaxPayload || pos + kHeader + len > data.size()) break;
    const std::string_view payload(data.data() + pos + kHeader, len);
    if (checksum(payload) != crc) break;
    try {
      apply(nlohmann::json::parse(payload));
    } catch (const std::exception&) {
      break;
    }
    pos += kHeader + len;
    ++records_;
  }

  recovery_ = {records_, pos, data.size() - pos};
  if (pos < data.size()) {
    if (::ftruncate(fd_, static_cast<off_t>(pos)) != 0) fail("cannot truncate", path_);
    if (::fsync(fd_) != 0) fail("cannot sync", path_);
  }
  size_ = pos;
}

void LogStore::append(const nlohmann::json& record) {
  const auto frame = frame_record(record.dump());
  std::size_t written = 0;
  while (written < frame.size()) {
    const auto n = ::write(fd_, frame.data() + written, frame.size() - written);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      const int saved = errno;
      // Leave no partial record behind for the next append to land after.
      if (::ftruncate(fd_, static_cast<off_t>(size_)) != 0) {}
      errno = saved;
      fail("cannot append to", path_);
    }
    written += static_cast<std::size_t>(n);
  }
  if (options_.sync && ::fdatasync(fd_) != 0) {
    const int saved = errno;
    if (::ftruncate(fd_, static_cast<off_t>(size_)) != 0) {}
    errno = saved;
    fail("cannot sync", path_);
  }
  size_ += frame.size();
  ++records_;
}

void LogStore::apply(const nlohmann::json& record) {
  const auto& type = record.at("type").get_ref<const std::string&>();
  const auto& data = record.at("data");
  if (type == "participant") {
    entries_.try_emplace(data.at("participant").get<std::string>());
  } else if (type == "plan") {
    auto plan = data.get<scheduler::StudyPlan>();
    auto& e = entries_[plan.participant];
    e.plan = std::move(plan);
  } else if (type == "response") {
    auto r = data.get<ema::EmaResponse>();
    auto& e = entries_[r.participant];
    auto& rev = e.max_revision[{r.date, ema::index_of(r.window)}];
    rev = std::max(rev, r.revision);
    e.responses.push_back(std::move(r));
  } else if (type == "event") {
    auto ev = data.get<EventRecord>();
    events_[ev.participant].push_back(std::move(ev));
  } else {
    throw std::invalid_argument("unknown record type '" + type + "'");
  }
}

std::uint64_t LogStore::record_count() const {
  std::shared_lock lock(mutex_);
  return records_;
}

void LogStore::put_participant(const std::string& participant) {
  if (participant.empty()) throw std::invalid_argument("empty participant id");
  std::unique_lock lock(mutex_);
  if (entries_.contains(participant)) return;
  const nlohmann::json rec{{"type", "participant"}, {"data", {{"participant", participant}}}};
  append(rec);
  apply(rec);
}

void LogStore::put_plan(const scheduler::StudyPlan& plan) {
  scheduler::check_plan(plan);
  std::unique_lock lock(mutex_);
  const nlohmann::json rec{{"type", "plan"}, {"data", plan}};
  append(rec);
  apply(rec);
}

int LogStore::put_response(ema::EmaResponse r) {
  std::unique_lock lock(mutex_);
  const auto it = entries_.find(r.participant);
  if (it == entries_.end())
    throw std::invalid_argument("unknown participant '" + r.participant + "'");
  const auto prior = it->second.max_revision.find({r.date, ema::index_of(r.window)});
  r.revision = 1 + (prior == it->second.max_revision.end() ? 0 : prior->second);
  const nlohmann::json rec{{"type", "response"}, {"data", r}};
  append(rec);
  apply(rec);
  return r.revision;
}

void LogStore::append_event(const EventRecord& e) {
  std::unique_lock lock(mutex_);
  const auto it = events_.find(e.participant);
  if (it != events_.end() && !it->second.empty() && e.at < it->second.back().at)
    throw std::invalid_argument("event for '" + e.participant + "' is older than the last one");
  const nlohmann::json rec{{"type", "event"}, {"data", e}};
  append(rec);
  apply(rec);
}

bool LogStore::has_participant(const std::string& participant) const {
  std::shared_lock lock(mutex_);
  return entries_.contains(participant);
}

std::vector<std::string> LogStore::participants() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : entries_) out.push_back(id);
  return out;
}

std::optional<scheduler::StudyPlan> LogStore::plan(const std::string& participant) const {
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(participant);
  return it == entries_.end() ? std::nullopt : it->second.plan;
}

std::vector<ema::EmaResponse> LogStore::responses(const std::string& participant) const {
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(participant);
  return it == entries_.end() ? std::vector<ema::EmaResponse>{} : it->second.responses;
}

std::vector<ema::EmaResponse> LogStore::all_responses() const {
  std::shared_lock lock(mutex_);
  std::vector<ema::EmaResponse> out;
  for (const auto& [_, e] : entries_) out.insert(out.end(), e.responses.begin(), e.responses.end());
  return out;
}

std::vector<EventRecord> LogStore::events(const std::string& participant) const {
  std::shared_lock lock(mutex_);
  const auto it = events_.find(participant);
  return it == events_.end() ? std::vector<EventRecord>{} : it->second;
}

std::vector<EventRecord> LogStore::all_events() const {
  std::shared_lock lock(mutex_);
  std::vector<EventRecord> out;
  for (const auto& [_, evs] : events_) out.insert(out.end(), evs.begin(), evs.end());
  return out;
}

ema::WeekDataset LogStore::get_week(const std::string& participant, Date week_start,
                                    absl::Time now, const ema::WindowTimes& windows) const {
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(participant);
  if (it == entries_.end()) throw std::out_of_range("unknown participant '" + participant + "'");
  const auto zone = load_zone(it->second.plan ? it->second.plan->timezone : "UTC");
  return ema::build_week_dataset(participant, it->second.responses, week_start, now,
                                 ema::SlotCalendar{windows, zone});
}

}  // namespace emaviz::datastore
