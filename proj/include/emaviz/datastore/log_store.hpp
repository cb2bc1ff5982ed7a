#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "emaviz/datastore/events.hpp"
#include "emaviz/ema/response.hpp"
#include "emaviz/ema/week.hpp"
#include "emaviz/scheduler/plan.hpp"

namespace emaviz::datastore {

/// I/O failure on the log file. Never swallowed: a write that throws did not happen.
class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StoreOptions {
  /// fdatasync after every append. Off trades durability on power loss for speed.
  bool sync = true;
};

/// What happened to the tail of the file when it was opened.
struct RecoveryInfo {
  std::uint64_t records = 0;
  std::uint64_t valid_bytes = 0;
  std::uint64_t discarded_bytes = 0;
};

/// Encodes one record: u32 little-endian payload length, u32 little-endian CRC-32 of the
/// payload, payload bytes.
std::string frame_record(std::string_view payload);

/// Append-only single-file store of participants, plans, response revisions and events.
/// Every mutation is one framed JSON record; the in-memory index is rebuilt on open and
/// a torn or corrupt tail is cut off. Thread-safe: writers are serialised, readers share.
class LogStore {
 public:
  explicit LogStore(std::filesystem::path path, StoreOptions options = {});
  ~LogStore();
  LogStore(const LogStore&) = delete;
  LogStore& operator=(const LogStore&) = delete;

  const std::filesystem::path& path() const { return path_; }
  RecoveryInfo recovery() const { return recovery_; }
  std::uint64_t record_count() const;

  /// No-op if already registered.
  void put_participant(const std::string& participant);
  /// Registers the participant too. A later plan supersedes an earlier one.
  void put_plan(const scheduler::StudyPlan& plan);
  /// Stores a new revision for the response's slot and returns it. The incoming
  /// `revision` field is ignored. Throws std::invalid_argument for unknown participants.
  int put_response(ema::EmaResponse r);
  /// Throws std::invalid_argument if `e.at` is earlier than the participant's last event.
  void append_event(const EventRecord& e);

  bool has_participant(const std::string& participant) const;
  std::vector<std::string> participants() const;
  std::optional<scheduler::StudyPlan> plan(const std::string& participant) const;

  /// All revisions, in append order.
  std::vector<ema::EmaResponse> responses(const std::string& participant) const;
  std::vector<ema::EmaResponse> all_responses() const;
  std::vector<EventRecord> events(const std::string& participant) const;
  std::vector<EventRecord> all_events() const;

  /// Week view over every stored revision, in the participant's plan time zone (UTC
  /// without a plan). Throws std::out_of_range for unknown participants.
  ema::WeekDataset get_week(const std::string& participant, Date week_start, absl::Time now,
                            const ema::WindowTimes& windows = {}) const;

 private:
  struct Entry {
    std::optional<scheduler::StudyPlan> plan;
    std::vector<ema::EmaResponse> responses;
    std::map<std::pair<Date, int>, int> max_revision;
  };

  void append(const nlohmann::json& record);
  void apply(const nlohmann::json& record);
  void recover();

  std::filesystem::path path_;
  StoreOptions options_;
  int fd_ = -1;
  std::uint64_t size_ = 0;
  std::uint64_t records_ = 0;
  RecoveryInfo recovery_;

  mutable std::shared_mutex mutex_;
  std::map<std::string, Entry, std::less<>> entries_;
  std::map<std::string, std::vector<EventRecord>, std::less<>> events_;
};

}  // namespace emaviz::datastore
