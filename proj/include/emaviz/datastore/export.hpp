#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "emaviz/datastore/log_store.hpp"
#include "emaviz/ema/survey.hpp"

namespace emaviz::datastore {

/// One answer of one stored revision. A revision without answers exports as a single
/// row with an empty qid and value.
struct ExportRow {
  std::string participant;
  Date date;
  ema::SurveyWindow window = ema::SurveyWindow::morning;
  std::string qid;
  int revision = 1;
  std::string value;
  Timestamp submitted_at;

  friend bool operator==(const ExportRow&, const ExportRow&) = default;
};

inline constexpr std::array<std::string_view, 7> kCsvHeader = {
    "participant", "date", "window", "qid", "revision", "value", "submitted_at"};

struct ExportFilter {
  std::optional<std::string> participant;
  /// Inclusive bounds on the response date.
  std::optional<Date> from;
  std::optional<Date> to;
};

/// Cell text for an answer: integers for magnitudes and zero-based levels, "HH:MM" for
/// clock times, ';'-joined labels, "true"/"false", free text verbatim.
std::string encode_value(const ema::AnswerValue& v);
/// Inverse of encode_value, driven by the question kind. Throws std::invalid_argument.
ema::AnswerValue decode_value(const ema::AnswerKind& kind, std::string_view cell);

/// Rows ordered by participant, date, window, qid, revision.
std::vector<ExportRow> export_rows(const LogStore& store, const ExportFilter& filter = {});
std::string export_csv(const LogStore& store, const ExportFilter& filter = {});
/// {"columns": [...], "rows": [{...}, ...]} with the same cells as the CSV.
nlohmann::json export_json(const LogStore& store, const ExportFilter& filter = {});

std::string rows_to_csv(std::span<const ExportRow> rows);
/// Parses an export; the header must match kCsvHeader. Throws std::invalid_argument with
/// the offending line number.
std::vector<ExportRow> rows_from_csv(std::string_view csv);
std::vector<ExportRow> rows_from_json(const nlohmann::json& j);

/// Regroups rows into responses, validates them against `def`, and stores them as new
/// revisions in source revision order. Unknown participants are registered. Nothing is
/// written if any row fails to decode or validate. Returns the number of responses.
int import_rows(LogStore& store, std::span<const ExportRow> rows, const ema::SurveyDefinition& def);

/// RFC 4180 records: comma separated, CRLF line ends, fields with ',', '"', CR or LF
/// quoted with doubled quotes. Accepts LF line ends on input.
std::string csv_field(std::string_view s);
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace emaviz::datastore
