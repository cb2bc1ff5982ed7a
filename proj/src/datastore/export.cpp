#include "emaviz/datastore/export.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>
#include <tuple>

#include "emaviz/ema/json.hpp"

namespace emaviz::datastore {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int parse_int(std::string_view s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  return v;
}

auto row_key(const ExportRow& r) {
  return std::tie(r.participant, r.date, r.window, r.qid, r.revision);
}

}  // namespace

std::string encode_value(const ema::AnswerValue& v) {
  return std::visit(
      overloaded{
          [](const ema::Magnitude& m) { return std::to_string(m.value); },
          [](const ClockTime& c) { return c.str(); },
          [](const ema::Level& l) { return std::to_string(l.index); },
          [](const ema::Categories& c) {
            std::string out;
            for (const auto& l : c.labels) {
              if (!out.empty()) out += ';';
              out += l;
            }
            return out;
          },
          [](const ema::Flag& f) { return std::string(f.value ? "true" : "false"); },
          [](const ema::Text& t) { return t.value; },
      },
      v);
}

ema::AnswerValue decode_value(const ema::AnswerKind& kind, std::string_view cell) {
  return std::visit(
      overloaded{
          [&](const ema::QuantSequential&) -> ema::AnswerValue {
            return ema::Magnitude{parse_int(cell)};
          },
          [&](const ema::QuantCyclic&) -> ema::AnswerValue { return ClockTime::parse(cell); },
          [&](const ema::OrdinalSequential&) -> ema::AnswerValue {
            return ema::Level{parse_int(cell)};
          },
          [&](const ema::OrdinalDiverging&) -> ema::AnswerValue {
            return ema::Level{parse_int(cell)};
          },
          [&](const ema::Categorical&) -> ema::AnswerValue {
            std::vector<std::string> labels;
            std::size_t start = 0;
            while (start <= cell.size() && !cell.empty()) {
              const auto end = std::min(cell.find(';', start), cell.size());
              labels.emplace_back(cell.substr(start, end - start));
              start = end + 1;
            }
            return ema::make_categories(std::move(labels));
          },
          [&](const ema::Binary&) -> ema::AnswerValue {
            if (cell == "true") return ema::Flag{true};
            if (cell == "false") return ema::Flag{false};
            throw std::invalid_argument("not a flag: '" + std::string(cell) + "'");
          },
          [&](const ema::FreeText&) -> ema::AnswerValue { return ema::Text{std::string(cell)}; },
      },
      kind);
}

std::vector<ExportRow> export_rows(const LogStore& store, const ExportFilter& filter) {
  std::vector<ExportRow> rows;
  const auto ids = filter.participant ? std::vector<std::string>{*filter.participant}
                                      : store.participants();
  for (const auto& id : ids) {
    for (const auto& r : store.responses(id)) {
      if ((filter.from && r.date < *filter.from) || (filter.to && r.date > *filter.to)) continue;
      ExportRow base{r.participant, r.date, r.window, "", r.revision, "", r.submitted_at};
      if (r.answers.empty()) rows.push_back(base);
      for (const auto& [qid, v] : r.answers) {
        auto row = base;
        row.qid = qid;
        row.value = encode_value(v);
        rows.push_back(std::move(row));
      }
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return row_key(a) < row_key(b); });
  return rows;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string rows_to_csv(std::span<const ExportRow> rows) {
  std::string out;
  auto line = [&](std::initializer_list<std::string_view> cells) {
    bool first = true;
    for (auto c : cells) {
      if (!first) out += ',';
      out += csv_field(c);
      first = false;
    }
    out += "\r\n";
  };
  line({kCsvHeader[0], kCsvHeader[1], kCsvHeader[2], kCsvHeader[3], kCsvHeader[4], kCsvHeader[5],
        kCsvHeader[6]});
  for (const auto& r : rows) {
    line({r.participant, format_date(r.date), ema::to_string(r.window), r.qid,
          std::to_string(r.revision), r.value, r.submitted_at.str()});
  }
  return out;
}

std::string export_csv(const LogStore& store, const ExportFilter& filter) {
  return rows_to_csv(export_rows(store, filter));
}

nlohmann::json export_json(const LogStore& store, const ExportFilter& filter) {
  auto rows = nlohmann::json::array();
  for (const auto& r : export_rows(store, filter)) {
    rows.push_back({{"participant", r.participant},
                    {"date", r.date},
                    {"window", r.window},
                    {"qid", r.qid},
                    {"revision", r.revision},
                    {"value", r.value},
                    {"submitted_at", r.submitted_at}});
  }
  return {{"columns", kCsvHeader}, {"rows", std::move(rows)}};
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  std::size_t i = 0, line = 1;
  bool in_record = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '"' && field.empty()) {
      // Quoted field.
      ++i;
      for (;;) {
        if (i >= text.size())
          throw std::invalid_argument("line " + std::to_string(line) + ": unterminated quote");
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (text[i] == '\n') ++line;
        field += text[i++];
      }
      in_record = true;
      if (i < text.size() && text[i] != ',' && text[i] != '\r' && text[i] != '\n')
        throw std::invalid_argument("line " + std::to_string(line) + ": text after closing quote");
      continue;
    }
    if (c == ',') {
      end_field();
      in_record = true;
      ++i;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      ++i;
      end_field();
      records.push_back(std::move(record));
      record.clear();
      in_record = false;
      ++line;
    } else if (c == '"') {
      throw std::invalid_argument("line " + std::to_string(line) + ": stray quote");
    } else {
      field += c;
      in_record = true;
      ++i;
    }
  }
  if (in_record || !field.empty()) {
    end_field();
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<ExportRow> rows_from_csv(std::string_view csv) {
  const auto records = parse_csv(csv);
  if (records.empty()) throw std::invalid_argument("empty CSV: header row missing");
  if (!std::equal(records[0].begin(), records[0].end(), kCsvHeader.begin(), kCsvHeader.end()))
    throw std::invalid_argument("CSV header does not match the export format");
  std::vector<ExportRow> rows;
  for (std::size_t n = 1; n < records.size(); ++n) {
    const auto& f = records[n];
    try {
      if (f.size() != kCsvHeader.size())
        throw std::invalid_argument("expected " + std::to_string(kCsvHeader.size()) + " fields");
      rows.push_back(ExportRow{f[0], parse_date(f[1]), ema::parse_window(f[2]), f[3],
                               parse_int(f[4]), f[5], Timestamp::parse(f[6])});
    } catch (const std::exception& e) {
      throw std::invalid_argument("record " + std::to_string(n + 1) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<ExportRow> rows_from_json(const nlohmann::json& j) {
  std::vector<ExportRow> rows;
  for (const auto& r : j.at("rows")) {
    rows.push_back(ExportRow{r.at("participant").get<std::string>(), r.at("date").get<Date>(),
                             r.at("window").get<ema::SurveyWindow>(), r.at("qid").get<std::string>(),
                             r.at("revision").get<int>(), r.at("value").get<std::string>(),
                             r.at("submitted_at").get<Timestamp>()});
  }
  return rows;
}

int import_rows(LogStore& store, std::span<const ExportRow> rows, const ema::SurveyDefinition& def) {
  using Key = std::tuple<std::string, Date, int, int>;
  std::map<Key, ema::EmaResponse> grouped;
  for (const auto& row : rows) {
    const Key key{row.participant, row.date, ema::index_of(row.window), row.revision};
    auto [it, fresh] = grouped.try_emplace(key);
    auto& r = it->second;
    if (fresh) {
      r.participant = row.participant;
      r.date = row.date;
      r.window = row.window;
      r.revision = row.revision;
      r.submitted_at = row.submitted_at;
    } else if (!(r.submitted_at == row.submitted_at)) {
      throw std::invalid_argument("rows of one revision disagree on submitted_at");
    }
    if (row.qid.empty()) continue;
    const auto* q = def.find(row.qid);
    if (!q) throw std::invalid_argument("unknown qid '" + row.qid + "'");
    if (!r.answers.emplace(row.qid, decode_value(q->answer, row.value)).second)
      throw std::invalid_argument("duplicate row for qid '" + row.qid + "'");
  }
  for (const auto& [key, r] : grouped) {
    const auto errors = ema::validate_response(def, r);
    if (!errors.empty())
      throw std::invalid_argument(r.participant + " " + format_date(r.date) + " " +
                                  std::string(ema::to_string(r.window)) + ": " + errors[0].message);
  }
  for (const auto& [key, r] : grouped) {
    store.put_participant(r.participant);
    store.put_response(r);
  }
  return static_cast<int>(grouped.size());
}

}  // namespace emaviz::datastore
