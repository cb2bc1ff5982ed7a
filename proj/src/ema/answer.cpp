#include "emaviz/ema/answer.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace emaviz::ema {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool has_duplicates(const std::vector<std::string>& labels) {
  std::set<std::string_view> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) return true;
  }
  return false;
}

}  // namespace

void check_kind(const AnswerKind& kind) {
  std::visit(overloaded{
                 [](const QuantSequential& q) {
                   if (!(q.min < q.max)) throw std::invalid_argument("QuantSequential needs min < max");
                 },
                 [](const OrdinalSequential& o) {
                   if (o.levels.size() < 2 || has_duplicates(o.levels))
                     throw std::invalid_argument("OrdinalSequential needs >= 2 distinct levels");
                 },
                 [](const OrdinalDiverging& o) {
                   if (o.levels.size() != 5 || has_duplicates(o.levels))
                     throw std::invalid_argument("OrdinalDiverging needs exactly 5 distinct levels");
                 },
                 [](const Categorical& c) {
                   if (c.labels.empty()) throw std::invalid_argument("Categorical label set is empty");
                   if (has_duplicates(c.labels))
                     throw std::invalid_argument("Categorical label set has duplicates");
                 },
                 [](const auto&) {},
             },
             kind);
}

std::string_view kind_name(const AnswerKind& kind) {
  static constexpr std::string_view names[] = {"quant-sequential", "quant-cyclic",
                                               "ordinal-sequential", "ordinal-diverging",
                                               "categorical", "binary", "free-text"};
  return names[kind.index()];
}

Categories make_categories(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return Categories{std::move(labels)};
}

std::string_view value_name(const AnswerValue& value) {
  static constexpr std::string_view names[] = {"magnitude", "clock", "level",
                                               "categories", "flag", "text"};
  return names[value.index()];
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::out_of_range: return "out-of-range";
    case Violation::wrong_window: return "wrong-window";
    case Violation::unknown_qid: return "unknown-qid";
    case Violation::wrong_variant: return "wrong-variant";
  }
  return "?";
}

std::optional<std::pair<Violation, std::string>> check_value(const AnswerKind& kind,
                                                             const AnswerValue& value) {
  using Result = std::optional<std::pair<Violation, std::string>>;
  auto wrong = [&]() -> Result {
    return std::pair{Violation::wrong_variant, std::string(value_name(value)) +
                                                   " answer for " + std::string(kind_name(kind)) +
                                                   " question"};
  };
  auto range = [](std::string msg) -> Result {
    return std::pair{Violation::out_of_range, std::move(msg)};
  };

  return std::visit(
      overloaded{
          [&](const QuantSequential& q) -> Result {
            const auto* m = std::get_if<Magnitude>(&value);
            if (!m) return wrong();
            if (m->value < q.min || m->value > q.max)
              return range(std::to_string(m->value) + " outside " + std::to_string(q.min) + ".." +
                           std::to_string(q.max));
            return std::nullopt;
          },
          [&](const QuantCyclic&) -> Result {
            // ClockTime cannot hold an out-of-range value.
            return std::holds_alternative<ClockTime>(value) ? std::nullopt : wrong();
          },
          [&](const OrdinalSequential& o) -> Result {
            const auto* l = std::get_if<Level>(&value);
            if (!l) return wrong();
            if (l->index < 0 || l->index >= static_cast<int>(o.levels.size()))
              return range("level index " + std::to_string(l->index) + " outside scale");
            return std::nullopt;
          },
          [&](const OrdinalDiverging& o) -> Result {
            const auto* l = std::get_if<Level>(&value);
            if (!l) return wrong();
            if (l->index < 0 || l->index >= static_cast<int>(o.levels.size()))
              return range("level index " + std::to_string(l->index) + " outside scale");
            return std::nullopt;
          },
          [&](const Categorical& c) -> Result {
            const auto* cs = std::get_if<Categories>(&value);
            if (!cs) return wrong();
            if (!std::is_sorted(cs->labels.begin(), cs->labels.end()) ||
                std::adjacent_find(cs->labels.begin(), cs->labels.end()) != cs->labels.end())
              return range("category set must be sorted and duplicate-free");
            for (const auto& label : cs->labels) {
              if (std::find(c.labels.begin(), c.labels.end(), label) == c.labels.end())
                return range("undeclared category '" + label + "'");
            }
            if (!c.multi && cs->labels.size() != 1)
              return range("single-answer question needs exactly one category");
            return std::nullopt;
          },
          [&](const Binary&) -> Result {
            return std::holds_alternative<Flag>(value) ? std::nullopt : wrong();
          },
          [&](const FreeText&) -> Result {
            return std::holds_alternative<Text>(value) ? std::nullopt : wrong();
          },
      },
      kind);
}

}  // namespace emaviz::ema
