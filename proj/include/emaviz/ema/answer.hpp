#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "emaviz/core/time.hpp"

namespace emaviz::ema {

// Answer kinds. Each question declares exactly one.

struct QuantSequential {
  int min = 0;
  int max = 10;
  friend bool operator==(const QuantSequential&, const QuantSequential&) = default;
};

/// Clock time of day, cyclic over 24h.
struct QuantCyclic {
  friend bool operator==(const QuantCyclic&, const QuantCyclic&) = default;
};

struct OrdinalSequential {
  std::vector<std::string> levels;
  friend bool operator==(const OrdinalSequential&, const OrdinalSequential&) = default;
};

/// Five-level Likert scale with a neutral midpoint.
struct OrdinalDiverging {
  std::vector<std::string> levels;
  friend bool operator==(const OrdinalDiverging&, const OrdinalDiverging&) = default;
};

struct Categorical {
  std::vector<std::string> labels;
  bool multi = false;
  friend bool operator==(const Categorical&, const Categorical&) = default;
};

struct Binary {
  friend bool operator==(const Binary&, const Binary&) = default;
};

struct FreeText {
  friend bool operator==(const FreeText&, const FreeText&) = default;
};

using AnswerKind =
    std::variant<QuantSequential, QuantCyclic, OrdinalSequential, OrdinalDiverging, Categorical,
                 Binary, FreeText>;

/// Throws std::invalid_argument if the kind breaks its structural invariants.
void check_kind(const AnswerKind& kind);
std::string_view kind_name(const AnswerKind& kind);

// Answer values. Ordinal levels are zero-based indices into the kind's level list.

struct Magnitude {
  int value = 0;
  friend auto operator<=>(const Magnitude&, const Magnitude&) = default;
};

struct Level {
  int index = 0;
  friend auto operator<=>(const Level&, const Level&) = default;
};

/// Selected category labels, kept sorted and unique.
struct Categories {
  std::vector<std::string> labels;
  friend auto operator<=>(const Categories&, const Categories&) = default;
};

struct Flag {
  bool value = false;
  friend auto operator<=>(const Flag&, const Flag&) = default;
};

struct Text {
  std::string value;
  friend auto operator<=>(const Text&, const Text&) = default;
};

using AnswerValue = std::variant<Magnitude, ClockTime, Level, Categories, Flag, Text>;

Categories make_categories(std::vector<std::string> labels);
std::string_view value_name(const AnswerValue& value);

enum class Violation { out_of_range, wrong_window, unknown_qid, wrong_variant };

std::string_view to_string(Violation v);

/// Returns the first violation of `value` against `kind`, if any, with a human message.
std::optional<std::pair<Violation, std::string>> check_value(const AnswerKind& kind,
                                                             const AnswerValue& value);

}  // namespace emaviz::ema
