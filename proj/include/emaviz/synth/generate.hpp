#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "emaviz/ema/response.hpp"
#include "emaviz/ema/week.hpp"
#include "emaviz/scheduler/plan.hpp"

namespace emaviz::synth {

/// Latent traits of one synthetic child. Magnitudes are on the 0..10 survey scale.
struct SyntheticPersona {
  /// Usual bedtime and wake time, minutes after midnight.
  int bedtime = 22 * 60 + 30;
  int waketime = 7 * 60;
  /// Standard deviation of nightly shifts, minutes.
  double sleep_jitter = 40;
  /// Chance that each symptom category shows up in a slot at full intensity; indexed
  /// like kSymptomCategories.
  std::array<double, 9> symptom_propensity = {0.6, 0.5, 0.3, 0.2, 0.2, 0.1, 0.3, 0.2, 0.05};
  double symptom_base = 3;
  /// Extra symptom intensity per step of poor sleep (quality 3 minus reported level).
  double sleep_to_symptom = 1.2;
  /// Worry gained per unit of symptom intensity.
  double symptom_to_worry = 0.5;
  /// Happiness gained per step of the diverging peer score.
  double peer_to_happy = 1.0;
  double worry_base = 3;
  double happy_base = 6;
  /// Standard deviation of measurement noise added to each magnitude.
  double noise = 1;
  std::uint64_t seed = 0;

  friend bool operator==(const SyntheticPersona&, const SyntheticPersona&) = default;
};

/// Problems with a persona, empty when valid.
std::vector<std::string> check_persona(const SyntheticPersona& p);

/// A persona drawn from broad ranges.
SyntheticPersona random_persona(std::uint64_t seed);

struct Full {
  friend bool operator==(const Full&, const Full&) = default;
};
/// One slot on most days and two on some.
struct MinimalCompleter {
  friend bool operator==(const MinimalCompleter&, const MinimalCompleter&) = default;
};
/// Every slot on the first `active_days` days, nothing afterwards.
struct Binger {
  int active_days = 3;
  friend bool operator==(const Binger&, const Binger&) = default;
};
/// Each slot answered with probability `p`.
struct RandomCompliance {
  double p = 0.5;
  friend bool operator==(const RandomCompliance&, const RandomCompliance&) = default;
};

using ComplianceProfile = std::variant<Full, MinimalCompleter, Binger, RandomCompliance>;

/// Throws std::invalid_argument for Binger outside 1..6 or p outside [0, 1].
void check_profile(const ComplianceProfile& profile);
std::string to_string(const ComplianceProfile& profile);
/// "full", "minimal-completer", "binger:3", "random:0.4".
ComplianceProfile parse_profile(std::string_view text);

struct WeekOptions {
  /// Chance that any single question in an answered slot is skipped.
  double dropout = 0.05;
  std::string participant = "P001";
  ema::SlotCalendar calendar;
};

/// Responses for one week, ordered by slot. Deterministic in (seed, persona, profile,
/// options); every response passes validate_response against the default survey.
std::vector<ema::EmaResponse> generate_week(std::uint64_t seed, const SyntheticPersona& persona,
                                            const ComplianceProfile& profile, Date week_start,
                                            const WeekOptions& options = {});

struct CohortMember {
  scheduler::StudyPlan plan;
  SyntheticPersona persona;
  ComplianceProfile profile;
  /// Both active weeks; the washout week has no surveys.
  std::vector<ema::EmaResponse> responses;
};

struct CohortOptions {
  Date start{2024, 1, 8};
  std::string timezone = "UTC";
  double dropout = 0.05;
};

/// Throws std::invalid_argument if n < 1.
std::vector<CohortMember> generate_cohort(int n, std::uint64_t seed, const CohortOptions& options = {});

nlohmann::json to_json(const SyntheticPersona& p);
SyntheticPersona persona_from_json(const nlohmann::json& j);

}  // namespace emaviz::synth
